#pragma once

// Whitespace tokenizer shared by the text file parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nnrank/error.hpp"

namespace nnr::text {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\r' || s[j] == '\n')) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) nl = s.size();
    std::string_view line = s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!split_ws(line).empty()) out.push_back(line);
    start = nl + 1;
  }
  return out;
}

inline std::size_t parse_count(std::string_view tok, std::string_view what) {
  if (tok.empty()) throw Error(ErrorCode::MalformedFile, "missing " + std::string(what));
  std::size_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9')
      throw Error(ErrorCode::MalformedFile, "bad " + std::string(what) + " '" + std::string(tok) + "'");
    v = v * 10 + static_cast<std::size_t>(ch - '0');
    if (v > (std::size_t{1} << 40)) throw Error(ErrorCode::MalformedFile, std::string(what) + " too large");
  }
  return v;
}

}  // namespace nnr::text
