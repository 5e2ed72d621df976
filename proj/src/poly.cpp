#include "nnrank/poly.hpp"

#include <algorithm>
#include <sstream>

#include "nnrank/error.hpp"

namespace nnr {

MultiPoly::MultiPoly(const Rational& c) { add_term({0, 0, 0, 0}, c); }

MultiPoly MultiPoly::variable(PolyVar v) {
  Exponents e{0, 0, 0, 0};
  e[static_cast<std::size_t>(v)] = 1;
  return monomial(Rational(1), e);
}

MultiPoly MultiPoly::monomial(const Rational& coeff, Exponents e) {
  MultiPoly p;
  p.add_term(e, coeff);
  return p;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

unsigned MultiPoly::total_degree() const {
  unsigned deg = 0;
  for (const auto& [e, c] : terms_) deg = std::max(deg, unsigned{e[0]} + e[1] + e[2] + e[3]);
  return deg;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, Rational(-c));
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, Rational(-c));
  return out;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (std::size_t k = 0; k < 4; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
      out.add_term(e, Rational(ca * cb));
    }
  return out;
}

Scalar MultiPoly::evaluate(const PolyPoint& point, Domain domain) const {
  for (const auto& x : point)
    if (!x.in_domain(domain))
      throw Error(ErrorCode::WrongDomain, "evaluation point " + format_scalar(x) + " outside domain");
  Scalar total(0);
  for (const auto& [e, c] : terms_) {
    Scalar term(c);
    for (std::size_t k = 0; k < 4; ++k)
      for (unsigned p = 0; p < e[k]; ++p) term *= point[k];
    total += term;
  }
  return total;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  static constexpr char names[4] = {'a', 'b', 'c', 'd'};
  std::ostringstream os;
  bool first = true;
  // highest total degree first, then reverse lexicographic exponents
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.rbegin(), terms_.rend());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
    return x.first[0] + x.first[1] + x.first[2] + x.first[3] > y.first[0] + y.first[1] + y.first[2] + y.first[3];
  });
  for (const auto& [e, c] : ordered) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool constant = e == Exponents{0, 0, 0, 0};
    bool wrote = false;
    if (constant || mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t k = 0; k < 4; ++k) {
      if (e[k] == 0) continue;
      if (wrote) os << '*';
      os << names[k];
      if (e[k] > 1) os << '^' << unsigned{e[k]};
      wrote = true;
    }
  }
  return os.str();
}

namespace {

MultiPoly det_rec(const PolyGrid& g, std::vector<std::size_t>& cols, std::size_t row) {
  if (row == g.size()) return MultiPoly(1);
  MultiPoly total;
  int sign = 1;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t col = cols[k];
    const MultiPoly& entry = g[row][col];
    if (!entry.is_zero()) {
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
      MultiPoly sub = entry * det_rec(g, cols, row + 1);
      cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), col);
      if (sign > 0) total += sub;
      else total -= sub;
    }
    sign = -sign;
  }
  return total;
}

}  // namespace

MultiPoly det_symbolic(const PolyGrid& grid) {
  for (const auto& row : grid)
    if (row.size() != grid.size()) throw Error(ErrorCode::DimMismatch, "det_symbolic needs a square grid");
  std::vector<std::size_t> cols(grid.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  return det_rec(grid, cols, 0);
}

}  // namespace nnr
