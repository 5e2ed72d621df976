#include "nnrank/gadgets.hpp"

#include <algorithm>
#include <sstream>

#include "nnrank/error.hpp"
#include "text.hpp"

namespace nnr {

namespace {

constexpr int kB0[4][4] = {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}};

Domain join(Domain a, Domain b) {
  return (a == Domain::Quadratic || b == Domain::Quadratic) ? Domain::Quadratic : Domain::Rational;
}

Domain domain_of(const Scalar& x) { return x.is_rational() ? Domain::Rational : Domain::Quadratic; }

bool valid_var_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
  });
}

void require_interval_start(const Scalar& s) {
  if (s < Scalar(1))
    throw Error(ErrorCode::NegativeInput, "s = " + format_scalar(s) + " must be >= 1 so that [s-1, s] >= 0");
}

// Writes the gadget rows/cols of `step` through `put(i, j, value)`.
template <class Put>
void write_gadget(const GadgetStep& step, Put&& put) {
  for (auto col : step.var_cols) put(step.pivot_row, col, step.s);
  for (auto col : step.new_cols) put(step.pivot_row, col, Scalar(1));
  for (auto col : step.var_cols) put(step.new_rows[0], col, Scalar(1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (kB0[i][j]) put(step.new_rows[i], step.new_cols[j], Scalar(1));
}

}  // namespace

PartialMatrix::PartialMatrix(std::size_t rows, std::size_t cols, Domain domain)
    : rows_(rows), cols_(cols), domain_(domain), entries_(rows * cols, Scalar(0)) {}

PartialMatrix PartialMatrix::from_matrix(const ExactMatrix& m) {
  PartialMatrix pm(m.rows(), m.cols(), m.domain());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) pm.set_const(i, j, m(i, j));
  return pm;
}

void PartialMatrix::set_const(std::size_t i, std::size_t j, Scalar v) {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimMismatch, "index out of range");
  if (!v.in_domain(domain_)) throw Error(ErrorCode::WrongDomain, "entry " + format_scalar(v));
  if (quad_sign(v) < 0) throw Error(ErrorCode::NegativeInput, "negative constant " + format_scalar(v));
  entries_[i * cols_ + j] = std::move(v);
}

void PartialMatrix::set_var(std::size_t i, std::size_t j, const std::string& name) {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimMismatch, "index out of range");
  if (!vars_.contains(name)) throw Error(ErrorCode::UnknownVar, "undeclared variable '" + name + "'");
  entries_[i * cols_ + j] = VarEntry{name};
}

void PartialMatrix::declare_var(const std::string& name, Scalar s) {
  if (!valid_var_name(name)) throw Error(ErrorCode::MalformedFile, "bad variable name '" + name + "'");
  if (!s.in_domain(domain_)) throw Error(ErrorCode::WrongDomain, "s of '" + name + "' outside domain");
  vars_[name] = std::move(s);
}

void PartialMatrix::drop_var(const std::string& name) {
  if (!occurrences(name).empty()) throw Error(ErrorCode::UnknownVar, "variable '" + name + "' still occurs");
  vars_.erase(name);
}

std::vector<std::pair<std::size_t, std::size_t>> PartialMatrix::occurrences(const std::string& name) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (const auto* v = std::get_if<VarEntry>(&(*this)(i, j)); v != nullptr && v->name == name)
        out.emplace_back(i, j);
  return out;
}

bool PartialMatrix::is_constant() const {
  return std::none_of(entries_.begin(), entries_.end(),
                      [](const PartialEntry& e) { return std::holds_alternative<VarEntry>(e); });
}

ExactMatrix PartialMatrix::complete(const std::map<std::string, Scalar>& values) const {
  Domain d = domain_;
  for (const auto& [name, v] : values) d = join(d, domain_of(v));
  ExactMatrix m(rows_, cols_, d);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto& e = (*this)(i, j);
      if (const auto* c = std::get_if<Scalar>(&e)) {
        m.set(i, j, *c);
      } else {
        const auto& name = std::get<VarEntry>(e).name;
        auto it = values.find(name);
        if (it == values.end()) throw Error(ErrorCode::UnresolvedVariables, "no value for '" + name + "'");
        m.set(i, j, it->second);
      }
    }
  return m;
}

ExactMatrix build_b0() {
  ExactMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m.set(i, j, kB0[i][j]);
  return m;
}

ExactMatrix build_b(std::span<const Scalar> alphas) {
  Domain d = Domain::Rational;
  for (const auto& a : alphas) {
    if (quad_sign(a) < 0) throw Error(ErrorCode::NegativeInput, "alpha " + format_scalar(a) + " < 0");
    d = join(d, domain_of(a));
  }
  const std::size_t n = alphas.size();
  ExactMatrix m(5, n + 4, d);
  for (std::size_t j = 0; j < n; ++j) {
    m.set(0, j, alphas[j]);
    m.set(1, j, 1);
  }
  for (std::size_t j = 0; j < 4; ++j) m.set(0, n + j, 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m.set(i + 1, n + j, kB0[i][j]);
  return m;
}

NNFactorization factor_b_equal(const Scalar& alpha, std::size_t n) {
  if (alpha < Scalar(0) || alpha > Scalar(1))
    throw Error(ErrorCode::AlphaOutOfRange, "alpha = " + format_scalar(alpha) + " outside [0, 1]");
  const std::vector<Scalar> alphas(n, alpha);
  const ExactMatrix b = build_b(alphas);
  // row 1 = alpha*row2 + (1-alpha)*row3 + alpha*row4 + (1-alpha)*row5
  const Scalar weights[4] = {alpha, Scalar(1) - alpha, alpha, Scalar(1) - alpha};
  NNFactorization f(5, n + 4, b.domain());
  for (std::size_t t = 0; t < 4; ++t) {
    std::vector<Scalar> u(5, Scalar(0));
    u[0] = weights[t];
    u[t + 1] = 1;
    f.add_term(std::move(u), std::vector<Scalar>(b.row(t + 1).begin(), b.row(t + 1).end()));
  }
  return f;
}

ExactMatrix wrap_gadget(const ExactMatrix& a, const ExactMatrix& b, const ExactMatrix& c, const Scalar& s,
                        std::size_t r) {
  const std::size_t m = a.rows(), n = a.cols(), k = b.cols();
  if (b.rows() != m || c.rows() != 1 || c.cols() != n)
    throw Error(ErrorCode::DimMismatch, "need A: m x n, B: m x k, c: 1 x n");
  if (k == 0) throw Error(ErrorCode::DimMismatch, "B must have at least one column");
  for (const auto* x : {&a, &b, &c})
    if (!x->is_nonnegative()) throw Error(ErrorCode::NegativeInput, "A, B and c must be nonnegative");
  require_interval_start(s);
  if (k > 1) {
    const std::size_t rank = rank_exact(a);
    if (rank < r)
      throw Error(ErrorCode::PreconditionNotCertified,
                  "k = " + std::to_string(k) + " > 1 and rank(A) = " + std::to_string(rank) + " < r = " +
                      std::to_string(r));
  }
  const Domain d = join(join(a.domain(), b.domain()), join(c.domain(), domain_of(s)));
  ExactMatrix g(m + 5, n + k + 4, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) g.set(i, j, a(i, j));
    for (std::size_t j = 0; j < k; ++j) g.set(i, n + j, b(i, j));
  }
  for (std::size_t j = 0; j < n; ++j) g.set(m, j, c(0, j));
  GadgetStep step;
  step.s = s;
  step.pivot_row = m;
  for (std::size_t j = 0; j < k; ++j) step.var_cols.push_back(n + j);
  for (std::size_t t = 0; t < 4; ++t) {
    step.new_rows[t] = m + 1 + t;
    step.new_cols[t] = n + k + t;
  }
  write_gadget(step, [&](std::size_t i, std::size_t j, const Scalar& v) { g.set(i, j, v); });
  return g;
}

std::size_t certified_rank_without(const PartialMatrix& pm, std::size_t skip_row,
                                   std::span<const std::size_t> skip_cols) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < pm.rows(); ++i)
    if (i != skip_row) rows.push_back(i);
  for (std::size_t j = 0; j < pm.cols(); ++j)
    if (std::find(skip_cols.begin(), skip_cols.end(), j) == skip_cols.end()) cols.push_back(j);

  auto rank_of = [&](const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) {
    ExactMatrix m(rs.size(), cs.size(), pm.domain());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) m.set(i, j, std::get<Scalar>(pm(rs[i], cs[j])));
    return rank_exact(m);
  };
  // variable-free rows (all columns kept) and variable-free columns (all rows kept)
  std::vector<std::size_t> const_rows, const_cols;
  for (auto i : rows)
    if (std::none_of(cols.begin(), cols.end(), [&](std::size_t j) { return pm.is_var(i, j); }))
      const_rows.push_back(i);
  for (auto j : cols)
    if (std::none_of(rows.begin(), rows.end(), [&](std::size_t i) { return pm.is_var(i, j); }))
      const_cols.push_back(j);
  return std::max(rank_of(const_rows, cols), rank_of(rows, const_cols));
}

Elimination eliminate_variable(const PartialMatrix& pm, const std::string& var, std::optional<std::size_t> r) {
  auto it = pm.variables().find(var);
  const auto occ = pm.occurrences(var);
  if (it == pm.variables().end() || occ.empty())
    throw Error(ErrorCode::UnknownVar, "variable '" + var + "' does not occur");
  const Scalar s = it->second;
  require_interval_start(s);

  GadgetStep step;
  step.var = var;
  step.s = s;
  step.pivot_row = occ.front().first;
  for (const auto& [i, j] : occ) {
    if (i != step.pivot_row)
      throw Error(ErrorCode::VarSpansMultipleRows, "variable '" + var + "' occurs in rows " +
                                                       std::to_string(step.pivot_row) + " and " +
                                                       std::to_string(i));
    step.var_cols.push_back(j);
  }
  if (step.width() > 1) {
    if (!r) throw Error(ErrorCode::PreconditionNotCertified, "variable '" + var + "' has k > 1; r is required");
    const std::size_t rank = certified_rank_without(pm, step.pivot_row, step.var_cols);
    if (rank < *r)
      throw Error(ErrorCode::PreconditionNotCertified, "certified rank " + std::to_string(rank) + " < r = " +
                                                           std::to_string(*r) + " for '" + var + "'");
    step.r_checked = r;
  }
  const std::size_t rows = pm.rows(), cols = pm.cols();
  for (std::size_t t = 0; t < 4; ++t) {
    step.new_rows[t] = rows + t;
    step.new_cols[t] = cols + t;
  }

  PartialMatrix out(rows + 4, cols + 4, pm.domain());
  for (const auto& [name, sv] : pm.variables())
    if (name != var) out.declare_var(name, sv);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& e = pm(i, j);
      if (const auto* c = std::get_if<Scalar>(&e)) out.set_const(i, j, *c);
      else if (std::get<VarEntry>(e).name != var) out.set_var(i, j, std::get<VarEntry>(e).name);
    }
  write_gadget(step, [&](std::size_t i, std::size_t j, const Scalar& v) { out.set_const(i, j, v); });
  return {std::move(out), std::move(step)};
}

ExactMatrix complete_after_step(const ExactMatrix& inner, const GadgetStep& step) {
  if (inner.rows() != step.new_rows[0] || inner.cols() != step.new_cols[0])
    throw Error(ErrorCode::DimMismatch, "completion does not match the step's pre-elimination dims");
  ExactMatrix out(inner.rows() + 4, inner.cols() + 4, join(inner.domain(), domain_of(step.s)));
  for (std::size_t i = 0; i < inner.rows(); ++i)
    for (std::size_t j = 0; j < inner.cols(); ++j) out.set(i, j, inner(i, j));
  write_gadget(step, [&](std::size_t i, std::size_t j, const Scalar& v) { out.set(i, j, v); });
  return out;
}

NNFactorization lift_factorization(const NNFactorization& inner, const GadgetStep& step, const Scalar& xi) {
  if (xi < step.s - Scalar(1) || xi > step.s)
    throw Error(ErrorCode::XiOutOfRange, "xi = " + format_scalar(xi) + " outside [s-1, s] for s = " +
                                             format_scalar(step.s));
  const std::size_t rows = inner.rows(), cols = inner.cols();
  if (rows != step.new_rows[0] || cols != step.new_cols[0])
    throw Error(ErrorCode::DimMismatch, "factorization does not match the step's pre-elimination dims");
  const Domain d = join(inner.domain(), join(domain_of(step.s), domain_of(xi)));
  NNFactorization out(rows + 4, cols + 4, d);
  for (const auto& t : inner.terms()) {
    std::vector<Scalar> u = t.u, v = t.v;
    u.resize(rows + 4, Scalar(0));
    v.resize(cols + 4, Scalar(0));
    out.add_term(std::move(u), std::move(v));
  }
  const std::size_t k = step.width();
  const NNFactorization gadget = factor_b_equal(step.s - xi, k);
  std::array<std::size_t, 5> row_map{step.pivot_row, step.new_rows[0], step.new_rows[1], step.new_rows[2],
                                     step.new_rows[3]};
  std::vector<std::size_t> col_map = step.var_cols;
  col_map.insert(col_map.end(), step.new_cols.begin(), step.new_cols.end());
  for (const auto& t : gadget.terms()) {
    std::vector<Scalar> u(rows + 4, Scalar(0)), v(cols + 4, Scalar(0));
    for (std::size_t i = 0; i < 5; ++i) u[row_map[i]] = t.u[i];
    for (std::size_t j = 0; j < k + 4; ++j) v[col_map[j]] = t.v[j];
    out.add_term(std::move(u), std::move(v));
  }
  return out;
}

Lift lift_factorization(const ExactMatrix& inner_completion, const NNFactorization& inner,
                        const GadgetStep& step, const Scalar& xi) {
  for (auto col : step.var_cols)
    if (col >= inner_completion.cols() || step.pivot_row >= inner_completion.rows() ||
        !(inner_completion(step.pivot_row, col) == xi))
      throw Error(ErrorCode::ValidationFailure, "completion does not assign xi = " + format_scalar(xi) +
                                                    " to '" + step.var + "'");
  if (!validate_factorization(inner_completion, inner).passed())
    throw Error(ErrorCode::ValidationFailure, "inner factorization does not validate");
  Lift out{complete_after_step(inner_completion, step), lift_factorization(inner, step, xi)};
  if (!validate_factorization(out.matrix, out.factorization).passed())
    throw Error(ErrorCode::ValidationFailure, "lifted factorization does not validate");
  return out;
}

PartialMatrix replay_partial(const PartialMatrix& pm0, const GadgetTrace& trace) {
  if (pm0.rows() != trace.initial_rows || pm0.cols() != trace.initial_cols)
    throw Error(ErrorCode::TraceMismatch, "trace starts from a different shape");
  PartialMatrix pm = pm0;
  for (const auto& recorded : trace.steps) {
    auto [next, step] = eliminate_variable(pm, recorded.var, recorded.r_checked);
    if (!(step == recorded))
      throw Error(ErrorCode::TraceMismatch, "replayed step for '" + recorded.var + "' differs from the trace");
    pm = std::move(next);
  }
  return pm;
}

ExactMatrix replay_trace(const PartialMatrix& pm0, const GadgetTrace& trace) {
  PartialMatrix pm = replay_partial(pm0, trace);
  if (!pm.is_constant()) {
    std::string names;
    for (const auto& [name, s] : pm.variables())
      if (!pm.occurrences(name).empty()) names += (names.empty() ? "" : ", ") + name;
    throw Error(ErrorCode::UnresolvedVariables, "variables remain after replay: " + names);
  }
  return pm.to_matrix();
}

PartialMatrix parse_partial(std::string_view txt) {
  auto toks = text::split_ws(txt);
  if (toks.size() < 4 || toks[0] != "partial") throw Error(ErrorCode::MalformedFile, "expected 'partial' header");
  const std::size_t rows = text::parse_count(toks[1], "rows");
  const std::size_t cols = text::parse_count(toks[2], "cols");
  const Domain d = parse_domain(toks[3]);
  if (toks.size() < 4 + rows * cols) throw Error(ErrorCode::MalformedFile, "too few partial entries");
  const std::size_t tail = toks.size() - 4 - rows * cols;
  if (tail % 3 != 0) throw Error(ErrorCode::MalformedFile, "bad variable declarations");
  PartialMatrix pm(rows, cols, d);
  for (std::size_t k = 4 + rows * cols; k < toks.size(); k += 3) {
    if (toks[k] != "var" || toks[k + 2].substr(0, 2) != "s=")
      throw Error(ErrorCode::MalformedFile, "expected 'var <name> s=<scalar>'");
    const std::string name(toks[k + 1]);
    if (pm.variables().contains(name)) throw Error(ErrorCode::MalformedFile, "duplicate variable '" + name + "'");
    pm.declare_var(name, parse_scalar(toks[k + 2].substr(2), d));
  }
  for (std::size_t k = 0; k < rows * cols; ++k) {
    const auto tok = toks[4 + k];
    if (!tok.empty() && tok.front() == '?') pm.set_var(k / cols, k % cols, std::string(tok.substr(1)));
    else pm.set_const(k / cols, k % cols, parse_scalar(tok, d));
  }
  return pm;
}

std::string format_partial(const PartialMatrix& pm) {
  std::ostringstream os;
  os << "partial " << pm.rows() << ' ' << pm.cols() << ' ' << domain_name(pm.domain()) << '\n';
  for (std::size_t i = 0; i < pm.rows(); ++i) {
    for (std::size_t j = 0; j < pm.cols(); ++j) {
      if (j) os << ' ';
      const auto& e = pm(i, j);
      if (const auto* c = std::get_if<Scalar>(&e)) os << format_scalar(*c);
      else os << '?' << std::get<VarEntry>(e).name;
    }
    os << '\n';
  }
  for (const auto& [name, s] : pm.variables()) os << "var " << name << " s=" << format_scalar(s) << '\n';
  return os.str();
}

GadgetTrace parse_trace(std::string_view txt, std::size_t initial_rows, std::size_t initial_cols, Domain domain) {
  GadgetTrace trace{initial_rows, initial_cols, {}};
  for (auto line : text::lines(txt)) {
    auto toks = text::split_ws(line);
    if (toks.size() != 6 || toks[0] != "step") throw Error(ErrorCode::MalformedFile, "bad trace line");
    auto field = [&](std::size_t idx, std::string_view key) {
      if (toks[idx].substr(0, key.size()) != key)
        throw Error(ErrorCode::MalformedFile, "expected '" + std::string(key) + "' in trace line");
      return toks[idx].substr(key.size());
    };
    GadgetStep step;
    step.var = std::string(field(1, "var="));
    step.s = parse_scalar(field(2, "s="), domain);
    step.pivot_row = text::parse_count(field(3, "pivot="), "pivot");
    auto cols = field(4, "cols=");
    std::size_t start = 0;
    while (start <= cols.size()) {
      auto comma = cols.find(',', start);
      if (comma == std::string_view::npos) comma = cols.size();
      step.var_cols.push_back(text::parse_count(cols.substr(start, comma - start), "column"));
      start = comma + 1;
    }
    auto r = field(5, "r=");
    if (r != "none") step.r_checked = text::parse_count(r, "r");
    const std::size_t n = trace.steps.size();
    for (std::size_t t = 0; t < 4; ++t) {
      step.new_rows[t] = initial_rows + 4 * n + t;
      step.new_cols[t] = initial_cols + 4 * n + t;
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::string format_trace(const GadgetTrace& trace) {
  std::ostringstream os;
  for (const auto& st : trace.steps) {
    os << "step var=" << st.var << " s=" << format_scalar(st.s) << " pivot=" << st.pivot_row << " cols=";
    for (std::size_t j = 0; j < st.var_cols.size(); ++j) os << (j ? "," : "") << st.var_cols[j];
    os << " r=";
    if (st.r_checked) os << *st.r_checked;
    else os << "none";
    os << '\n';
  }
  return os.str();
}

}  // namespace nnr
