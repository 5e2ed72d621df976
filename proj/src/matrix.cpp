#include "nnrank/matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "nnrank/error.hpp"
#include "text.hpp"

namespace nnr {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, Domain domain)
    : rows_(rows), cols_(cols), domain_(domain), entries_(rows * cols) {}

ExactMatrix ExactMatrix::from_rows(std::initializer_list<std::initializer_list<Scalar>> rows,
                                   Domain domain) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  ExactMatrix m(r, c, domain);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimMismatch, "ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) m.set(i, j++, v);
    ++i;
  }
  return m;
}

ExactMatrix ExactMatrix::identity(std::size_t n, Domain domain) {
  ExactMatrix m(n, n, domain);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void ExactMatrix::set(std::size_t i, std::size_t j, Scalar v) {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimMismatch, "index out of range");
  if (!v.in_domain(domain_))
    throw Error(ErrorCode::WrongDomain, "entry " + format_scalar(v) + " not rational");
  entries_[i * cols_ + j] = std::move(v);
}

bool ExactMatrix::is_nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& x) { return quad_sign(x) >= 0; });
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_, domain_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  return t;
}

ExactMatrix ExactMatrix::with_domain(Domain d) const {
  ExactMatrix out = *this;
  if (d == Domain::Rational)
    for (const auto& x : entries_)
      if (!x.is_rational()) throw Error(ErrorCode::WrongDomain, "matrix has irrational entries");
  out.domain_ = d;
  return out;
}

ExactMatrix ExactMatrix::submatrix(std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols) const {
  ExactMatrix out(rows.size(), cols.size(), domain_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i] >= rows_ || cols[j] >= cols_) throw Error(ErrorCode::DimMismatch, "index out of range");
      out.entries_[i * cols.size() + j] = (*this)(rows[i], cols[j]);
    }
  return out;
}

void NNFactorization::add_term(std::vector<Scalar> u, std::vector<Scalar> v) {
  if (u.size() != rows_ || v.size() != cols_)
    throw Error(ErrorCode::DimMismatch, "term dims do not match factorization");
  for (const auto* vec : {&u, &v})
    for (const auto& x : *vec)
      if (!x.in_domain(domain_)) throw Error(ErrorCode::WrongDomain, "term entry " + format_scalar(x));
  terms_.push_back({std::move(u), std::move(v)});
}

ExactMatrix NNFactorization::product() const {
  ExactMatrix out(rows_, cols_, domain_);
  std::vector<Scalar> acc(rows_ * cols_);
  for (const auto& t : terms_)
    for (std::size_t i = 0; i < rows_; ++i) {
      if (t.u[i].is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (!t.v[j].is_zero()) acc[i * cols_ + j] += t.u[i] * t.v[j];
    }
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.set(i, j, acc[i * cols_ + j]);
  return out;
}

namespace {

// Fraction-free elimination with full pivoting (first nonzero in scan order).
// Returns rank; sets det to the determinant when the matrix is square.
std::size_t bareiss(std::vector<Scalar> a, std::size_t rows, std::size_t cols, Scalar* det) {
  auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return a[i * cols + j]; };
  Scalar prev(1);
  int sign = 1;
  std::size_t rank = 0;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = k; i < rows && pi == rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (!at(i, j).is_zero()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == rows) break;
    if (pi != k) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(k, j), at(pi, j));
      sign = -sign;
    }
    if (pj != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, k), at(i, pj));
      sign = -sign;
    }
    const Scalar pivot = at(k, k);
    for (std::size_t i = k + 1; i < rows; ++i) {
      const Scalar lead = at(i, k);
      for (std::size_t j = k + 1; j < cols; ++j) {
        Scalar v = at(i, j) * pivot;
        if (!lead.is_zero()) v -= lead * at(k, j);
        at(i, j) = v / prev;
      }
      at(i, k) = Scalar(0);
    }
    prev = pivot;
    ++rank;
  }
  if (det != nullptr) {
    if (rows != cols) throw Error(ErrorCode::DimMismatch, "determinant of non-square matrix");
    if (rows == 0) {
      *det = Scalar(1);
    } else if (rank < rows) {
      *det = Scalar(0);
    } else {
      *det = sign > 0 ? at(rows - 1, rows - 1) : -at(rows - 1, rows - 1);
    }
  }
  return rank;
}

}  // namespace

std::size_t rank_exact(const ExactMatrix& m) {
  return bareiss(std::vector<Scalar>(m.entries().begin(), m.entries().end()), m.rows(), m.cols(), nullptr);
}

Scalar determinant(const ExactMatrix& m) {
  Scalar det;
  bareiss(std::vector<Scalar>(m.entries().begin(), m.entries().end()), m.rows(), m.cols(), &det);
  return det;
}

Scalar minor_det(const ExactMatrix& m, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols) {
  if (rows.size() != cols.size()) throw Error(ErrorCode::DimMismatch, "minor needs a square selection");
  return determinant(m.submatrix(rows, cols));
}

namespace {

void check_perm(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) throw Error(ErrorCode::BadPermutation, "permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorCode::BadPermutation, "not a bijection");
    seen[p] = true;
  }
}

}  // namespace

ExactMatrix permute(const ExactMatrix& m, std::span<const std::size_t> row_perm,
                    std::span<const std::size_t> col_perm) {
  check_perm(row_perm, m.rows());
  check_perm(col_perm, m.cols());
  return m.submatrix(row_perm, col_perm);
}

namespace {

using Signature = std::vector<Scalar>;

std::vector<int> signature_ids(const std::vector<Signature>& a_sigs, const std::vector<Signature>& b_sigs,
                               std::vector<int>& b_ids) {
  std::map<Signature, int> ids;
  for (const auto& s : a_sigs) ids.emplace(s, static_cast<int>(ids.size()));
  std::vector<int> a_ids;
  a_ids.reserve(a_sigs.size());
  for (const auto& s : a_sigs) a_ids.push_back(ids.at(s));
  b_ids.clear();
  for (const auto& s : b_sigs) {
    auto it = ids.find(s);
    b_ids.push_back(it == ids.end() ? -1 : it->second);
  }
  return a_ids;
}

struct EquivalenceSearch {
  const ExactMatrix& a;
  const ExactMatrix& b;
  std::vector<int> row_sig_a, row_sig_b, col_sig_a, col_sig_b;
  Permutation row_perm;
  std::vector<bool> used;

  // Partial column profiles over the first `depth` assigned rows must agree
  // as multisets, keyed by (column signature, profile).
  bool columns_consistent(std::size_t depth) const {
    std::vector<std::pair<int, std::vector<const Scalar*>>> ka, kb;
    ka.reserve(a.cols());
    kb.reserve(b.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::vector<const Scalar*> pa, pb;
      for (std::size_t i = 0; i < depth; ++i) {
        pa.push_back(&a(row_perm[i], j));
        pb.push_back(&b(i, j));
      }
      ka.emplace_back(col_sig_a[j], std::move(pa));
      kb.emplace_back(col_sig_b[j], std::move(pb));
    }
    auto less = [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      for (std::size_t i = 0; i < x.second.size(); ++i) {
        auto c = *x.second[i] <=> *y.second[i];
        if (c != 0) return c < 0;
      }
      return false;
    };
    std::sort(ka.begin(), ka.end(), less);
    std::sort(kb.begin(), kb.end(), less);
    for (std::size_t j = 0; j < ka.size(); ++j)
      if (less(ka[j], kb[j]) || less(kb[j], ka[j])) return false;
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == b.rows()) return true;
    for (std::size_t cand = 0; cand < a.rows(); ++cand) {
      if (used[cand] || row_sig_a[cand] != row_sig_b[depth]) continue;
      used[cand] = true;
      row_perm[depth] = cand;
      if (columns_consistent(depth + 1) && search(depth + 1)) return true;
      used[cand] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<PermutationPair> permutation_equivalent(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimMismatch, "permutation_equivalent needs equal dims");
  std::vector<Scalar> ea(a.entries().begin(), a.entries().end());
  std::vector<Scalar> eb(b.entries().begin(), b.entries().end());
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  if (ea != eb) return std::nullopt;

  auto row_sigs = [](const ExactMatrix& m) {
    std::vector<Signature> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Signature s(m.row(i).begin(), m.row(i).end());
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
    return out;
  };
  const ExactMatrix at = a.transpose(), bt = b.transpose();

  EquivalenceSearch s{a, b, {}, {}, {}, {}, Permutation(a.rows()), std::vector<bool>(a.rows(), false)};
  s.row_sig_a = signature_ids(row_sigs(a), row_sigs(b), s.row_sig_b);
  s.col_sig_a = signature_ids(row_sigs(at), row_sigs(bt), s.col_sig_b);
  {
    auto ra = s.row_sig_a, rb = s.row_sig_b, ca = s.col_sig_a, cb = s.col_sig_b;
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ra != rb || ca != cb) return std::nullopt;
  }
  if (!s.search(0)) return std::nullopt;

  PermutationPair out{s.row_perm, Permutation(a.cols())};
  std::vector<bool> col_used(a.cols(), false);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    bool found = false;
    for (std::size_t c = 0; c < a.cols() && !found; ++c) {
      if (col_used[c]) continue;
      bool same = true;
      for (std::size_t i = 0; i < b.rows() && same; ++i) same = a(out.rows[i], c) == b(i, j);
      if (same) {
        col_used[c] = true;
        out.cols[j] = c;
        found = true;
      }
    }
    if (!found) return std::nullopt;  // unreachable when profiles agree
  }
  return out;
}

ValidationReport validate_factorization(const ExactMatrix& m, const NNFactorization& f) {
  if (m.rows() != f.rows() || m.cols() != f.cols())
    throw Error(ErrorCode::DimMismatch, "factorization is " + std::to_string(f.rows()) + "x" +
                                            std::to_string(f.cols()) + ", matrix is " +
                                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  ValidationReport rep;
  rep.terms = f.size();
  std::vector<Scalar> acc(m.rows() * m.cols());
  std::vector<std::size_t> nz_u, nz_v;
  for (std::size_t t = 0; t < f.size(); ++t) {
    const auto& term = f.terms()[t];
    nz_u.clear();
    nz_v.clear();
    for (std::size_t i = 0; i < term.u.size(); ++i) {
      const int s = quad_sign(term.u[i]);
      if (s < 0 && rep.nonnegative) {
        rep.nonnegative = false;
        rep.first_negative = NegativeEntry{t, true, i};
      }
      if (s != 0) nz_u.push_back(i);
    }
    for (std::size_t j = 0; j < term.v.size(); ++j) {
      const int s = quad_sign(term.v[j]);
      if (s < 0 && rep.nonnegative) {
        rep.nonnegative = false;
        rep.first_negative = NegativeEntry{t, false, j};
      }
      if (s != 0) nz_v.push_back(j);
    }
    for (auto i : nz_u)
      for (auto j : nz_v) acc[i * m.cols() + j] += term.u[i] * term.v[j];
  }
  for (std::size_t i = 0; i < m.rows() && rep.sums_match; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(acc[i * m.cols() + j] == m(i, j))) {
        rep.sums_match = false;
        rep.first_mismatch = Mismatch{i, j, m(i, j), acc[i * m.cols() + j]};
        break;
      }
  return rep;
}

ExactMatrix parse_matrix(std::string_view text) {
  auto toks = text::split_ws(text);
  if (toks.size() < 4 || toks[0] != "matrix") throw Error(ErrorCode::MalformedFile, "expected 'matrix' header");
  const std::size_t rows = text::parse_count(toks[1], "rows");
  const std::size_t cols = text::parse_count(toks[2], "cols");
  const Domain d = parse_domain(toks[3]);
  if (toks.size() != 4 + rows * cols)
    throw Error(ErrorCode::MalformedFile, "expected " + std::to_string(rows * cols) + " entries, got " +
                                              std::to_string(toks.size() - 4));
  ExactMatrix m(rows, cols, d);
  for (std::size_t k = 0; k < rows * cols; ++k) m.set(k / cols, k % cols, parse_scalar(toks[4 + k], d));
  return m;
}

std::string format_matrix(const ExactMatrix& m) {
  std::ostringstream os;
  os << "matrix " << m.rows() << ' ' << m.cols() << ' ' << domain_name(m.domain()) << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_scalar(m(i, j));
    os << '\n';
  }
  return os.str();
}

NNFactorization parse_factorization(std::string_view text) {
  auto toks = text::split_ws(text);
  if (toks.size() < 5 || toks[0] != "factorization")
    throw Error(ErrorCode::MalformedFile, "expected 'factorization' header");
  const std::size_t rows = text::parse_count(toks[1], "rows");
  const std::size_t cols = text::parse_count(toks[2], "cols");
  const Domain d = parse_domain(toks[3]);
  const std::size_t terms = text::parse_count(toks[4], "terms");
  if (toks.size() != 5 + terms * (rows + cols))
    throw Error(ErrorCode::MalformedFile, "factorization token count does not match header");
  NNFactorization f(rows, cols, d);
  std::size_t k = 5;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Scalar> u, v;
    for (std::size_t i = 0; i < rows; ++i) u.push_back(parse_scalar(toks[k++], d));
    for (std::size_t j = 0; j < cols; ++j) v.push_back(parse_scalar(toks[k++], d));
    f.add_term(std::move(u), std::move(v));
  }
  return f;
}

std::string format_factorization(const NNFactorization& f) {
  std::ostringstream os;
  os << "factorization " << f.rows() << ' ' << f.cols() << ' ' << domain_name(f.domain()) << ' ' << f.size()
     << '\n';
  for (const auto& t : f.terms()) {
    for (std::size_t i = 0; i < t.u.size(); ++i) os << (i ? " " : "") << format_scalar(t.u[i]);
    os << '\n';
    for (std::size_t j = 0; j < t.v.size(); ++j) os << (j ? " " : "") << format_scalar(t.v[j]);
    os << '\n';
  }
  return os.str();
}

}  // namespace nnr
