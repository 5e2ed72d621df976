#pragma once

// Dense exact matrices, rank-one nonnegative factorizations and their
// validation.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnrank/scalar.hpp"

namespace nnr {

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols, Domain domain = Domain::Rational);

  static ExactMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows,
                               Domain domain = Domain::Rational);
  static ExactMatrix identity(std::size_t n, Domain domain = Domain::Rational);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Domain domain() const { return domain_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  // Throws WrongDomain if v is not in the matrix domain.
  void set(std::size_t i, std::size_t j, Scalar v);

  std::span<const Scalar> row(std::size_t i) const {
    return std::span<const Scalar>(entries_).subspan(i * cols_, cols_);
  }
  std::span<const Scalar> entries() const { return entries_; }

  bool is_nonnegative() const;
  ExactMatrix transpose() const;
  // Embedding into Q(sqrt 2) always succeeds; the reverse throws WrongDomain
  // unless every entry is rational.
  ExactMatrix with_domain(Domain d) const;
  ExactMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Domain domain_ = Domain::Rational;
  std::vector<Scalar> entries_;
};

// u (column, length rows) times v (row, length cols).
struct RankOneTerm {
  std::vector<Scalar> u;
  std::vector<Scalar> v;
};

class NNFactorization {
 public:
  NNFactorization() = default;
  NNFactorization(std::size_t rows, std::size_t cols, Domain domain = Domain::Rational)
      : rows_(rows), cols_(cols), domain_(domain) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Domain domain() const { return domain_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<RankOneTerm>& terms() const { return terms_; }

  // Throws DimMismatch or WrongDomain.
  void add_term(std::vector<Scalar> u, std::vector<Scalar> v);
  void add_term(RankOneTerm t) { add_term(std::move(t.u), std::move(t.v)); }

  ExactMatrix product() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Domain domain_ = Domain::Rational;
  std::vector<RankOneTerm> terms_;
};

struct NegativeEntry {
  std::size_t term;
  bool in_u;
  std::size_t index;
};

struct Mismatch {
  std::size_t row;
  std::size_t col;
  Scalar expected;
  Scalar actual;
};

struct ValidationReport {
  std::size_t terms = 0;
  bool nonnegative = true;
  bool sums_match = true;
  std::optional<NegativeEntry> first_negative;
  std::optional<Mismatch> first_mismatch;

  bool passed() const { return nonnegative && sums_match; }
};

// Rank over the fraction field, by fraction-free elimination.
std::size_t rank_exact(const ExactMatrix& m);
Scalar determinant(const ExactMatrix& m);
Scalar minor_det(const ExactMatrix& m, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols);

using Permutation = std::vector<std::size_t>;

struct PermutationPair {
  Permutation rows;
  Permutation cols;
};

// result(i, j) = m(row_perm[i], col_perm[j])
ExactMatrix permute(const ExactMatrix& m, std::span<const std::size_t> row_perm,
                    std::span<const std::size_t> col_perm);

// Returns perms with permute(a, rows, cols) == b, or nullopt.
std::optional<PermutationPair> permutation_equivalent(const ExactMatrix& a, const ExactMatrix& b);

ValidationReport validate_factorization(const ExactMatrix& m, const NNFactorization& f);

// Text formats:
//   matrix <rows> <cols> <rat|quad>
//   <rows*cols scalar tokens, row-major>
//
//   factorization <rows> <cols> <rat|quad> <terms>
//   per term: a line of <rows> scalars (u), a line of <cols> scalars (v)
ExactMatrix parse_matrix(std::string_view text);
std::string format_matrix(const ExactMatrix& m);
NNFactorization parse_factorization(std::string_view text);
std::string format_factorization(const NNFactorization& f);

}  // namespace nnr
