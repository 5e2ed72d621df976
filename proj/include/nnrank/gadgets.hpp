#pragma once

// Nonnegative-rank gadgets: the cyclic 4x4 block, the 5x(n+4) gadget with a
// free first row, the completion wrapper, in-place variable elimination and
// lifting of factorizations through eliminations.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nnrank/matrix.hpp"

namespace nnr {

struct VarEntry {
  std::string name;
  friend bool operator==(const VarEntry&, const VarEntry&) = default;
};

using PartialEntry = std::variant<Scalar, VarEntry>;

// Matrix whose entries are nonnegative constants or named variables. Every
// variable x carries an s and ranges over [s - 1, s].
class PartialMatrix {
 public:
  PartialMatrix() = default;
  PartialMatrix(std::size_t rows, std::size_t cols, Domain domain = Domain::Rational);
  static PartialMatrix from_matrix(const ExactMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Domain domain() const { return domain_; }

  const PartialEntry& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  bool is_var(std::size_t i, std::size_t j) const {
    return std::holds_alternative<VarEntry>((*this)(i, j));
  }

  // Throws NegativeInput / WrongDomain.
  void set_const(std::size_t i, std::size_t j, Scalar v);
  // Throws UnknownVar if `name` was not declared.
  void set_var(std::size_t i, std::size_t j, const std::string& name);
  void declare_var(const std::string& name, Scalar s);
  void drop_var(const std::string& name);

  const std::map<std::string, Scalar>& variables() const { return vars_; }
  std::vector<std::pair<std::size_t, std::size_t>> occurrences(const std::string& name) const;
  bool is_constant() const;

  // Substitutes the given values; throws UnresolvedVariables if one is missing.
  ExactMatrix complete(const std::map<std::string, Scalar>& values) const;
  ExactMatrix to_matrix() const { return complete({}); }

  friend bool operator==(const PartialMatrix&, const PartialMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Domain domain_ = Domain::Rational;
  std::vector<PartialEntry> entries_;
  std::map<std::string, Scalar> vars_;
};

struct GadgetStep {
  std::string var;
  Scalar s;
  std::size_t pivot_row = 0;
  std::vector<std::size_t> var_cols;
  std::array<std::size_t, 4> new_rows{};
  std::array<std::size_t, 4> new_cols{};
  // Present when k > 1: the r for which rank(A) >= r was certified.
  std::optional<std::size_t> r_checked;

  std::size_t width() const { return var_cols.size(); }
  friend bool operator==(const GadgetStep&, const GadgetStep&) = default;
};

struct GadgetTrace {
  std::size_t initial_rows = 0;
  std::size_t initial_cols = 0;
  std::vector<GadgetStep> steps;
};

struct Elimination {
  PartialMatrix matrix;
  GadgetStep step;
};

struct Lift {
  ExactMatrix matrix;  // post-elimination completion
  NNFactorization factorization;
};

ExactMatrix build_b0();
// Throws NegativeInput if some alpha < 0.
ExactMatrix build_b(std::span<const Scalar> alphas);
// The 4-term factorization of build_b(alpha, ..., alpha) (n copies).
// Throws AlphaOutOfRange unless 0 <= alpha <= 1.
NNFactorization factor_b_equal(const Scalar& alpha, std::size_t n);

// [A B 0; c s..s 1111; 0 1..1 B0_0; 0 0 B0_1..3]. Requires k == 1 or
// rank(A) >= r (certified exactly, else PreconditionNotCertified).
ExactMatrix wrap_gadget(const ExactMatrix& a, const ExactMatrix& b, const ExactMatrix& c, const Scalar& s,
                        std::size_t r);

// Lower bound on the conventional rank of every completion of the block
// obtained by deleting `skip_row` and `skip_cols`.
std::size_t certified_rank_without(const PartialMatrix& pm, std::size_t skip_row,
                                   std::span<const std::size_t> skip_cols);

Elimination eliminate_variable(const PartialMatrix& pm, const std::string& var,
                               std::optional<std::size_t> r = std::nullopt);

// The completion of the post-step matrix induced by a completion of the
// pre-step matrix.
ExactMatrix complete_after_step(const ExactMatrix& inner_completion, const GadgetStep& step);

// Pads `inner` and appends the four gadget terms for s - xi.
// Throws XiOutOfRange unless s - 1 <= xi <= s.
NNFactorization lift_factorization(const NNFactorization& inner, const GadgetStep& step, const Scalar& xi);

// Checked form: `inner` must validate against `inner_completion`, whose
// entries at (pivot_row, var_cols) equal xi. Throws ValidationFailure.
Lift lift_factorization(const ExactMatrix& inner_completion, const NNFactorization& inner,
                        const GadgetStep& step, const Scalar& xi);

PartialMatrix replay_partial(const PartialMatrix& pm0, const GadgetTrace& trace);
// Throws UnresolvedVariables if variables remain after the trace.
ExactMatrix replay_trace(const PartialMatrix& pm0, const GadgetTrace& trace);

// partial <rows> <cols> <rat|quad>
// <entries: scalar tokens or ?name, row-major>
// var <name> s=<scalar>          (one line per variable)
PartialMatrix parse_partial(std::string_view text);
std::string format_partial(const PartialMatrix& pm);

// step var=<name> s=<scalar> pivot=<row> cols=<c1,...> r=<r|none>
GadgetTrace parse_trace(std::string_view text, std::size_t initial_rows, std::size_t initial_cols,
                        Domain domain = Domain::Quadratic);
std::string format_trace(const GadgetTrace& trace);

}  // namespace nnr
