#pragma once

// Bounds on nonnegative rank: conventional rank and the rectangle covering
// number of the support (both exact lower bounds), and a multistart
// alternating least-squares search for factorizations (an upper-bound
// semi-decision: failing to find a rank-r factorization is evidence, never
// a certificate).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnrank/kernels.hpp"
#include "nnrank/matrix.hpp"

namespace nnr {

struct SupportPattern {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<bool> bits;  // row-major

  static SupportPattern of(const ExactMatrix& m);
  bool at(std::size_t i, std::size_t j) const { return bits[i * cols + j]; }
  std::size_t count() const;
  SupportPattern transpose() const;
};

inline constexpr std::size_t kDefaultCellLimit = 600;

struct RectangleCoverOptions {
  std::size_t cell_limit = kDefaultCellLimit;
  std::size_t node_budget = 20'000'000;
};

struct RectangleCover {
  std::size_t lower = 0;  // proven lower bound
  std::size_t upper = 0;  // size of the best cover found
  bool exact = false;     // search completed, lower == upper
  std::size_t maximal_rectangles = 0;
  std::size_t nodes = 0;
};

// Throws TooLarge when rows*cols exceeds the cell limit.
RectangleCover rectangle_cover(const SupportPattern& p, const RectangleCoverOptions& opts = {});
std::size_t rectangle_cover_lb(const SupportPattern& p, std::size_t cell_limit = kDefaultCellLimit);

struct FloatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  static FloatMatrix of(const ExactMatrix& m);
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double frobenius() const;
};

struct FloatFactorization {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::vector<double> left;   // rows x rank, row-major
  std::vector<double> right;  // rank x cols, row-major
  double residual = 0.0;      // ||m - left*right||_F / ||m||_F
  std::size_t restart = 0;    // which start produced it
};

struct HeuristicOptions {
  std::size_t restarts = 64;
  std::size_t iters = 2000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  // Seed from the row (r >= rows) or column (r >= cols) factorization
  // before the random starts.
  bool trivial_starts = true;
  std::optional<kernels::Isa> isa;  // defaults to the runtime selection
};

// Correctly rounded double value of p + q*sqrt(2).
double to_double(const Scalar& x);

double relative_residual(const FloatMatrix& m, const FloatFactorization& f);

struct HeuristicResult {
  std::optional<FloatFactorization> found;
  double best_residual = 0.0;  // smallest residual over all starts
};

HeuristicResult heuristic_search(const FloatMatrix& m, std::size_t r, const HeuristicOptions& opts = {});
std::optional<FloatFactorization> heuristic_nnr_ub(const FloatMatrix& m, std::size_t r,
                                                   const HeuristicOptions& opts = {});

// Closest rational with denominator <= bound.
Rational best_rational(double x, long denom_bound);

// Rescales each term so max(v) = 1, rounds to rationals with bounded
// denominators and keeps the result only if it validates exactly.
std::optional<NNFactorization> exactify_factorization(const FloatFactorization& f, const ExactMatrix& m,
                                                      long denom_bound);

struct BoundsOptions {
  HeuristicOptions heuristic;
  std::optional<std::size_t> max_rank;
  long denom_bound = 64;
  RectangleCoverOptions rectangles;
};

struct BoundsReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank_lb = 0;
  std::size_t rect_lb = 0;
  bool rect_exact = true;
  std::optional<std::size_t> heur_ub;
  double heur_residual = 0.0;
  std::optional<std::size_t> pinned;
  std::optional<NNFactorization> exact_witness;
  std::vector<std::pair<std::size_t, double>> attempts;  // (r, best residual)

  std::size_t lower() const { return std::max(rank_lb, rect_lb); }
};

BoundsReport bounds_report(const ExactMatrix& m, const BoundsOptions& opts = {});
// Aligned text followed by a key=value block.
std::string format_bounds_report(const BoundsReport& rep);

}  // namespace nnr
