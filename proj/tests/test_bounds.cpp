#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nnrank/bounds.hpp"
#include "nnrank/cohen_rothblum.hpp"
#include "nnrank/gadgets.hpp"
#include "nnrank/graphred.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nnr;
using testing::code_of;

namespace {

std::vector<std::vector<bool>> bits_of(const SupportPattern& p) {
  std::vector<std::vector<bool>> s(p.rows, std::vector<bool>(p.cols));
  for (std::size_t i = 0; i < p.rows; ++i)
    for (std::size_t j = 0; j < p.cols; ++j) s[i][j] = p.at(i, j);
  return s;
}

ExactMatrix ones(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, 1);
  return m;
}

HeuristicOptions quick(std::uint64_t seed = 0) {
  HeuristicOptions o;
  o.restarts = 16;
  o.iters = 1500;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("rectangle covering bound examples") {
  CHECK(rectangle_cover_lb(SupportPattern::of(build_b0())) == 4);
  CHECK(rectangle_cover_lb(SupportPattern::of(ones(3))) == 1);
  CHECK(rectangle_cover_lb(SupportPattern::of(ExactMatrix::identity(3))) == 3);
  CHECK(rectangle_cover_lb(SupportPattern::of(ExactMatrix(3, 3))) == 0);
  CHECK(code_of([] { rectangle_cover_lb(SupportPattern::of(ExactMatrix(30, 30))); }) == ErrorCode::TooLarge);
  const RectangleCover rc = rectangle_cover(SupportPattern::of(build_b0()));
  CHECK(rc.exact);
  CHECK(rc.upper == 4);
  CHECK(rc.maximal_rectangles == 8);
}

TEST_CASE("rectangle covering bound matches brute force and is invariant") {
  std::mt19937_64 rng(50);
  for (int it = 0; it < 120; ++it) {
    const std::size_t rows = 1 + it % 5, cols = 1 + (it / 5) % 5;
    ExactMatrix m(rows, cols);
    std::bernoulli_distribution coin(0.55);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, coin(rng) ? 1 : 0);
    const SupportPattern p = SupportPattern::of(m);
    const std::size_t lb = rectangle_cover_lb(p);
    CHECK(lb == oracle::rectangle_cover_brute(bits_of(p)));
    CHECK(rectangle_cover_lb(p.transpose()) == lb);
    std::vector<std::size_t> rp(rows), cp(cols);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    CHECK(rectangle_cover_lb(SupportPattern::of(permute(m, rp, cp))) == lb);
  }
}

TEST_CASE("lower bounds are sound for gadget-built factorizations") {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 40; ++it) {
    const Scalar alpha = oracle::random_rational(rng, 0, 1, 8);
    const std::size_t n = 1 + it % 4;
    const NNFactorization f = factor_b_equal(alpha, n);
    const ExactMatrix b = build_b(std::vector<Scalar>(n, alpha));
    CHECK(rank_exact(b) <= f.size());
    CHECK(rectangle_cover_lb(SupportPattern::of(b)) <= f.size());
  }
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const Graph g = oracle::graph_from_mask(3, mask);
    const ReducedGraph red = reduce_graph(g);
    const NNFactorization f = certify_reduction_ub(g);
    CHECK(rank_exact(red.matrix) <= f.size());
    if (red.matrix.rows() * red.matrix.cols() <= kDefaultCellLimit)
      CHECK(rectangle_cover_lb(SupportPattern::of(red.matrix)) <= f.size());
  }
}

TEST_CASE("to_double is correctly rounded") {
  CHECK(to_double(Scalar::sqrt2()) == std::sqrt(2.0));
  CHECK(to_double(Scalar(Rational(1, 3))) == 1.0 / 3.0);
  CHECK(to_double(cr::alpha()) == 1.0 + std::sqrt(0.5));
  CHECK(to_double(Scalar(Rational(577, 408), Rational(-1))) > 0.0);
  CHECK(to_double(Scalar(0)) == 0.0);
}

TEST_CASE("best_rational") {
  CHECK(best_rational(0.5, 2) == Rational(1, 2));
  CHECK(best_rational(1.0 / 3.0, 10) == Rational(1, 3));
  CHECK(best_rational(3.14159265358979, 7) == Rational(22, 7));
  CHECK(best_rational(3.14159265358979, 113) == Rational(355, 113));
  CHECK(best_rational(std::sqrt(2.0), 12) == Rational(17, 12));
  CHECK(best_rational(2.0, 1) == Rational(2));
  CHECK(best_rational(0.0, 5) == Rational(0));
  CHECK(best_rational(0.999, 5) == Rational(1));
  CHECK(best_rational(-0.26, 4) == Rational(-1, 4));
}

TEST_CASE("heuristic examples") {
  const FloatMatrix b0 = FloatMatrix::of(build_b0());
  const auto four = heuristic_nnr_ub(b0, 4, quick());
  REQUIRE(four);
  CHECK(four->residual <= 1e-9);
  CHECK(relative_residual(b0, *four) <= 1e-9);

  HeuristicOptions random_only = quick();
  random_only.trivial_starts = false;
  random_only.restarts = 64;
  const auto four_random = heuristic_nnr_ub(b0, 4, random_only);
  REQUIRE(four_random);
  CHECK(four_random->restart >= 2);
  CHECK(relative_residual(b0, *four_random) <= 1e-9);

  const HeuristicResult three = heuristic_search(b0, 3, quick());
  CHECK(!three.found);
  CHECK(three.best_residual > 1e-3);

  const std::vector<Scalar> half{Scalar(Rational(1, 2))};
  CHECK(heuristic_nnr_ub(FloatMatrix::of(build_b(half)), 4, quick()).has_value());
  CHECK(!heuristic_nnr_ub(b0, 0, quick()));
}

TEST_CASE("heuristic at r = rows succeeds on random nonnegative matrices") {
  std::mt19937_64 rng(52);
  for (int it = 0; it < 30; ++it) {
    const std::size_t rows = 1 + it % 5, cols = 1 + (it / 5) % 6;
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, oracle::random_rational(rng, 0, 3, 5));
    const auto f = heuristic_nnr_ub(FloatMatrix::of(m), rows, quick());
    REQUIRE(f);
    CHECK(f->residual <= 1e-9);
  }
}

TEST_CASE("heuristic is deterministic and kernel-independent") {
  const std::vector<Scalar> alphas{Scalar(Rational(1, 3)), Scalar(Rational(1, 3)), Scalar(Rational(1, 3))};
  const FloatMatrix m = FloatMatrix::of(build_b(alphas));
  HeuristicOptions o = quick(9);
  o.trivial_starts = false;
  const HeuristicResult a = heuristic_search(m, 4, o), b = heuristic_search(m, 4, o);
  REQUIRE(a.found.has_value() == b.found.has_value());
  CHECK(a.best_residual == b.best_residual);
  if (a.found) {
    CHECK(a.found->left == b.found->left);
    CHECK(a.found->right == b.found->right);
    CHECK(a.found->restart == b.found->restart);
  }
  if (kernels::isa_supported(kernels::Isa::Avx2)) {
    HeuristicOptions s = o, v = o;
    s.isa = kernels::Isa::Scalar;
    v.isa = kernels::Isa::Avx2;
    const HeuristicResult rs = heuristic_search(m, 4, s), rv = heuristic_search(m, 4, v);
    CHECK(rs.found.has_value() == rv.found.has_value());
    CHECK(std::abs(rs.best_residual - rv.best_residual) <= 1e-6);
  }
  const HeuristicResult other = heuristic_search(FloatMatrix::of(build_b0()), 3, quick(1));
  const HeuristicResult again = heuristic_search(FloatMatrix::of(build_b0()), 3, quick(1));
  CHECK(other.best_residual == again.best_residual);
}

TEST_CASE("exactify_factorization") {
  const std::vector<Scalar> half{Scalar(Rational(1, 2))};
  const ExactMatrix bh = build_b(half);
  const NNFactorization exact = factor_b_equal(Scalar(Rational(1, 2)), 1);
  FloatFactorization ff{5, 5, 4, std::vector<double>(20), std::vector<double>(20), 0.0, 0};
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 5; ++i) ff.left[i * 4 + k] = to_double(exact.terms()[k].u[i]);
    for (std::size_t j = 0; j < 5; ++j) ff.right[k * 5 + j] = to_double(exact.terms()[k].v[j]);
  }
  const auto back = exactify_factorization(ff, bh, 2);
  REQUIRE(back);
  CHECK(validate_factorization(bh, *back).passed());

  const ExactMatrix b0 = build_b0();
  FloatFactorization rows{4, 4, 4, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), 0.0, 0};
  for (std::size_t i = 0; i < 4; ++i) {
    rows.left[i * 4 + i] = 1.0;
    for (std::size_t j = 0; j < 4; ++j) rows.right[i * 4 + j] = to_double(b0(i, j));
  }
  CHECK(exactify_factorization(rows, b0, 1).has_value());

  FloatFactorization noisy = rows;
  noisy.right[1] = 0.4;
  CHECK(!exactify_factorization(noisy, b0, 1).has_value());
  CHECK(!exactify_factorization(rows, ExactMatrix(3, 4), 1).has_value());
}

TEST_CASE("bounds_report examples") {
  const BoundsReport b0 = bounds_report(build_b0());
  CHECK(b0.rank_lb == 3);
  CHECK(b0.rect_lb == 4);
  CHECK(b0.heur_ub == std::optional<std::size_t>(4));
  CHECK(b0.pinned == std::optional<std::size_t>(4));
  CHECK(b0.exact_witness.has_value());

  const std::vector<Scalar> half{Scalar(Rational(1, 2))};
  CHECK(bounds_report(build_b(half)).pinned == std::optional<std::size_t>(4));
  CHECK(bounds_report(ExactMatrix::identity(5)).pinned == std::optional<std::size_t>(5));
  CHECK(bounds_report(ExactMatrix(2, 3)).pinned == std::optional<std::size_t>(0));

  const std::vector<Scalar> big{Scalar(Rational(3, 2)), Scalar(Rational(3, 2))};
  BoundsOptions o;
  o.max_rank = 4;
  const BoundsReport unpinned = bounds_report(build_b(big), o);
  CHECK(unpinned.rank_lb == 4);
  CHECK(unpinned.rect_lb <= 4);
  CHECK(!unpinned.heur_ub);
  CHECK(!unpinned.pinned);
  CHECK(unpinned.attempts.size() == 1);

  ExactMatrix neg(1, 1);
  neg.set(0, 0, -1);
  CHECK(code_of([&] { bounds_report(neg); }) == ErrorCode::NegativeInput);
  CHECK(code_of([] { bounds_report(ExactMatrix(40, 40)); }) == ErrorCode::TooLarge);

  const std::string text = format_bounds_report(b0);
  CHECK(text.find("evidence only") != std::string::npos);
  CHECK(text.find("\n--\n") != std::string::npos);
  CHECK(text.find("pinned=4\n") != std::string::npos);
  CHECK(format_bounds_report(bounds_report(build_b0())) == text);
}

TEST_CASE("bounds on the reduced matrix of K2 are consistent with the prediction") {
  Graph k2(2);
  k2.add_edge(0, 1);
  const ReducedGraph red = reduce_graph(k2);
  BoundsOptions o;
  o.max_rank = red.predicted_rank;
  o.heuristic.restarts = 8;
  const BoundsReport rep = bounds_report(red.matrix, o);
  CHECK(rep.lower() <= red.predicted_rank);
  if (rep.heur_ub) CHECK(*rep.heur_ub >= rep.lower());
}
