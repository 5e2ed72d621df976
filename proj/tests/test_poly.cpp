#include <doctest.h>

#include <random>

#include "nnrank/cohen_rothblum.hpp"
#include "nnrank/poly.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nnr;
using testing::code_of;

namespace {

const MultiPoly a = MultiPoly::variable(PolyVar::A);
const MultiPoly b = MultiPoly::variable(PolyVar::B);
const MultiPoly c = MultiPoly::variable(PolyVar::C);
const MultiPoly d = MultiPoly::variable(PolyVar::D);

MultiPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> exp(0, 2), coeff(-4, 4), count(0, 4);
  MultiPoly p;
  for (int t = count(rng); t > 0; --t)
    p += MultiPoly::monomial(Rational(coeff(rng)), {static_cast<std::uint8_t>(exp(rng)),
                                                    static_cast<std::uint8_t>(exp(rng)),
                                                    static_cast<std::uint8_t>(exp(rng)),
                                                    static_cast<std::uint8_t>(exp(rng))});
  return p;
}

PolyPoint random_point(std::mt19937_64& rng, bool quad) {
  PolyPoint pt;
  for (auto& x : pt) x = quad ? oracle::random_quad(rng, -2, 2, 5) : oracle::random_rational(rng, -2, 2, 5);
  return pt;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  CHECK((a + b) + (a - b) == MultiPoly(2) * a);
  CHECK((d - MultiPoly(1)) * (d - MultiPoly(1)) == d * d - MultiPoly(2) * d + MultiPoly(1));
  const MultiPoly q = MultiPoly(2) * d * d - MultiPoly(4) * d + MultiPoly(1);
  CHECK(q == MultiPoly::monomial(2, {0, 0, 0, 2}) + MultiPoly::monomial(-4, {0, 0, 0, 1}) + MultiPoly(1));
  CHECK((a - a).is_zero());
  CHECK((a - a).terms().empty());
  CHECK(MultiPoly(0).is_zero());
  CHECK((a * b * c * d).total_degree() == 4);
  CHECK((-a + a).is_zero());
  CHECK(q.to_string() == "2*d^2 - 4*d + 1");
  CHECK(MultiPoly().to_string() == "0");
}

TEST_CASE("evaluation") {
  const MultiPoly q = MultiPoly(2) * d * d - MultiPoly(4) * d + MultiPoly(1);
  CHECK(q.evaluate({0, 0, 0, cr::alpha()}, Domain::Quadratic).is_zero());
  CHECK(q.evaluate({0, 0, 0, 1}, Domain::Rational) == Scalar(-1));
  CHECK(q.evaluate({0, 0, 0, Scalar(Rational(1, 2))}, Domain::Rational) == Scalar(Rational(-1, 2)));
  CHECK(code_of([&] { q.evaluate({0, 0, 0, cr::alpha()}, Domain::Rational); }) == ErrorCode::WrongDomain);
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    const MultiPoly p = random_poly(rng), q = random_poly(rng);
    const PolyPoint pt = random_point(rng, it % 2 == 0);
    CHECK((p * q).evaluate(pt, Domain::Quadratic) == p.evaluate(pt, Domain::Quadratic) * q.evaluate(pt, Domain::Quadratic));
    CHECK((p + q).evaluate(pt, Domain::Quadratic) == p.evaluate(pt, Domain::Quadratic) + q.evaluate(pt, Domain::Quadratic));
    CHECK((p - q).evaluate(pt, Domain::Quadratic) == p.evaluate(pt, Domain::Quadratic) - q.evaluate(pt, Domain::Quadratic));
    CHECK(p * (q + p) == p * q + p * p);
  }
}

TEST_CASE("det_symbolic") {
  PolyGrid id(4, std::vector<MultiPoly>(4));
  for (std::size_t i = 0; i < 4; ++i) id[i][i] = MultiPoly(1);
  CHECK(det_symbolic(id) == MultiPoly(1));

  PolyGrid dup = cr::symbolic_c();
  dup[4] = dup[2];
  CHECK(det_symbolic(dup).is_zero());

  // det C expanded by hand
  const MultiPoly expected = a * b * c + a * b * d - a * b - MultiPoly(2) * a * c * d + a * d - MultiPoly(2) * b * d +
                             MultiPoly(2) * c * d - c + d;
  CHECK(det_symbolic(cr::symbolic_c()) == expected);
  CHECK(det_symbolic({}) == MultiPoly(1));
}

TEST_CASE("det_symbolic commutes with evaluation") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + it % 5;
    PolyGrid g(n, std::vector<MultiPoly>(n));
    for (auto& row : g)
      for (auto& x : row) x = random_poly(rng);
    const PolyPoint pt = random_point(rng, it % 3 == 0);
    ExactMatrix m(n, n, Domain::Quadratic);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.set(i, j, g[i][j].evaluate(pt, Domain::Quadratic));
    CHECK(det_symbolic(g).evaluate(pt, Domain::Quadratic) == determinant(m));
    CHECK(det_symbolic(g).evaluate(pt, Domain::Quadratic) == oracle::det_cofactor(oracle::grid_of(m)));
  }
}
