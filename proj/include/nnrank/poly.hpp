#pragma once

// Sparse polynomials over Q in the four variables a, b, c, d.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nnrank/scalar.hpp"

namespace nnr {

enum class PolyVar : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

using Exponents = std::array<std::uint8_t, 4>;
using PolyPoint = std::array<Scalar, 4>;

class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(long c) : MultiPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  explicit MultiPoly(const Rational& c);

  static MultiPoly variable(PolyVar v);
  static MultiPoly monomial(const Rational& coeff, Exponents e);

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  // Throws WrongDomain if a coordinate of the point is outside `domain`.
  Scalar evaluate(const PolyPoint& point, Domain domain) const;

  // e.g. "2*d^2 - 4*d + 1"
  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  std::map<Exponents, Rational> terms_;
};

using PolyGrid = std::vector<std::vector<MultiPoly>>;

// Determinant by cofactor expansion along the first row.
MultiPoly det_symbolic(const PolyGrid& grid);

}  // namespace nnr
