#pragma once

// Exact arithmetic over Q and Q(sqrt 2).
//
// A Scalar is the real number p + q*sqrt(2) with p, q rational. Rational
// values are the q == 0 slice, so the embedding Q -> Q(sqrt 2) is free. The
// field a container lives in is carried separately as a Domain tag.

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace nnr {

using Rational = mpq_class;

enum class Domain { Rational, Quadratic };

std::string_view domain_name(Domain d);
Domain parse_domain(std::string_view text);

class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : p_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& p) : p_(p) { p_.canonicalize(); }  // NOLINT
  Scalar(const Rational& p, const Rational& q) : p_(p), q_(q) {
    p_.canonicalize();
    q_.canonicalize();
  }

  static Scalar sqrt2() { return Scalar(Rational(0), Rational(1)); }
  static Scalar ratio(long num, long den);

  const Rational& rational_part() const { return p_; }
  const Rational& sqrt2_part() const { return q_; }

  bool is_rational() const { return sgn(q_) == 0; }
  bool is_zero() const { return sgn(p_) == 0 && sgn(q_) == 0; }
  int sign() const;

  bool in_domain(Domain d) const { return d == Domain::Quadratic || is_rational(); }

  Scalar conjugate() const { return Scalar(p_, -q_); }
  // p^2 - 2 q^2, the field norm down to Q.
  Rational norm() const;
  Scalar inverse() const;

  Scalar operator-() const { return Scalar(-p_, -q_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
  // Order of the real numbers represented.
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  Rational p_{0};
  Rational q_{0};
};

// Exact sign of p + q*sqrt(2): -1, 0 or +1.
int quad_sign(const Scalar& x);

// Grammar: INT | INT "/" POSINT | RATPART ("+"|"-") URATPART "r2".
// Throws MalformedScalar on grammar violations, WrongDomain when a sqrt(2)
// component appears under Domain::Rational.
Scalar parse_scalar(std::string_view text, Domain domain);
std::string format_scalar(const Scalar& x);

}  // namespace nnr
