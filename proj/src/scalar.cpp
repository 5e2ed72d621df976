#include "nnrank/scalar.hpp"

#include <cctype>

#include "nnrank/error.hpp"

namespace nnr {

std::string_view domain_name(Domain d) { return d == Domain::Rational ? "rat" : "quad"; }

Domain parse_domain(std::string_view text) {
  if (text == "rat") return Domain::Rational;
  if (text == "quad") return Domain::Quadratic;
  throw Error(ErrorCode::MalformedFile, "unknown domain '" + std::string(text) + "'");
}

Scalar Scalar::ratio(long num, long den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  return Scalar(Rational(num, den));
}

Rational Scalar::norm() const { return Rational(p_ * p_ - 2 * q_ * q_); }

int Scalar::sign() const { return quad_sign(*this); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  // norm is nonzero because sqrt(2) is irrational
  Rational n = norm();
  return Scalar(Rational(p_ / n), Rational(-q_ / n));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  p_ += o.p_;
  q_ += o.q_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  p_ -= o.p_;
  q_ -= o.q_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_rational() && o.is_rational()) {
    p_ *= o.p_;
    return *this;
  }
  Rational p = p_ * o.p_ + 2 * q_ * o.q_;
  Rational q = p_ * o.q_ + q_ * o.p_;
  p_ = std::move(p);
  q_ = std::move(q);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_rational()) {
    if (sgn(o.p_) == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
    p_ /= o.p_;
    q_ /= o.p_;
    return *this;
  }
  return *this *= o.inverse();
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  int s = quad_sign(a - b);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int quad_sign(const Scalar& x) {
  const int sp = sgn(x.rational_part());
  const int sq = sgn(x.sqrt2_part());
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // opposite signs: compare p^2 with 2 q^2
  const Rational p2 = x.rational_part() * x.rational_part();
  const Rational q2 = 2 * x.sqrt2_part() * x.sqrt2_part();
  const int c = cmp(p2, q2);
  return c == 0 ? 0 : (c > 0 ? sp : sq);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw Error(ErrorCode::MalformedScalar, "cannot parse '" + std::string(text) + "'");
}

// INT | INT "/" POSINT, optionally restricted to unsigned INT.
Rational parse_ratpart(std::string_view s, bool allow_sign, std::string_view whole) {
  std::string_view num = s;
  std::string_view den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (!all_digits(den)) malformed(whole);
  }
  std::string_view mag = num;
  if (!mag.empty() && mag.front() == '-') {
    if (!allow_sign) malformed(whole);
    mag.remove_prefix(1);
  }
  if (!all_digits(mag)) malformed(whole);
  Rational r;
  if (den.empty()) {
    r = Rational(mpz_class(std::string(num)));
  } else {
    mpz_class d{std::string(den)};
    if (d == 0) malformed(whole);
    r = Rational(mpz_class(std::string(num)), d);
    r.canonicalize();
  }
  return r;
}

}  // namespace

Scalar parse_scalar(std::string_view text, Domain domain) {
  if (text.empty()) malformed(text);
  if (text.size() >= 2 && text.substr(text.size() - 2) == "r2") {
    std::string_view body = text.substr(0, text.size() - 2);
    // operator is the last +/- that is not a leading sign
    auto op = body.find_last_of("+-");
    if (op == std::string_view::npos || op == 0) malformed(text);
    Rational p = parse_ratpart(body.substr(0, op), true, text);
    Rational q = parse_ratpart(body.substr(op + 1), false, text);
    if (body[op] == '-') q = -q;
    if (domain == Domain::Rational && sgn(q) != 0)
      throw Error(ErrorCode::WrongDomain, "sqrt(2) component in rational scalar '" + std::string(text) + "'");
    return Scalar(p, q);
  }
  return Scalar(parse_ratpart(text, true, text));
}

std::string format_scalar(const Scalar& x) {
  std::string out = x.rational_part().get_str();
  if (x.is_rational()) return out;
  const Rational& q = x.sqrt2_part();
  if (sgn(q) < 0) {
    out += '-';
    out += Rational(-q).get_str();
  } else {
    out += '+';
    out += q.get_str();
  }
  out += "r2";
  return out;
}

}  // namespace nnr
