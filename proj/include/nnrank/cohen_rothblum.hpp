#pragma once

// Machine verification of the 21x21 integer matrix M whose real nonnegative
// rank is at most 19 while its rational nonnegative rank is at least 20.
//
// M arises from the 5x5 matrix C(a,b,c,d) by four gadget eliminations
// (d with k = 2 and r = 3, then c, b, a with k = 1, each over [1, 2]). The
// rational obstruction is that the 4x4 minors of C vanish simultaneously
// only where 2d^2 - 4d + 1 = 0, which has no rational root.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnrank/gadgets.hpp"
#include "nnrank/matrix.hpp"
#include "nnrank/poly.hpp"

namespace nnr::cr {

struct CPoint {
  Scalar a, b, c, d;
};

// 1 + sqrt(2)/2, a root of 2x^2 - 4x + 1.
Scalar alpha();
// sqrt(2) = 2 - 1/alpha.
Scalar a_star();

ExactMatrix build_c(const CPoint& pt);
PolyGrid symbolic_c();
// C with a@(0,0), b@(2,3), c@(3,4), d@{(4,3),(4,4)}, each with s = 2.
PartialMatrix c_as_partial();

struct SymbolicMinor {
  std::size_t deleted_row;
  std::size_t deleted_col;
  MultiPoly poly;
};

// The 25 4x4 minors, ordered by (deleted row, deleted column).
std::vector<SymbolicMinor> symbolic_minors_c();

struct CertificateIdentity {
  std::string label;
  MultiPoly target;
  // (index into symbolic_minors_c(), polynomial coefficient)
  std::vector<std::pair<std::size_t, MultiPoly>> combination;
};

struct Certificate {
  std::vector<CertificateIdentity> identities;
  MultiPoly quadratic;  // the univariate constraint with no rational root
};

Certificate default_certificate();

struct CertificateReport {
  std::vector<std::pair<std::string, bool>> identities;
  std::vector<std::pair<Rational, Rational>> root_candidates;  // (candidate, value)
  bool no_rational_root = false;
  bool conjugate_roots_vanish = false;
  bool passed() const;
  std::string text() const;
};

CertificateReport verify_certificate(const Certificate& cert);
// Throws CertificateFailure if the built-in certificate does not verify.
CertificateReport certify_no_rational_point();

// Three rank-one terms summing to C(sqrt2, alpha, alpha, alpha). `alpha_value`
// exists for negative controls.
NNFactorization explicit_c_factorization(const Scalar& alpha_value = alpha());

ExactMatrix build_m();

struct Rebuild {
  ExactMatrix matrix;
  GadgetTrace trace;
  PartialMatrix after_first_step;  // M1(a, b, c) as a partial matrix
};

// Throws ReconstructionMismatch if the replay differs from build_m().
Rebuild rebuild_m_from_gadgets();

// 3 + 4*4 terms over Q(sqrt 2); throws ValidationFailure on any defect.
NNFactorization build_m_factorization_19();

struct ProbeReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::array<std::size_t, 6> rank_counts{};  // rank 0..5
  std::optional<CPoint> first_low_rank;       // a point with rank <= 3, if any

  std::size_t below_four() const { return rank_counts[0] + rank_counts[1] + rank_counts[2] + rank_counts[3]; }
};

// Seeded rational points in [1,2]^4 with denominators <= max_den.
CPoint sample_point(std::uint64_t seed, std::size_t index, long max_den = 64);
ProbeReport probe_rational_points(std::size_t samples, std::uint64_t seed, long max_den = 64);

struct SeparationOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::optional<Scalar> alpha_override;
};

struct SeparationReport {
  bool rebuild_ok = false;
  std::string rebuild_detail;
  bool witness_ok = false;
  std::size_t witness_terms = 0;
  std::string witness_detail;
  bool certificate_ok = false;
  bool loci_ok = false;
  ProbeReport probes;

  bool real_upper_bound() const { return rebuild_ok && witness_ok && witness_terms == 19; }
  bool rational_lower_bound() const { return rebuild_ok && certificate_ok && probes.below_four() == 0; }
  bool passed() const { return real_upper_bound() && rational_lower_bound() && loci_ok; }
  std::string text() const;
};

SeparationReport separation_report(const SeparationOptions& opts = {});

}  // namespace nnr::cr
