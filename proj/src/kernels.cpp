#include "nnrank/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace nnr::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void step_project(double* y, const double* g, double c, double floor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(floor, y[i] + c * g[i]);
}

}  // namespace scalar

namespace {

constexpr Table kScalar{Isa::Scalar, &scalar::dot, &scalar::axpy, &scalar::step_project};
#ifdef NNRANK_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::Avx2, &avx2::dot, &avx2::axpy, &avx2::step_project};
#endif

const Table* detect() {
#ifdef NNRANK_HAVE_AVX2_KERNELS
  if (isa_supported(Isa::Avx2)) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{detect()};
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#ifdef NNRANK_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& table(Isa isa) {
  if (isa == Isa::Scalar) return kScalar;
#ifdef NNRANK_HAVE_AVX2_KERNELS
  if (isa_supported(Isa::Avx2)) return kAvx2;
#endif
  throw std::invalid_argument("kernel ISA not supported on this CPU: " + std::string(isa_name(isa)));
}

const Table& active() { return *current().load(); }

Isa active_isa() { return active().isa; }

void select(Isa isa) { current().store(&table(isa)); }

}  // namespace nnr::kernels
