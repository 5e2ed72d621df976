#pragma once

// Dense double-precision kernels for the factorization heuristic. Each
// kernel has a portable scalar reference and, on x86-64, an AVX2/FMA variant
// chosen at runtime from CPU features.

#include <cstddef>
#include <string_view>

namespace nnr::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = max(floor, y + c * g)
  void (*step_project)(double* y, const double* g, double c, double floor, std::size_t n);
};

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

const Table& table(Isa isa);  // throws std::invalid_argument if unsupported
const Table& active();
Isa active_isa();
// Overrides runtime detection; throws std::invalid_argument if unsupported.
void select(Isa isa);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void step_project(double* y, const double* g, double c, double floor, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define NNRANK_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void step_project(double* y, const double* g, double c, double floor, std::size_t n);
}  // namespace avx2
#endif

}  // namespace nnr::kernels
