#include "basex/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace basex::simd {

namespace {

struct Kernels {
  DotFn dot;
  AxpyFn axpy;
  RotFn rotate;
  const char* name;
};

Kernels select() {
#ifdef BASEX_HAVE_AVX2
  const char* force = std::getenv("BASEX_SIMD");
  const bool want_scalar = force != nullptr && std::strcmp(force, "scalar") == 0;
  if (!want_scalar && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {&avx2::dot, &avx2::axpy, &avx2::rotate, "avx2"};
  }
#endif
  return {&scalar::dot, &scalar::axpy, &scalar::rotate, "scalar"};
}

const Kernels& kernels() {
  static const Kernels k = select();
  return k;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return kernels().dot(a, b, n);
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  kernels().axpy(y, alpha, x, n);
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  kernels().rotate(x, y, c, s, n);
}

const char* active_kernel() { return kernels().name; }

}  // namespace basex::simd
