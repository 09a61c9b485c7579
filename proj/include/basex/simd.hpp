#pragma once

#include <cstddef>

// Small data-parallel kernels used by the dense linear algebra inner loops
// (Cholesky dot products, Jacobi row rotations, matrix powers).
//
// Each kernel has a scalar reference implementation and, when the build and
// CPU support it, an AVX2/FMA variant. Dispatch happens once at startup;
// set BASEX_SIMD=scalar in the environment to force the reference kernels.

namespace basex::simd {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double*, double, const double*, std::size_t);
using RotFn = void (*)(double*, double*, double, double, std::size_t);

// Dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
// y[i] += alpha * x[i]
void axpy(double* y, double alpha, const double* x, std::size_t n);
// In-place Givens rotation of two rows:
//   x[i] <-  c*x[i] + s*y[i]
//   y[i] <- -s*x[i] + c*y[i]
void rotate(double* x, double* y, double c, double s, std::size_t n);

// Name of the kernel set in use ("avx2" or "scalar").
const char* active_kernel();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace scalar

#ifdef BASEX_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace avx2
#endif

}  // namespace basex::simd
