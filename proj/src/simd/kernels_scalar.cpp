#include "webrec/simd/kernels.hpp"

#include <cmath>

namespace webrec::simd::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot_rev_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[n - 1 - i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void axpy_rev_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[n - 1 - i], y[i]);
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{dot_scalar, dot_rev_scalar, axpy_scalar,
                             axpy_rev_scalar, scal_scalar, "scalar"};
  return t;
}

}  // namespace webrec::simd::detail
