#pragma once

#include <cstddef>

// Runtime-dispatched arithmetic kernels. Scalar reference implementations and
// an AVX2/FMA variant selected once at startup; force_scalar() pins the
// reference path so the two can be equivalence-tested on the same machine.
//
// Elementwise kernels (axpy, axpy_rev, scal) round once per element in both
// variants (std::fma in the scalar path), so they agree bit-for-bit with the
// vector path. Reductions (dot, dot_rev) differ by summation order only.

namespace webrec::simd {

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i x[n-1-i] * y[i]
double dot_rev(const double* x, const double* y, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// y[i] += a * x[n-1-i]
void axpy_rev(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scal(double a, double* x, std::size_t n);

// Name of the active variant: "avx2+fma" or "scalar".
const char* active_isa();

// Pin the scalar path (tests only; not thread-safe against concurrent kernel
// calls). Returns the previous setting.
bool force_scalar(bool on);

namespace detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot_rev)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*axpy_rev)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  const char* name;
};

const KernelTable& scalar_table();
const KernelTable* avx2_table_or_null();  // null when not compiled in or no CPU support

}  // namespace detail

}  // namespace webrec::simd
