#include "webrec/simd/kernels.hpp"

#include <atomic>

namespace webrec::simd {

namespace detail {

#if !WEBREC_AVX2_COMPILED
const KernelTable* avx2_table_or_null() { return nullptr; }
#endif

namespace {

const KernelTable* best_table() {
  if (const KernelTable* t = avx2_table_or_null()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = best_table();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace
}  // namespace detail

double dot(const double* x, const double* y, std::size_t n) {
  return detail::active().dot(x, y, n);
}

double dot_rev(const double* x, const double* y, std::size_t n) {
  return detail::active().dot_rev(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  detail::active().axpy(a, x, y, n);
}

void axpy_rev(double a, const double* x, double* y, std::size_t n) {
  detail::active().axpy_rev(a, x, y, n);
}

void scal(double a, double* x, std::size_t n) { detail::active().scal(a, x, n); }

const char* active_isa() { return detail::active().name; }

bool force_scalar(bool on) {
  const detail::KernelTable* prev = detail::g_active.load();
  bool was_scalar = prev && prev == &detail::scalar_table();
  detail::g_active.store(on ? &detail::scalar_table() : detail::best_table());
  return was_scalar;
}

}  // namespace webrec::simd
