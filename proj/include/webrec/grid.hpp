#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "webrec/errors.hpp"

namespace webrec {

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw ParamError("linspace: need at least 2 points");
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

inline bool is_uniform_increasing(std::span<const double> x, double rel_tol = 1e-9) {
  if (x.size() < 2) return false;
  const double h = x[1] - x[0];
  if (!(h > 0.0)) return false;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double hi = x[i + 1] - x[i];
    if (std::abs(hi - h) > rel_tol * std::abs(h)) return false;
  }
  return true;
}

// Linear interpolation on a sorted grid, clamped at both ends.
inline double lerp_clamped(std::span<const double> x, std::span<const double> y, double xi) {
  const std::size_t n = x.size();
  if (xi <= x[0]) return y[0];
  if (xi >= x[n - 1]) return y[n - 1];
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (x[mid] <= xi)
      lo = mid;
    else
      hi = mid;
  }
  const double t = (xi - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + t * (y[hi] - y[lo]);
}

// Linear interpolation of uniformly sampled values (sample i at i*dt), clamped.
inline double lerp_uniform_clamped(std::span<const double> y, double dt, double t) {
  const double s = t / dt;
  if (s <= 0.0) return y.front();
  const double smax = static_cast<double>(y.size() - 1);
  if (s >= smax) return y.back();
  const std::size_t i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  return y[i] + frac * (y[i + 1] - y[i]);
}

inline std::vector<double> resample_uniform(std::span<const double> y, double dt_src,
                                            double dt_dst, std::size_t n_dst) {
  std::vector<double> out(n_dst);
  for (std::size_t k = 0; k < n_dst; ++k)
    out[k] = lerp_uniform_clamped(y, dt_src, dt_dst * static_cast<double>(k));
  return out;
}

}  // namespace webrec
