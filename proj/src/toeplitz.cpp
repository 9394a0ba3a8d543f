#include "webrec/toeplitz.hpp"

#include <cmath>

#include "webrec/errors.hpp"
#include "webrec/simd/kernels.hpp"

namespace webrec {

std::vector<double> causal_conv(std::span<const double> h, std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> y(n, 0.0);
  const std::size_t kmax = std::min(h.size(), n);
  for (std::size_t k = 0; k < kmax; ++k)
    if (h[k] != 0.0) simd::axpy(h[k], v.data(), y.data() + k, n - k);
  return y;
}

std::vector<double> causal_corr(std::span<const double> h, std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = std::min(h.size(), n - i);
    y[i] = simd::dot(h.data(), v.data() + i, len);
  }
  return y;
}

Mat toeplitz_lower(std::span<const double> h) {
  const std::size_t n = h.size();
  Mat t(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) t(i, j) = h[i - j];
  return t;
}

Mat toeplitz_symmetric(std::span<const double> c) {
  const std::size_t n = c.size();
  Mat t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = c[i >= j ? i - j : j - i];
  return t;
}

LevinsonStatus levinson_solve_multi(std::span<const double> c,
                                    const std::vector<std::vector<double>>& rhs,
                                    std::vector<std::vector<double>>& out) {
  const std::size_t m = c.size();
  const std::size_t nrhs = rhs.size();
  out.assign(nrhs, std::vector<double>(m, 0.0));
  if (m == 0) return {};
  const double c0 = c[0];
  if (c0 == 0.0 || !std::isfinite(c0)) return {false, 0};

  // Normalised first row/column (r[0] unused) and right-hand sides.
  std::vector<double> r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = c[k] / c0;
  for (std::size_t s = 0; s < nrhs; ++s) out[s][0] = rhs[s][0] / c0;
  if (m == 1) return {};

  std::vector<double> y(m, 0.0), ytmp(m, 0.0);
  y[0] = -r[1];
  double alpha = -r[1];
  double beta = 1.0;
  const double tiny = 1e-300;

  for (std::size_t k = 1; k < m; ++k) {
    beta *= (1.0 - alpha * alpha);
    if (!(beta > tiny) || !std::isfinite(beta)) return {false, k};
    for (std::size_t s = 0; s < nrhs; ++s) {
      double* x = out[s].data();
      const double mu = (rhs[s][k] / c0 - simd::dot_rev(x, r.data() + 1, k)) / beta;
      simd::axpy_rev(mu, y.data(), x, k);
      x[k] = mu;
    }
    if (k + 1 < m) {
      alpha = -(r[k + 1] + simd::dot_rev(y.data(), r.data() + 1, k)) / beta;
      std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k), ytmp.begin());
      simd::axpy_rev(alpha, ytmp.data(), y.data(), k);
      y[k] = alpha;
    }
  }
  return {};
}

OperatorNormEstimate toeplitz_operator_norm(std::span<const double> h, double tol,
                                            int max_iter) {
  const std::size_t n = h.size();
  OperatorNormEstimate est;
  double hmax = 0.0;
  for (double v : h) hmax = std::max(hmax, std::abs(v));
  if (n == 0 || hmax == 0.0) return est;  // zero operator

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double sigma_prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> w = causal_conv(h, v);
    const double sigma = std::sqrt(simd::dot(w.data(), w.data(), n));
    std::vector<double> u = causal_corr(h, w);
    const double un = std::sqrt(simd::dot(u.data(), u.data(), n));
    est.iterations = it;
    if (un == 0.0) {  // landed in the null space; restart direction is not needed at our sizes
      est.value = sigma;
      return est;
    }
    simd::scal(1.0 / un, u.data(), n);
    v.swap(u);
    if (it > 1 && std::abs(sigma - sigma_prev) < tol * sigma) {
      est.value = sigma;
      return est;
    }
    sigma_prev = sigma;
  }
  est.value = sigma_prev;
  est.converged = false;
  return est;
}

}  // namespace webrec
