#include "webrec/linalg.hpp"

#include <cmath>
#include <string>

#include "webrec/errors.hpp"
#include "webrec/simd/kernels.hpp"

namespace webrec {

void lu_factor(Mat& a, std::vector<int>& piv) {
  const std::size_t n = a.rows();
  piv.resize(n);
  double max_piv = 0.0, min_piv = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = static_cast<int>(p);
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    const double d = a(k, k);
    if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
      throw NumericalError("lu_factor: singular pivot at step " + std::to_string(k) +
                           " (pivot magnitude ratio so far " +
                           std::to_string(min_piv > 0 ? max_piv / min_piv : 0.0) + ")");
    }
    if (k == 0) {
      max_piv = min_piv = std::abs(d);
    } else {
      max_piv = std::max(max_piv, std::abs(d));
      min_piv = std::min(min_piv, std::abs(d));
    }
    const double inv = 1.0 / d;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a(i, k) * inv;
      a(i, k) = m;
      simd::axpy(-m, a.row(k) + k + 1, a.row(i) + k + 1, n - k - 1);
    }
  }
}

void lu_solve_inplace(const Mat& lu, const std::vector<int>& piv, double* b) {
  const std::size_t n = lu.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = static_cast<std::size_t>(piv[k]);
    if (p != k) std::swap(b[k], b[p]);
    b[k] -= simd::dot(lu.row(k), b, k);
  }
  for (std::size_t k = n; k-- > 0;) {
    b[k] -= simd::dot(lu.row(k) + k + 1, b + k + 1, n - k - 1);
    b[k] /= lu(k, k);
  }
}

std::vector<double> solve_dense(Mat a, std::vector<double> b) {
  std::vector<int> piv;
  lu_factor(a, piv);
  lu_solve_inplace(a, piv, b.data());
  return b;
}

void cholesky_inplace(Mat& a) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double s = a(i, j) - simd::dot(a.row(i), a.row(j), j);
      if (i == j) {
        if (!(s > 0.0))
          throw NumericalError("cholesky: non-positive minor at index " + std::to_string(i));
        a(i, i) = std::sqrt(s);
      } else {
        a(i, j) = s / a(j, j);
      }
    }
  }
}

std::vector<double> lower_tri_matvec(const Mat& l, const std::vector<double>& z) {
  const std::size_t n = l.rows();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = simd::dot(l.row(i), z.data(), i + 1);
  return y;
}

std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dot(a.row(i), x.data(), a.cols());
  return y;
}

}  // namespace webrec
