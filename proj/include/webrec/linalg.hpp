#pragma once

#include <cstddef>
#include <vector>

namespace webrec {

// Dense row-major matrix. Sized-for-purpose: the largest systems here are a
// few thousand square, solved once each.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : r_(rows), c_(cols), d_(rows * cols, fill) {}

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  double& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

  double* row(std::size_t i) { return d_.data() + i * c_; }
  const double* row(std::size_t i) const { return d_.data() + i * c_; }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<double> d_;
};

// In-place LU with partial pivoting. Throws NumericalError on a (near-)singular
// pivot, with a crude condition estimate (max/min pivot magnitude) attached.
void lu_factor(Mat& a, std::vector<int>& piv);

// Solve with a factorisation from lu_factor; b is overwritten by the solution.
void lu_solve_inplace(const Mat& lu, const std::vector<int>& piv, double* b);

// One-shot dense solve (copies a).
std::vector<double> solve_dense(Mat a, std::vector<double> b);

// In-place lower Cholesky of an SPD matrix; upper triangle left untouched.
// Throws NumericalError if a leading minor is not positive.
void cholesky_inplace(Mat& a);

// y = L z for the lower-triangular factor stored by cholesky_inplace.
std::vector<double> lower_tri_matvec(const Mat& l, const std::vector<double>& z);

std::vector<double> matvec(const Mat& a, const std::vector<double>& x);

}  // namespace webrec
