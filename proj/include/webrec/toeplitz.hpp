#pragma once

#include <span>
#include <vector>

#include "webrec/linalg.hpp"

namespace webrec {

// y[i] = sum_{k<=i} h[k] * v[i-k]   (action of the lower-triangular Toeplitz
// matrix with first column h; matrix-free)
std::vector<double> causal_conv(std::span<const double> h, std::span<const double> v);

// y[i] = sum_{k} h[k] * v[i+k]      (action of its transpose)
std::vector<double> causal_corr(std::span<const double> h, std::span<const double> v);

// Explicit lower-triangular Toeplitz matrix with first column h.
Mat toeplitz_lower(std::span<const double> h);

// Explicit symmetric Toeplitz matrix with first column c.
Mat toeplitz_symmetric(std::span<const double> c);

struct LevinsonStatus {
  bool ok = true;          // false on reflection-coefficient breakdown
  std::size_t step = 0;    // breakdown step when !ok
};

// Solve T X = B for a symmetric Toeplitz T given by its first column c
// (c[0] != 0), for several right-hand sides sharing one recursion sweep.
// On breakdown (non-positive recursion denominator) returns ok=false and the
// contents of `out` are unspecified; callers fall back to a dense solve.
LevinsonStatus levinson_solve_multi(std::span<const double> c,
                                    const std::vector<std::vector<double>>& rhs,
                                    std::vector<std::vector<double>>& out);

// Largest singular value of the lower-triangular Toeplitz operator with first
// column h, by power iteration on T^T T using the matrix-free actions.
// Deterministic all-ones start. `converged` is false if max_iter was hit.
struct OperatorNormEstimate {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};
OperatorNormEstimate toeplitz_operator_norm(std::span<const double> h, double tol = 1e-8,
                                            int max_iter = 500);

}  // namespace webrec
