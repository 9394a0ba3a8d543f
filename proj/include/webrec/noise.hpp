#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "webrec/toeplitz.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// (sum_i v_i^2 dt)^{1/2}
double weighted_l2_norm(std::span<const double> v, double dt);

// Additive Gaussian noise at relative energy delta: the perturbation has
// weighted norm exactly delta * ||h||. A fixed seed fixes the direction across
// delta values. A zero signal with delta > 0 is returned unchanged with the
// warning flag set.
struct SgNoiseResult {
  BoundaryTrace trace;
  bool zero_signal = false;
};
SgNoiseResult add_sg_noise(const BoundaryTrace& h, double delta, std::uint64_t seed);

// Operator 2-norm of the lower-triangular Toeplitz convolution by h_hat,
// estimated by power iteration on T^T T (matrix-free), deterministic start.
OperatorNormEstimate operator_norm(std::span<const double> h_hat, double tol = 1e-8,
                                   int max_iter = 500);

// Kernel perturbation of size eps_eff = delta * ||Lambda(h_hat)|| in operator
// norm: one noise realisation from the seeded stream, normalised so its
// induced Toeplitz operator has unit estimated norm.
std::vector<double> add_klo_noise(std::span<const double> h_hat, double delta,
                                  std::uint64_t seed);

// Regularisation and smoothing schedules as functions of the noise level.
// alpha = beta * eps_eff^{4/9} with eps_eff = delta * lambda_norm for delta>0
// and the fixed stabiliser 1e-4 in the noiseless case;
// sigma_kr = 6 * (n_grid / 1500) * (1 + 40 delta).
struct KloSchedule {
  double alpha = 0.0;
  double sigma_kr = 0.0;
  double beta = 0.0;
  double eps_eff = 0.0;
};
KloSchedule klo_schedules(double delta, std::size_t n_grid, double lambda_norm = 1.0);

}  // namespace webrec
