#include "webrec/noise.hpp"

#include <cmath>

#include "webrec/errors.hpp"
#include "webrec/rng.hpp"
#include "webrec/simd/kernels.hpp"

namespace webrec {

double weighted_l2_norm(std::span<const double> v, double dt) {
  if (!(dt > 0.0)) throw ParamError("weighted_l2_norm: dt must be positive");
  return std::sqrt(dt * simd::dot(v.data(), v.data(), v.size()));
}

SgNoiseResult add_sg_noise(const BoundaryTrace& h, double delta, std::uint64_t seed) {
  h.validate();
  if (delta < 0.0) throw ParamError("add_sg_noise: delta must be nonnegative");
  SgNoiseResult out{h, false};
  if (delta == 0.0) return out;

  const double signal_norm = weighted_l2_norm(h.samples, h.dt);
  if (signal_norm == 0.0) {
    out.zero_signal = true;
    return out;
  }
  RngStream rng(seed);
  std::vector<double> eta(h.samples.size());
  for (double& v : eta) v = rng.normal();
  const double eta_norm = weighted_l2_norm(eta, h.dt);
  const double scale = delta * signal_norm / eta_norm;
  simd::axpy(scale, eta.data(), out.trace.samples.data(), eta.size());
  return out;
}

OperatorNormEstimate operator_norm(std::span<const double> h_hat, double tol, int max_iter) {
  bool nonzero = false;
  for (double v : h_hat)
    if (v != 0.0) nonzero = true;
  if (!nonzero) throw ParamError("operator_norm: kernel is identically zero");
  return toeplitz_operator_norm(h_hat, tol, max_iter);
}

std::vector<double> add_klo_noise(std::span<const double> h_hat, double delta,
                                  std::uint64_t seed) {
  if (delta < 0.0) throw ParamError("add_klo_noise: delta must be nonnegative");
  std::vector<double> out(h_hat.begin(), h_hat.end());
  if (delta == 0.0) return out;

  const double eps_eff = delta * operator_norm(h_hat).value;
  RngStream rng(seed);
  std::vector<double> noise(h_hat.size());
  for (double& v : noise) v = rng.normal();
  const double noise_norm = operator_norm(noise).value;
  simd::axpy(eps_eff / noise_norm, noise.data(), out.data(), out.size());
  return out;
}

KloSchedule klo_schedules(double delta, std::size_t n_grid, double lambda_norm) {
  if (delta < 0.0) throw ParamError("klo_schedules: delta must be nonnegative");
  KloSchedule s;
  if (delta == 0.0)
    s.beta = 2e-5;
  else if (delta <= 0.01)
    s.beta = 5e-3;
  else
    s.beta = 1e-2;
  s.eps_eff = delta == 0.0 ? 1e-4 : delta * lambda_norm;
  s.alpha = s.beta * std::pow(s.eps_eff, 4.0 / 9.0);
  s.sigma_kr = 6.0 * (static_cast<double>(n_grid) / 1500.0) * (1.0 + 40.0 * delta);
  return s;
}

}  // namespace webrec
