#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace webrec {

enum class KernelKind { Se, Matern, Hybrid };

struct HybridParams {
  double smooth_lengthscale = 0.12;
  double smooth_sigma = 0.20;
  double rough_lengthscale = 0.05;
  double rough_sigma = 0.12;
  double rough_nu = 1.5;
  int n_rect = 5;
  double width_min = 0.02, width_max = 0.10;
  double height_min = -0.35, height_max = 0.35;
};

struct KernelSpec {
  KernelKind kind = KernelKind::Se;
  double lengthscale = 0.12;  // SE / Matern
  double sigma = 0.20;
  double nu = 1.5;  // Matern only; closed forms at 0.5, 1.5, 2.5
  HybridParams hybrid;

  static KernelSpec se(double lengthscale = 0.12, double sigma = 0.20);
  static KernelSpec matern(double lengthscale = 0.12, double sigma = 0.20, double nu = 1.5);
  static KernelSpec hybrid_default();

  void validate() const;  // throws ParamError
  std::string kind_name() const;
};

// Covariance value k(r) of the Gaussian-process part (for Hybrid: smooth SE +
// rough Matern; the rectangular bumps are not part of the covariance).
double kernel_eval(const KernelSpec& spec, double r);

struct Bounds {
  double lo = 0.5;
  double hi = 2.0;
};

struct AreaProfile {
  std::vector<double> x;  // uniform, increasing, x.front() == 0
  std::vector<double> a;  // strictly positive
  std::uint64_t seed = 0;
  std::string generator = "external";
  std::vector<std::pair<std::string, std::string>> params;  // generator metadata

  double length() const { return x.back(); }
  double dx() const { return x[1] - x[0]; }
  void validate() const;  // grid and positivity invariants; throws ParamError
};

void clip_to_bounds(std::span<double> a, Bounds b);

// Log-area field g on the grid: g = L z with K = k(|xi-xj|) + jitter, plus the
// deterministic rectangular bumps for Hybrid. Draw order from the stream keyed
// by `seed`: the N standard normals z (skipped entirely when the GP variance
// is zero), then per bump (width, height, centre).
std::vector<double> sample_log_field(const KernelSpec& spec, std::span<const double> grid,
                                     std::uint64_t seed);

// Full generation: g -> A = exp(g), normalised to A(0) = 1, clipped to bounds.
AreaProfile sample_area(const KernelSpec& spec, std::vector<double> grid, std::uint64_t seed,
                        Bounds bounds = {});

// Constant profile A == value (generator tag "uniform").
AreaProfile uniform_profile(std::vector<double> grid, double value = 1.0);

void save_profile_csv(const AreaProfile& p, const std::string& path);
AreaProfile load_profile_csv(const std::string& path);

}  // namespace webrec
