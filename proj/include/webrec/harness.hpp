#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webrec/metrics.hpp"
#include "webrec/profiles.hpp"
#include "webrec/sg_invert.hpp"
#include "webrec/stats.hpp"

namespace webrec {

enum class TransferDirection { SgToKlo, KloToSg };

// Paired Monte Carlo comparison: per realisation, sample a profile, solve the
// source-method forward problem on a fine grid, resample the trace to the
// coarse inversion grid, inject noise once per level in the source convention,
// transfer to the other convention, reconstruct with both methods and record
// the four error norms on a common spatial grid.
struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  int n_realisations = 100;
  double length = 2.0;
  int n_time = 401;    // coarse samples over [0, 2*length]; must be odd
  int fine_ratio = 4;  // forward grid refinement over the inversion grid
  std::vector<double> deltas = {0.0, 0.01, 0.05, 0.10};
  TransferDirection transfer = TransferDirection::SgToKlo;
  int jobs = 1;

  // profile ensemble
  int n_grid = 400;
  std::vector<std::string> families = {"se", "matern", "hybrid"};
  std::vector<double> weights = {1.0, 1.0, 1.0};
  Bounds bounds{};
  KernelSpec se_spec = KernelSpec::se();
  KernelSpec matern_spec = KernelSpec::matern();
  KernelSpec hybrid_spec = KernelSpec::hybrid_default();

  // forward solvers
  double klo_eta = 0.4;
  int sg_impulse_width = 1;

  // inversion
  double phi_noiseless = 1e-10;
  double phi_noisy = 1e-6;
  SgQuadrature quadrature = SgQuadrature::Gregory4;
  SgSolver sg_solver = SgSolver::LevinsonWoodbury;
  std::size_t n_r = 150;
  double x_min = 0.0;
  bool central_diff = false;

  void validate() const;
  double coarse_dt() const { return 2.0 * length / static_cast<double>(n_time - 1); }
  std::vector<double> common_grid() const;  // SG reconstruction grid on [0, length]
};

// Plain-text "key = value" config grouped by [section] headers; unknown keys
// or sections are errors.
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentResult {
  std::vector<ErrorRecord> errors;
  std::vector<StatReport> reports;
  std::vector<std::pair<int, std::string>> failures;  // realisation, reason
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// errors.csv, report.json, table8.csv under out_dir.
void write_experiment_outputs(const ExperimentResult& res, const ExperimentConfig& cfg,
                              const std::string& out_dir);

}  // namespace webrec
