#include "webrec/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"
#include "webrec/forward_klo.hpp"
#include "webrec/forward_sg.hpp"
#include "webrec/grid.hpp"
#include "webrec/klo_invert.hpp"
#include "webrec/noise.hpp"
#include "webrec/rng.hpp"
#include "webrec/transfer.hpp"

namespace webrec {

namespace {

// Stream purposes for per-realisation seeds.
constexpr std::uint64_t kStreamProfile = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamFamily = 3;

}  // namespace

void ExperimentConfig::validate() const {
  if (n_realisations < 1) throw ParamError("config: n_realisations must be >= 1");
  if (!(length > 0.0)) throw ParamError("config: length must be positive");
  if (n_time < 41 || n_time % 2 == 0)
    throw ParamError("config: n_time must be odd and at least 41");
  if (fine_ratio < 2) throw ParamError("config: fine grid must be >= 2x the coarse grid");
  for (double d : deltas)
    if (d < 0.0) throw ParamError("config: deltas must be nonnegative");
  if (deltas.empty()) throw ParamError("config: need at least one delta");
  if (jobs < 1) throw ParamError("config: jobs must be >= 1");
  if (n_grid < 3) throw ParamError("config: n_grid must be >= 3");
  if (families.empty() || families.size() != weights.size())
    throw ParamError("config: families and weights must match and be nonempty");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ParamError("config: weights must be nonnegative");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw ParamError("config: weights must not all be zero");
  for (const auto& f : families)
    if (f != "se" && f != "matern" && f != "hybrid" && f != "uniform")
      throw ParamError("config: unknown family '" + f + "'");
  if (!(klo_eta > 0.0) || klo_eta >= 1.0) throw ParamError("config: klo_eta in (0,1)");
  if (sg_impulse_width < 1) throw ParamError("config: sg_impulse_width >= 1");
  if (phi_noiseless < 0.0 || phi_noisy < 0.0) throw ParamError("config: phi >= 0");
  if (n_r < 8) throw ParamError("config: n_r >= 8");
  if (x_min < 0.0) throw ParamError("config: x_min >= 0");
}

std::vector<double> ExperimentConfig::common_grid() const {
  const double dt = coarse_dt();
  const std::size_t n = static_cast<std::size_t>((n_time - 1) / 2) + 1;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = dt * static_cast<double>(j);
  return x;
}

namespace {

struct RealisationOutput {
  std::vector<ErrorRecord> records;
  std::string failure;
  bool failed = false;
};

std::string pick_family(const ExperimentConfig& cfg, std::uint64_t i) {
  if (cfg.families.size() == 1) return cfg.families[0];
  RngStream rng(cfg.master_seed, i, kStreamFamily);
  double wsum = 0.0;
  for (double w : cfg.weights) wsum += w;
  double u = rng.uniform01() * wsum;
  for (std::size_t f = 0; f < cfg.families.size(); ++f) {
    u -= cfg.weights[f];
    if (u < 0.0) return cfg.families[f];
  }
  return cfg.families.back();
}

AreaProfile make_profile(const ExperimentConfig& cfg, std::uint64_t i, std::string* family) {
  const std::string fam = pick_family(cfg, i);
  *family = fam;
  const std::uint64_t seed = derive_seed(cfg.master_seed, i, kStreamProfile);
  std::vector<double> grid = linspace(0.0, cfg.length, static_cast<std::size_t>(cfg.n_grid));
  if (fam == "uniform") {
    AreaProfile p = uniform_profile(std::move(grid));
    p.seed = seed;
    return p;
  }
  const KernelSpec& spec = fam == "se"       ? cfg.se_spec
                           : fam == "matern" ? cfg.matern_spec
                                             : cfg.hybrid_spec;
  return sample_area(spec, std::move(grid), seed, cfg.bounds);
}

ErrorRecord tag(ErrorRecord r, const std::string& method, double delta, int i,
                const std::string& generator) {
  r.method = method;
  r.delta = delta;
  r.realisation = i;
  r.generator = generator;
  return r;
}

// Resampled uniform-tube trace for the KLO-to-SG step reference; profile
// independent, computed once per run.
std::vector<double> klo_step_reference(const ExperimentConfig& cfg) {
  AreaProfile unif =
      uniform_profile(linspace(0.0, cfg.length, static_cast<std::size_t>(cfg.n_grid)));
  KloForwardConfig fwd;
  fwd.nx = static_cast<int>(std::lround(cfg.length / (cfg.coarse_dt() / cfg.fine_ratio))) + 1;
  fwd.eta = cfg.klo_eta;
  fwd.t_final = 2.0 * cfg.length;
  const BoundaryTrace t = simulate_klo(unif, fwd);
  return resample_trace(t, cfg.coarse_dt(), static_cast<std::size_t>(cfg.n_time)).samples;
}

// Noise discipline for both transfer directions: the boundary data live in the
// KLO convention, one noise realisation is injected into that trace, and the
// same noisy trace feeds both pipelines (KLO directly, SG after smoothing and
// differentiation). With the SG solver as source the trace is the transferred
// Neumann-to-Dirichlet kernel; differentiation recovers the SG kernel.
RealisationOutput run_realisation_sg_to_klo(const ExperimentConfig& cfg, int i,
                                            const std::vector<double>& common) {
  RealisationOutput out;
  std::string fam;
  const AreaProfile profile = make_profile(cfg, static_cast<std::uint64_t>(i), &fam);
  const AreaProfile truth = resample_profile(profile, common);
  const double dtc = cfg.coarse_dt();

  SgForwardConfig fwd;
  fwd.nx = static_cast<int>(std::lround(cfg.length / (dtc / cfg.fine_ratio)));
  fwd.t_final = 2.0 * cfg.length;
  fwd.impulse_width = cfg.sg_impulse_width;
  const BoundaryTrace fine = simulate_sg(profile, fwd);
  const BoundaryTrace h0 = resample_trace(fine, dtc, static_cast<std::size_t>(cfg.n_time));
  const std::vector<double> kernel0 = ndmap_from_sg(h0, 1.0, dtc).kernel;
  const double lambda_norm = operator_norm(kernel0).value;

  // The transferred uniform-tube trace is the exact discrete step, so the
  // ideal step reference built into sg_kernel_from_klo applies.
  const std::uint64_t noise_seed =
      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), kStreamNoise);

  for (double delta : cfg.deltas) {
    const std::vector<double> kernel_d = add_klo_noise(kernel0, delta, noise_seed);
    const KloSchedule sched = klo_schedules(delta, cfg.n_r, lambda_norm);

    KloInverseConfig klo_cfg;
    klo_cfg.alpha = sched.alpha;
    klo_cfg.sigma_kr = sched.sigma_kr;
    klo_cfg.n_r = cfg.n_r;
    klo_cfg.x_min = cfg.x_min;
    klo_cfg.bounds = cfg.bounds;
    klo_cfg.central_diff = cfg.central_diff;
    const KloReconstruction klo_rec = reconstruct_klo_kernel(kernel_d, dtc, klo_cfg, common);

    BoundaryTrace noisy_trace;
    noisy_trace.dt = dtc;
    noisy_trace.kind = TraceKind::KloTrace;
    noisy_trace.samples.resize(kernel_d.size());
    for (std::size_t k = 0; k < kernel_d.size(); ++k)
      noisy_trace.samples[k] = kernel_d[k] / dtc;
    const double smooth_sigma = delta > 0.0 ? sched.sigma_kr : 0.0;
    const BoundaryTrace h_sg = sg_kernel_from_klo(noisy_trace, 1.0, smooth_sigma);

    SgInverseConfig sg_cfg;
    sg_cfg.phi = delta > 0.0 ? cfg.phi_noisy : cfg.phi_noiseless;
    sg_cfg.quadrature = cfg.quadrature;
    sg_cfg.solver = cfg.sg_solver;
    const SgReconstruction sg_rec = reconstruct_sg(h_sg, sg_cfg);

    out.records.push_back(tag(error_report(truth, sg_rec.profile), "sg", delta, i, fam));
    out.records.push_back(tag(error_report(truth, klo_rec.profile), "klo", delta, i, fam));
  }
  return out;
}

RealisationOutput run_realisation_klo_to_sg(const ExperimentConfig& cfg, int i,
                                            const std::vector<double>& common,
                                            const std::vector<double>& step_ref) {
  RealisationOutput out;
  std::string fam;
  const AreaProfile profile = make_profile(cfg, static_cast<std::uint64_t>(i), &fam);
  const AreaProfile truth = resample_profile(profile, common);
  const double dtc = cfg.coarse_dt();

  KloForwardConfig fwd;
  fwd.nx = static_cast<int>(std::lround(cfg.length / (dtc / cfg.fine_ratio))) + 1;
  fwd.eta = cfg.klo_eta;
  fwd.t_final = 2.0 * cfg.length;
  const BoundaryTrace fine = simulate_klo(profile, fwd);
  const BoundaryTrace trace0 = resample_trace(fine, dtc, static_cast<std::size_t>(cfg.n_time));

  std::vector<double> kernel0(trace0.samples.size());
  for (std::size_t k = 0; k < kernel0.size(); ++k) kernel0[k] = dtc * trace0.samples[k];
  const double lambda_norm = operator_norm(kernel0).value;
  const std::uint64_t noise_seed =
      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), kStreamNoise);

  for (double delta : cfg.deltas) {
    const std::vector<double> kernel_d = add_klo_noise(kernel0, delta, noise_seed);
    const KloSchedule sched = klo_schedules(delta, cfg.n_r, lambda_norm);

    KloInverseConfig klo_cfg;
    klo_cfg.alpha = sched.alpha;
    klo_cfg.sigma_kr = sched.sigma_kr;
    klo_cfg.n_r = cfg.n_r;
    klo_cfg.x_min = cfg.x_min;
    klo_cfg.bounds = cfg.bounds;
    klo_cfg.central_diff = cfg.central_diff;
    const KloReconstruction klo_rec = reconstruct_klo_kernel(kernel_d, dtc, klo_cfg, common);

    // Same noisy trace feeds both pipelines: smoothed + differentiated for SG.
    BoundaryTrace noisy_trace;
    noisy_trace.dt = dtc;
    noisy_trace.kind = TraceKind::KloTrace;
    noisy_trace.samples.resize(kernel_d.size());
    for (std::size_t k = 0; k < kernel_d.size(); ++k)
      noisy_trace.samples[k] = kernel_d[k] / dtc;
    const double smooth_sigma = delta > 0.0 ? sched.sigma_kr : 0.0;
    const BoundaryTrace h_sg = sg_kernel_from_klo(noisy_trace, 1.0, smooth_sigma, step_ref);

    SgInverseConfig sg_cfg;
    sg_cfg.phi = delta > 0.0 ? cfg.phi_noisy : cfg.phi_noiseless;
    sg_cfg.quadrature = cfg.quadrature;
    sg_cfg.solver = cfg.sg_solver;
    const SgReconstruction sg_rec = reconstruct_sg(h_sg, sg_cfg);

    out.records.push_back(tag(error_report(truth, sg_rec.profile), "sg", delta, i, fam));
    out.records.push_back(tag(error_report(truth, klo_rec.profile), "klo", delta, i, fam));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> common = cfg.common_grid();
  const std::vector<double> step_ref =
      cfg.transfer == TransferDirection::KloToSg ? klo_step_reference(cfg)
                                                 : std::vector<double>{};

  const std::size_t n = static_cast<std::size_t>(cfg.n_realisations);
  std::vector<RealisationOutput> results(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = cfg.transfer == TransferDirection::SgToKlo
                         ? run_realisation_sg_to_klo(cfg, static_cast<int>(i), common)
                         : run_realisation_klo_to_sg(cfg, static_cast<int>(i), common,
                                                     step_ref);
      } catch (const std::exception& e) {
        results[i].failed = true;
        results[i].failure = e.what();
      }
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), n);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  ExperimentResult res;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i].failed) {
      res.failures.emplace_back(static_cast<int>(i), results[i].failure);
      continue;
    }
    for (auto& r : results[i].records) res.errors.push_back(std::move(r));
  }
  if (res.errors.empty())
    throw NumericalError("run_experiment: every realisation failed" +
                         (res.failures.empty() ? std::string()
                                               : "; first: " + res.failures.front().second));
  res.reports = summarize(res.errors);
  return res;
}

void write_experiment_outputs(const ExperimentResult& res, const ExperimentConfig& cfg,
                              const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  save_errors_csv(res.errors, (dir / "errors.csv").string());
  save_table8_csv(res.reports, (dir / "table8.csv").string());
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("master_seed", std::to_string(cfg.master_seed));
  meta.emplace_back("n_realisations", std::to_string(cfg.n_realisations));
  meta.emplace_back("transfer", cfg.transfer == TransferDirection::SgToKlo ? "sg_to_klo"
                                                                           : "klo_to_sg");
  meta.emplace_back("failures", std::to_string(res.failures.size()));
  save_report_json(res.reports, (dir / "report.json").string(), meta);
}

namespace {

struct ConfigParser {
  std::map<std::string, std::string> values;  // "section.key" -> value

  static std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& cell : csv::split(s, ','))
      if (!cell.empty()) out.push_back(std::stod(cell));
    return out;
  }

  static std::vector<std::string> parse_names(const std::string& s) {
    std::vector<std::string> out;
    for (const auto& cell : csv::split(s, ','))
      if (!cell.empty()) out.push_back(cell);
    return out;
  }

  bool take(const std::string& key, std::string* out) {
    auto it = values.find(key);
    if (it == values.end()) return false;
    *out = it->second;
    values.erase(it);
    return true;
  }

  template <class F>
  void with(const std::string& key, F&& apply) {
    std::string v;
    if (take(key, &v)) apply(v);
  }
};

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("config: cannot open '" + path + "'");

  ConfigParser p;
  std::string line, section;
  while (std::getline(in, line)) {
    const std::string s = csv::trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = csv::trim(s.substr(1, s.size() - 2));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || section.empty())
      throw ParamError("config: malformed line '" + s + "'");
    const std::string key = section + "." + csv::trim(s.substr(0, eq));
    if (!p.values.emplace(key, csv::trim(s.substr(eq + 1))).second)
      throw ParamError("config: duplicate key '" + key + "'");
  }

  ExperimentConfig cfg;
  p.with("experiment.master_seed", [&](const std::string& v) { cfg.master_seed = std::stoull(v); });
  p.with("experiment.n_realisations", [&](const std::string& v) { cfg.n_realisations = std::stoi(v); });
  p.with("experiment.length", [&](const std::string& v) { cfg.length = std::stod(v); });
  p.with("experiment.n_time", [&](const std::string& v) { cfg.n_time = std::stoi(v); });
  p.with("experiment.fine_ratio", [&](const std::string& v) { cfg.fine_ratio = std::stoi(v); });
  p.with("experiment.deltas", [&](const std::string& v) { cfg.deltas = ConfigParser::parse_list(v); });
  p.with("experiment.transfer", [&](const std::string& v) {
    if (v == "sg_to_klo")
      cfg.transfer = TransferDirection::SgToKlo;
    else if (v == "klo_to_sg")
      cfg.transfer = TransferDirection::KloToSg;
    else
      throw ParamError("config: transfer must be sg_to_klo or klo_to_sg");
  });
  p.with("experiment.jobs", [&](const std::string& v) { cfg.jobs = std::stoi(v); });

  p.with("profiles.n_grid", [&](const std::string& v) { cfg.n_grid = std::stoi(v); });
  p.with("profiles.families", [&](const std::string& v) { cfg.families = ConfigParser::parse_names(v); });
  p.with("profiles.weights", [&](const std::string& v) { cfg.weights = ConfigParser::parse_list(v); });
  p.with("profiles.a_min", [&](const std::string& v) { cfg.bounds.lo = std::stod(v); });
  p.with("profiles.a_max", [&](const std::string& v) { cfg.bounds.hi = std::stod(v); });
  p.with("profiles.se_lengthscale", [&](const std::string& v) { cfg.se_spec.lengthscale = std::stod(v); });
  p.with("profiles.se_sigma", [&](const std::string& v) { cfg.se_spec.sigma = std::stod(v); });
  p.with("profiles.matern_lengthscale", [&](const std::string& v) { cfg.matern_spec.lengthscale = std::stod(v); });
  p.with("profiles.matern_sigma", [&](const std::string& v) { cfg.matern_spec.sigma = std::stod(v); });
  p.with("profiles.matern_nu", [&](const std::string& v) { cfg.matern_spec.nu = std::stod(v); });
  p.with("profiles.hybrid_smooth_lengthscale", [&](const std::string& v) { cfg.hybrid_spec.hybrid.smooth_lengthscale = std::stod(v); });
  p.with("profiles.hybrid_smooth_sigma", [&](const std::string& v) { cfg.hybrid_spec.hybrid.smooth_sigma = std::stod(v); });
  p.with("profiles.hybrid_rough_lengthscale", [&](const std::string& v) { cfg.hybrid_spec.hybrid.rough_lengthscale = std::stod(v); });
  p.with("profiles.hybrid_rough_sigma", [&](const std::string& v) { cfg.hybrid_spec.hybrid.rough_sigma = std::stod(v); });
  p.with("profiles.hybrid_rough_nu", [&](const std::string& v) { cfg.hybrid_spec.hybrid.rough_nu = std::stod(v); });
  p.with("profiles.hybrid_n_rect", [&](const std::string& v) { cfg.hybrid_spec.hybrid.n_rect = std::stoi(v); });
  p.with("profiles.hybrid_width_min", [&](const std::string& v) { cfg.hybrid_spec.hybrid.width_min = std::stod(v); });
  p.with("profiles.hybrid_width_max", [&](const std::string& v) { cfg.hybrid_spec.hybrid.width_max = std::stod(v); });
  p.with("profiles.hybrid_height_min", [&](const std::string& v) { cfg.hybrid_spec.hybrid.height_min = std::stod(v); });
  p.with("profiles.hybrid_height_max", [&](const std::string& v) { cfg.hybrid_spec.hybrid.height_max = std::stod(v); });

  p.with("forward.klo_eta", [&](const std::string& v) { cfg.klo_eta = std::stod(v); });
  p.with("forward.sg_impulse_width", [&](const std::string& v) { cfg.sg_impulse_width = std::stoi(v); });

  p.with("sg_inverse.phi_noiseless", [&](const std::string& v) { cfg.phi_noiseless = std::stod(v); });
  p.with("sg_inverse.phi_noisy", [&](const std::string& v) { cfg.phi_noisy = std::stod(v); });
  p.with("sg_inverse.quadrature", [&](const std::string& v) {
    if (v == "trapezoid")
      cfg.quadrature = SgQuadrature::Trapezoid;
    else if (v == "gregory4")
      cfg.quadrature = SgQuadrature::Gregory4;
    else
      throw ParamError("config: quadrature must be trapezoid or gregory4");
  });
  p.with("sg_inverse.solver", [&](const std::string& v) {
    if (v == "levinson_woodbury")
      cfg.sg_solver = SgSolver::LevinsonWoodbury;
    else if (v == "dense")
      cfg.sg_solver = SgSolver::Dense;
    else
      throw ParamError("config: solver must be levinson_woodbury or dense");
  });

  p.with("klo_inverse.n_r", [&](const std::string& v) { cfg.n_r = std::stoul(v); });
  p.with("klo_inverse.x_min", [&](const std::string& v) { cfg.x_min = std::stod(v); });
  p.with("klo_inverse.central_diff", [&](const std::string& v) {
    cfg.central_diff = v == "true" || v == "1";
  });

  if (!p.values.empty())
    throw ParamError("config: unknown key '" + p.values.begin()->first + "'");
  cfg.validate();
  return cfg;
}

}  // namespace webrec
