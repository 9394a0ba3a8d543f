#include "webrec/cli.hpp"

#include "webrec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "webrec/errors.hpp"
#include "webrec/forward_klo.hpp"
#include "webrec/forward_sg.hpp"
#include "webrec/grid.hpp"
#include "webrec/harness.hpp"
#include "webrec/klo_invert.hpp"
#include "webrec/noise.hpp"
#include "webrec/rng.hpp"
#include "webrec/sg_invert.hpp"
#include "webrec/transfer.hpp"

namespace webrec {

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("WEBREC_OUT")) return env;
  return ".";
}

struct GenProfilesOpts {
  std::string kind = "se";
  int count = 1;
  std::uint64_t seed = 1;
  std::string out = default_out_dir();
  int n_grid = 400;
  double length = 2.0;
  double lengthscale = 0.12;
  double sigma = 0.20;
  double nu = 1.5;
  double a_min = 0.5, a_max = 2.0;
};

int cmd_gen_profiles(const GenProfilesOpts& o) {
  KernelSpec spec;
  if (o.kind == "se")
    spec = KernelSpec::se(o.lengthscale, o.sigma);
  else if (o.kind == "matern")
    spec = KernelSpec::matern(o.lengthscale, o.sigma, o.nu);
  else if (o.kind == "hybrid")
    spec = KernelSpec::hybrid_default();
  else if (o.kind != "uniform")
    throw ParamError("gen-profiles: kind must be se, matern, hybrid or uniform");

  std::filesystem::create_directories(o.out);
  for (int i = 0; i < o.count; ++i) {
    std::vector<double> grid = linspace(0.0, o.length, static_cast<std::size_t>(o.n_grid));
    AreaProfile p =
        o.kind == "uniform"
            ? uniform_profile(std::move(grid))
            : sample_area(spec, std::move(grid),
                          derive_seed(o.seed, static_cast<std::uint64_t>(i), 1),
                          Bounds{o.a_min, o.a_max});
    char name[64];
    std::snprintf(name, sizeof(name), "profile_%03d.csv", i);
    save_profile_csv(p, (std::filesystem::path(o.out) / name).string());
  }
  std::printf("wrote %d profile(s) to %s\n", o.count, o.out.c_str());
  return 0;
}

struct ForwardOpts {
  std::string solver = "sg";
  std::string profile;
  std::string out;
  int nx = 0;  // 0: pick from the profile grid
  double t_final = 0.0;
  double eta = 0.4;
  int impulse_width = 1;
  bool keep_impulse = false;
  bool no_absorb = false;
};

int cmd_forward(const ForwardOpts& o) {
  const AreaProfile p = load_profile_csv(o.profile);
  const double t_final = o.t_final > 0.0 ? o.t_final : 2.0 * p.length();
  BoundaryTrace t;
  if (o.solver == "sg") {
    SgForwardConfig cfg;
    cfg.nx = o.nx > 0 ? o.nx : static_cast<int>(p.x.size() - 1) * 2;
    cfg.t_final = t_final;
    cfg.impulse_width = o.impulse_width;
    cfg.absorbing_right = !o.no_absorb;
    cfg.remove_impulse = !o.keep_impulse;
    t = simulate_sg(p, cfg);
  } else if (o.solver == "klo") {
    KloForwardConfig cfg;
    cfg.nx = o.nx > 0 ? o.nx : static_cast<int>(p.x.size()) * 2;
    cfg.eta = o.eta;
    cfg.t_final = t_final;
    t = simulate_klo(p, cfg);
  } else {
    throw ParamError("forward: solver must be sg or klo");
  }
  save_trace_csv(t, o.out);
  std::printf("wrote %zu samples (dt = %g) to %s\n", t.samples.size(), t.dt, o.out.c_str());
  return 0;
}

struct InvertOpts {
  std::string method = "sg";
  std::string trace;
  std::string out;
  std::string diag;
  double phi = -1.0;  // <0: pick by delta
  std::string quadrature = "gregory4";
  std::string solver = "levinson_woodbury";
  double delta = 0.0;
  double alpha = 0.0;  // 0: schedule
  double sigma_kr = -1.0;
  double sigma_ax = 0.0;
  std::size_t n_r = 150;
  double x_min = 0.0;
  int x_count = 0;  // 0: T0 / dt + 1
};

int cmd_invert(const InvertOpts& o) {
  const BoundaryTrace t = load_trace_csv(o.trace);
  if (o.method == "sg") {
    SgInverseConfig cfg;
    cfg.phi = o.phi >= 0.0 ? o.phi : (o.delta > 0.0 ? 1e-6 : 1e-10);
    cfg.quadrature = o.quadrature == "trapezoid" ? SgQuadrature::Trapezoid
                                                 : SgQuadrature::Gregory4;
    cfg.solver = o.solver == "dense" ? SgSolver::Dense : SgSolver::LevinsonWoodbury;
    const SgReconstruction rec = reconstruct_sg(t, cfg);
    save_reconstruction_csv(rec.profile, o.out);
    if (!o.diag.empty()) {
      csv::Writer w(o.diag);
      w.header("x,f_end");
      for (std::size_t j = 0; j < rec.profile.x.size(); ++j)
        w.row({csv::format_double(rec.profile.x[j]), csv::format_double(rec.f_end[j])});
    }
    if (rec.any_dense_fallback)
      std::fprintf(stderr, "warning: Levinson breakdown, dense fallback used\n");
    std::printf("wrote %zu depths to %s\n", rec.profile.x.size(), o.out.c_str());
    return 0;
  }
  if (o.method != "klo") throw ParamError("invert: method must be sg or klo");

  std::vector<double> h_hat(t.samples.size());
  for (std::size_t i = 0; i < h_hat.size(); ++i) h_hat[i] = t.dt * t.samples[i];
  KloInverseConfig cfg;
  cfg.n_r = o.n_r;
  cfg.x_min = o.x_min;
  const KloSchedule sched =
      klo_schedules(o.delta, o.n_r, o.delta > 0.0 ? operator_norm(h_hat).value : 1.0);
  cfg.alpha = o.alpha > 0.0 ? o.alpha : sched.alpha;
  cfg.sigma_kr = o.sigma_kr >= 0.0 ? o.sigma_kr : sched.sigma_kr;
  cfg.sigma_ax = o.sigma_ax;

  const double t0 = 0.5 * t.t_final();
  const std::size_t n_x = o.x_count > 0 ? static_cast<std::size_t>(o.x_count)
                                        : static_cast<std::size_t>(std::floor(t0 / t.dt)) + 1;
  const std::vector<double> target = linspace(0.0, t0, n_x);
  const KloReconstruction rec = reconstruct_klo(t, cfg, target);
  save_reconstruction_csv(rec.profile, o.out);
  if (!o.diag.empty()) save_klo_diagnostics_csv(rec, o.diag);
  std::printf("wrote %zu points to %s\n", rec.profile.x.size(), o.out.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Cross-validated duct-area reconstruction from inlet pressure data"};
  app.require_subcommand(1);

  GenProfilesOpts gp;
  CLI::App* gen = app.add_subcommand("gen-profiles", "Sample random area profiles");
  gen->add_option("--kind", gp.kind, "se | matern | hybrid | uniform");
  gen->add_option("--count", gp.count, "number of profiles");
  gen->add_option("--seed", gp.seed, "master seed");
  gen->add_option("--out", gp.out, "output directory");
  gen->add_option("--n-grid", gp.n_grid, "grid points");
  gen->add_option("--length", gp.length, "domain length");
  gen->add_option("--lengthscale", gp.lengthscale, "kernel lengthscale");
  gen->add_option("--sigma", gp.sigma, "kernel amplitude");
  gen->add_option("--nu", gp.nu, "Matern smoothness (0.5, 1.5, 2.5)");
  gen->add_option("--a-min", gp.a_min, "lower area bound");
  gen->add_option("--a-max", gp.a_max, "upper area bound");

  ForwardOpts fo;
  CLI::App* fwd = app.add_subcommand("forward", "Simulate an inlet trace");
  fwd->add_option("--solver", fo.solver, "sg | klo");
  fwd->add_option("--profile", fo.profile, "profile CSV")->required();
  fwd->add_option("--out", fo.out, "trace CSV")->required();
  fwd->add_option("--nx", fo.nx, "spatial resolution");
  fwd->add_option("--t-final", fo.t_final, "record length (default 2*length)");
  fwd->add_option("--eta", fo.eta, "KLO Courant number");
  fwd->add_option("--impulse-width", fo.impulse_width, "SG impulse spread (steps)");
  fwd->add_flag("--keep-impulse", fo.keep_impulse, "keep the direct impulse in the SG trace");
  fwd->add_flag("--no-absorb", fo.no_absorb, "rigid right end instead of absorbing (SG)");

  InvertOpts io;
  CLI::App* inv = app.add_subcommand("invert", "Reconstruct the area from a trace");
  inv->add_option("--method", io.method, "sg | klo");
  inv->add_option("--trace", io.trace, "trace CSV")->required();
  inv->add_option("--out", io.out, "reconstruction CSV")->required();
  inv->add_option("--diag", io.diag, "diagnostics CSV (KLO: r,s_alpha,k; SG: x,f_end)");
  inv->add_option("--phi", io.phi, "SG regularisation");
  inv->add_option("--quadrature", io.quadrature, "trapezoid | gregory4");
  inv->add_option("--solver", io.solver, "levinson_woodbury | dense");
  inv->add_option("--delta", io.delta, "noise level driving the schedules");
  inv->add_option("--alpha", io.alpha, "KLO Tikhonov parameter (overrides schedule)");
  inv->add_option("--sigma-kr", io.sigma_kr, "KLO smoothing width (points)");
  inv->add_option("--sigma-ax", io.sigma_ax, "KLO post-smoothing on the x grid (points)");
  inv->add_option("--n-r", io.n_r, "KLO radii count");
  inv->add_option("--x-min", io.x_min, "inlet regularisation cutoff");
  inv->add_option("--x-count", io.x_count, "output grid points");

  std::string cmp_config, cmp_out = default_out_dir();
  int cmp_jobs = 0;
  CLI::App* cmp = app.add_subcommand("compare", "Paired Monte Carlo comparison");
  cmp->add_option("--config", cmp_config, "experiment config file")->required();
  cmp->add_option("--out", cmp_out, "output directory");
  cmp->add_option("--jobs", cmp_jobs, "worker threads (overrides config)");

  std::string st_errors, st_out = default_out_dir();
  CLI::App* st = app.add_subcommand("stats", "Summarise an errors.csv");
  st->add_option("--errors", st_errors, "errors CSV")->required();
  st->add_option("--out", st_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_profiles(gp);
    if (fwd->parsed()) return cmd_forward(fo);
    if (inv->parsed()) return cmd_invert(io);
    if (cmp->parsed()) {
      ExperimentConfig cfg = parse_config_file(cmp_config);
      if (cmp_jobs > 0) cfg.jobs = cmp_jobs;
      const ExperimentResult res = run_experiment(cfg);
      write_experiment_outputs(res, cfg, cmp_out);
      for (const auto& [i, why] : res.failures)
        std::fprintf(stderr, "realisation %d failed: %s\n", i, why.c_str());
      std::printf("wrote errors.csv, report.json, table8.csv to %s (%zu failures)\n",
                  cmp_out.c_str(), res.failures.size());
      return 0;
    }
    if (st->parsed()) {
      const std::vector<ErrorRecord> errors = load_errors_csv(st_errors);
      const std::vector<StatReport> reports = summarize(errors);
      std::filesystem::create_directories(st_out);
      const std::filesystem::path dir(st_out);
      save_table8_csv(reports, (dir / "table8.csv").string());
      save_report_json(reports, (dir / "report.json").string());
      std::printf("wrote report.json, table8.csv to %s\n", st_out.c_str());
      return 0;
    }
  } catch (const ParamError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const RangeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace webrec
