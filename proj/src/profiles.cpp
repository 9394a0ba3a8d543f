#include "webrec/profiles.hpp"

#include <cmath>
#include <string>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"
#include "webrec/grid.hpp"
#include "webrec/linalg.hpp"
#include "webrec/rng.hpp"

namespace webrec {

namespace {

constexpr double kJitter = 1e-10;

bool is_closed_form_nu(double nu) {
  return std::abs(nu - 0.5) < 1e-9 || std::abs(nu - 1.5) < 1e-9 || std::abs(nu - 2.5) < 1e-9;
}

double se_eval(double sigma, double ell, double r) {
  return sigma * sigma * std::exp(-r * r / (2.0 * ell * ell));
}

double matern_eval(double sigma, double ell, double nu, double r) {
  const double s2 = sigma * sigma;
  if (std::abs(nu - 0.5) < 1e-9) return s2 * std::exp(-r / ell);
  if (std::abs(nu - 1.5) < 1e-9) {
    const double u = std::sqrt(3.0) * r / ell;
    return s2 * (1.0 + u) * std::exp(-u);
  }
  const double u = std::sqrt(5.0) * r / ell;
  return s2 * (1.0 + u + 5.0 * r * r / (3.0 * ell * ell)) * std::exp(-u);
}

}  // namespace

KernelSpec KernelSpec::se(double lengthscale, double sigma) {
  KernelSpec s;
  s.kind = KernelKind::Se;
  s.lengthscale = lengthscale;
  s.sigma = sigma;
  return s;
}

KernelSpec KernelSpec::matern(double lengthscale, double sigma, double nu) {
  KernelSpec s;
  s.kind = KernelKind::Matern;
  s.lengthscale = lengthscale;
  s.sigma = sigma;
  s.nu = nu;
  return s;
}

KernelSpec KernelSpec::hybrid_default() {
  KernelSpec s;
  s.kind = KernelKind::Hybrid;
  return s;
}

void KernelSpec::validate() const {
  if (kind == KernelKind::Hybrid) {
    const auto& h = hybrid;
    if (!(h.smooth_lengthscale > 0.0) || !(h.rough_lengthscale > 0.0))
      throw ParamError("KernelSpec: hybrid lengthscales must be positive");
    if (h.smooth_sigma < 0.0 || h.rough_sigma < 0.0)
      throw ParamError("KernelSpec: hybrid sigmas must be nonnegative");
    if (!is_closed_form_nu(h.rough_nu))
      throw ParamError("KernelSpec: rough_nu must be one of 0.5, 1.5, 2.5");
    if (h.n_rect < 0) throw ParamError("KernelSpec: n_rect must be nonnegative");
    if (!(h.width_min > 0.0) || h.width_min > h.width_max)
      throw ParamError("KernelSpec: need 0 < width_min <= width_max");
    if (h.height_min > h.height_max)
      throw ParamError("KernelSpec: need height_min <= height_max");
    return;
  }
  if (!(lengthscale > 0.0)) throw ParamError("KernelSpec: lengthscale must be positive");
  if (sigma < 0.0) throw ParamError("KernelSpec: sigma must be nonnegative");
  if (kind == KernelKind::Matern && !is_closed_form_nu(nu))
    throw ParamError("KernelSpec: nu must be one of 0.5, 1.5, 2.5");
}

std::string KernelSpec::kind_name() const {
  switch (kind) {
    case KernelKind::Se: return "se";
    case KernelKind::Matern: return "matern";
    case KernelKind::Hybrid: return "hybrid";
  }
  return "se";
}

double kernel_eval(const KernelSpec& spec, double r) {
  spec.validate();
  if (r < 0.0) throw ParamError("kernel_eval: r must be nonnegative");
  switch (spec.kind) {
    case KernelKind::Se:
      return se_eval(spec.sigma, spec.lengthscale, r);
    case KernelKind::Matern:
      return matern_eval(spec.sigma, spec.lengthscale, spec.nu, r);
    case KernelKind::Hybrid:
      return se_eval(spec.hybrid.smooth_sigma, spec.hybrid.smooth_lengthscale, r) +
             matern_eval(spec.hybrid.rough_sigma, spec.hybrid.rough_lengthscale,
                         spec.hybrid.rough_nu, r);
  }
  return 0.0;
}

void AreaProfile::validate() const {
  if (x.size() < 3 || x.size() != a.size())
    throw ParamError("AreaProfile: need matching grids with at least 3 points");
  if (std::abs(x.front()) > 1e-12 * x.back())
    throw ParamError("AreaProfile: grid must start at 0");
  if (!is_uniform_increasing(x))
    throw ParamError("AreaProfile: grid must be uniform and increasing");
  for (double v : a)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParamError("AreaProfile: areas must be strictly positive and finite");
}

void clip_to_bounds(std::span<double> a, Bounds b) {
  for (double& v : a) v = std::min(b.hi, std::max(b.lo, v));
}

std::vector<double> sample_log_field(const KernelSpec& spec, std::span<const double> grid,
                                     std::uint64_t seed) {
  spec.validate();
  if (grid.size() < 3 || !is_uniform_increasing(grid))
    throw ParamError("sample_log_field: grid must be uniform increasing with >= 3 points");
  const std::size_t n = grid.size();
  RngStream rng(seed);
  std::vector<double> g(n, 0.0);

  if (kernel_eval(spec, 0.0) > 0.0) {
    auto build = [&](double jitter) {
      Mat k(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          const double v = kernel_eval(spec, std::abs(grid[i] - grid[j]));
          k(i, j) = v;
          k(j, i) = v;
        }
      for (std::size_t i = 0; i < n; ++i) k(i, i) += jitter;
      return k;
    };
    Mat l = build(kJitter);
    try {
      cholesky_inplace(l);
    } catch (const NumericalError&) {
      l = build(kJitter * 100.0);
      try {
        cholesky_inplace(l);
      } catch (const NumericalError&) {
        throw NumericalError("sample_log_field: covariance Cholesky failed after jitter retry");
      }
    }
    std::vector<double> z(n);
    for (double& v : z) v = rng.normal();
    g = lower_tri_matvec(l, z);
  }

  if (spec.kind == KernelKind::Hybrid) {
    const auto& h = spec.hybrid;
    const double ell = grid.back();
    for (int m = 0; m < h.n_rect; ++m) {
      const double w = rng.uniform(h.width_min, h.width_max);
      const double hh = rng.uniform(h.height_min, h.height_max);
      const double c = rng.uniform(w / 2.0, ell - w / 2.0);  // bump stays inside the domain
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(grid[i] - c) <= w / 2.0) g[i] += hh;
    }
  }
  return g;
}

AreaProfile sample_area(const KernelSpec& spec, std::vector<double> grid, std::uint64_t seed,
                        Bounds bounds) {
  if (!(bounds.lo > 0.0) || bounds.lo > 1.0 || bounds.hi < 1.0)
    throw ParamError("sample_area: bounds must satisfy 0 < A_min <= 1 <= A_max");
  const std::vector<double> g = sample_log_field(spec, grid, seed);

  AreaProfile p;
  p.x = std::move(grid);
  p.a.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p.a[i] = std::exp(g[i]);
  const double a0 = p.a[0];
  for (double& v : p.a) v /= a0;  // A(0) = 1 exactly
  clip_to_bounds(p.a, bounds);
  p.seed = seed;
  p.generator = spec.kind_name();
  auto put = [&](const std::string& k, double v) {
    p.params.emplace_back(k, csv::format_double(v));
  };
  if (spec.kind == KernelKind::Hybrid) {
    const auto& h = spec.hybrid;
    put("smooth_lengthscale", h.smooth_lengthscale);
    put("smooth_sigma", h.smooth_sigma);
    put("rough_lengthscale", h.rough_lengthscale);
    put("rough_sigma", h.rough_sigma);
    put("rough_nu", h.rough_nu);
    put("n_rect", h.n_rect);
    put("width_min", h.width_min);
    put("width_max", h.width_max);
    put("height_min", h.height_min);
    put("height_max", h.height_max);
  } else {
    put("lengthscale", spec.lengthscale);
    put("sigma", spec.sigma);
    if (spec.kind == KernelKind::Matern) put("nu", spec.nu);
  }
  p.validate();
  return p;
}

AreaProfile uniform_profile(std::vector<double> grid, double value) {
  AreaProfile p;
  p.a.assign(grid.size(), value);
  p.x = std::move(grid);
  p.generator = "uniform";
  p.validate();
  return p;
}

void save_profile_csv(const AreaProfile& p, const std::string& path) {
  csv::Writer w(path);
  w.comment("kind", p.generator);
  w.comment("seed", std::to_string(p.seed));
  w.comment("length", csv::format_double(p.length()));
  for (const auto& [k, v] : p.params) w.comment(k, v);
  w.header("x,A");
  for (std::size_t i = 0; i < p.x.size(); ++i)
    w.row({csv::format_double(p.x[i]), csv::format_double(p.a[i])});
}

AreaProfile load_profile_csv(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  AreaProfile p;
  p.x = t.numeric_column("x");
  p.a = t.numeric_column("A");
  p.generator = t.has_meta("kind") ? t.meta_value("kind") : "external";
  p.seed = t.has_meta("seed") ? std::stoull(t.meta_value("seed")) : 0;
  for (const auto& [k, v] : t.meta)
    if (k != "kind" && k != "seed" && k != "length") p.params.emplace_back(k, v);
  p.validate();
  return p;
}

}  // namespace webrec
