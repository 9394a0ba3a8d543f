#include "webrec/klo_invert.hpp"

#include <algorithm>
#include <cmath>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"
#include "webrec/grid.hpp"
#include "webrec/simd/kernels.hpp"
#include "webrec/toeplitz.hpp"

namespace webrec {

void KloInverseConfig::validate() const {
  if (!(alpha > 0.0)) throw ParamError("KloInverseConfig: alpha must be positive");
  if (sigma_kr < 0.0 || sigma_ax < 0.0)
    throw ParamError("KloInverseConfig: smoothing widths must be nonnegative");
  if (n_r < 8) throw ParamError("KloInverseConfig: r grid needs at least 8 points");
  if (x_min < 0.0) throw ParamError("KloInverseConfig: x_min must be nonnegative");
  if (!(bounds.lo > 0.0) || bounds.lo > bounds.hi)
    throw ParamError("KloInverseConfig: bad area bounds");
}

std::vector<double> time_reversal(std::span<const double> v) {
  return {v.rbegin(), v.rend()};
}

std::vector<double> integrate_J(std::span<const double> v, double dt) {
  const std::size_t n = v.size();
  if (n < 2) throw ParamError("integrate_J: need at least 2 samples");
  const std::size_t nn = n - 1;  // N
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; 2 * i < nn; ++i)
    out[i] = 0.5 * dt * (prefix[nn - i + 1] - prefix[i]);
  return out;
}

Mat convolution_matrix(std::span<const double> h_hat) { return toeplitz_lower(h_hat); }

std::vector<double> convolution_apply(std::span<const double> h_hat,
                                      std::span<const double> v) {
  return causal_conv(h_hat, v);
}

Mat connecting_operator(std::span<const double> h_hat, double dt) {
  const std::size_t n = h_hat.size();
  if (n < 2) throw ParamError("connecting_operator: need at least 2 samples");
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n) - 1;  // N

  // Kernel prefix sums; c(s) = sum_{u<=s} h_hat_u, zero for s < 0.
  std::vector<double> pre(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + h_hat[i];
  auto c = [&](std::ptrdiff_t s) { return s < 0 ? 0.0 : pre[std::min<std::ptrdiff_t>(s, nn) + 1]; };

  Mat k(n, n, 0.0);
  const double half_dt = 0.5 * dt;
  for (std::ptrdiff_t i = 0; i <= nn; ++i) {
    double* row = k.row(static_cast<std::size_t>(i));
    // (R Lambda R J)_{ij} = (dt/2) c(tau_max(j) - i)
    for (std::ptrdiff_t j = 0; j <= nn; ++j) {
      std::ptrdiff_t tmax = std::min(j, nn - j);
      if ((nn % 2) == 0 && 2 * j == nn) --tmax;  // tau = N/2 violates N - tau > tau
      if (tmax >= i) row[j] = half_dt * c(tmax - i);
    }
    // minus (J Lambda)_{ij}
    if (2 * i < nn) {
      for (std::ptrdiff_t j = 0; j <= nn - i; ++j)
        row[j] -= half_dt * (c(nn - i - j) - c(std::max(i, j) - j - 1));
    }
  }
  return k;
}

std::vector<double> connecting_apply(std::span<const double> h_hat, double dt,
                                     std::span<const double> v) {
  const std::vector<double> jv = integrate_J(v, dt);
  std::vector<double> rjv = time_reversal(jv);
  std::vector<double> lrjv = causal_conv(h_hat, rjv);
  std::vector<double> first = time_reversal(lrjv);
  const std::vector<double> lv = causal_conv(h_hat, v);
  const std::vector<double> jlv = integrate_J(lv, dt);
  for (std::size_t i = 0; i < first.size(); ++i) first[i] -= jlv[i];
  return first;
}

std::vector<double> b1_vector(std::size_t n, double dt) {
  const double t0 = 0.5 * dt * static_cast<double>(n - 1);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    if (t <= t0 + 1e-12 * t0) b[i] = t0 - t;
  }
  return b;
}

KloWindow window_solve(const Mat& k_op, double r, double alpha, double dt) {
  const std::size_t n = k_op.rows();
  const double t0 = 0.5 * dt * static_cast<double>(n - 1);
  if (!(r > 0.0) || r > t0 * (1.0 + 1e-9))
    throw ParamError("window_solve: r must lie in (0, T0]");
  if (!(alpha > 0.0)) throw ParamError("window_solve: alpha must be positive");

  KloWindow w;
  w.i_hi = static_cast<std::size_t>(std::floor(t0 / dt + 1e-9));
  const double lo = (t0 - r) / dt;
  w.i_lo = lo <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(lo - 1e-9));
  if (w.i_lo > w.i_hi) w.i_lo = w.i_hi;
  const std::size_t m = w.i_hi - w.i_lo + 1;

  Mat sys(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* src = k_op.row(w.i_lo + i) + w.i_lo;
    std::copy(src, src + m, sys.row(i));
    sys(i, i) += alpha;
  }
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i)
    rhs[i] = t0 - dt * static_cast<double>(w.i_lo + i);

  std::vector<int> piv;
  try {
    lu_factor(sys, piv);
  } catch (const NumericalError& e) {
    throw NumericalError("window_solve: system of size " + std::to_string(m) +
                         " at r = " + std::to_string(r) + " failed: " + e.what());
  }
  w.f = rhs;
  lu_solve_inplace(sys, piv, w.f.data());
  w.s_alpha = dt * simd::dot(w.f.data(), rhs.data(), m);
  return w;
}

std::vector<double> gaussian_smooth(std::span<const double> seq, double sigma_pts) {
  if (sigma_pts < 0.0) throw ParamError("gaussian_smooth: sigma must be nonnegative");
  const std::size_t n = seq.size();
  if (sigma_pts == 0.0 || n == 0) return {seq.begin(), seq.end()};

  const std::ptrdiff_t half = std::max<std::ptrdiff_t>(
      1, static_cast<std::ptrdiff_t>(std::floor(4.0 * sigma_pts)));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (std::ptrdiff_t m = -half; m <= half; ++m) {
    const double v = std::exp(-0.5 * static_cast<double>(m * m) / (sigma_pts * sigma_pts));
    w[static_cast<std::size_t>(m + half)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;

  auto reflect = [&](std::ptrdiff_t idx) {
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
    while (idx < 0 || idx >= nn) {
      if (idx < 0) idx = -idx - 1;
      if (idx >= nn) idx = 2 * nn - 1 - idx;
    }
    return static_cast<std::size_t>(idx);
  };

  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::ptrdiff_t m = -half; m <= half; ++m)
      acc += w[static_cast<std::size_t>(m + half)] *
             seq[reflect(static_cast<std::ptrdiff_t>(j) + m)];
    out[j] = acc;
  }
  return out;
}

KloReconstruction reconstruct_klo_kernel(std::span<const double> h_hat, double dt,
                                         const KloInverseConfig& cfg,
                                         std::span<const double> target_x) {
  cfg.validate();
  if (h_hat.size() < 16) throw ParamError("reconstruct_klo: record too short");
  if (target_x.size() < 2) throw ParamError("reconstruct_klo: need a target grid");

  const std::size_t n = h_hat.size();
  const double t0 = 0.5 * dt * static_cast<double>(n - 1);
  const Mat k_op = connecting_operator(h_hat, dt);

  KloReconstruction rec;
  const std::size_t n_r = cfg.n_r;
  const double dr = t0 / static_cast<double>(n_r);
  rec.r.resize(n_r);
  rec.s_alpha.resize(n_r);
  // Radii that quantise to the same index window share one solve (exact reuse;
  // matters when the r grid is denser than the time grid).
  std::size_t prev_lo = static_cast<std::size_t>(-1);
  double prev_s = 0.0;
  for (std::size_t j = 0; j < n_r; ++j) {
    rec.r[j] = dr * static_cast<double>(j + 1);
    const double lo = (t0 - rec.r[j]) / dt;
    const std::size_t i_lo =
        lo <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(lo - 1e-9));
    if (i_lo == prev_lo) {
      rec.s_alpha[j] = prev_s;
      continue;
    }
    rec.s_alpha[j] = window_solve(k_op, rec.r[j], cfg.alpha, dt).s_alpha;
    prev_lo = i_lo;
    prev_s = rec.s_alpha[j];
  }

  rec.k_raw.resize(n_r);
  const auto& s = rec.s_alpha;
  if (cfg.central_diff) {
    rec.k_raw[0] = (s[1] - s[0]) / dr;
    for (std::size_t j = 1; j + 1 < n_r; ++j) rec.k_raw[j] = (s[j + 1] - s[j - 1]) / (2.0 * dr);
    rec.k_raw[n_r - 1] = (s[n_r - 1] - s[n_r - 2]) / dr;
  } else {
    // forward differences with the last value duplicated
    for (std::size_t j = 0; j + 1 < n_r; ++j) rec.k_raw[j] = (s[j + 1] - s[j]) / dr;
    rec.k_raw[n_r - 1] = rec.k_raw[n_r - 2];
  }
  rec.k_smooth = gaussian_smooth(rec.k_raw, cfg.sigma_kr);

  std::vector<double> a_r = rec.k_smooth;  // x_j = r_j, A_j = k_j at unit wave speed
  clip_to_bounds(a_r, cfg.bounds);

  rec.profile.x.assign(target_x.begin(), target_x.end());
  rec.profile.a.resize(target_x.size());
  for (std::size_t i = 0; i < target_x.size(); ++i)
    rec.profile.a[i] = lerp_clamped(rec.r, a_r, target_x[i]);
  if (cfg.sigma_ax > 0.0) {
    rec.profile.a = gaussian_smooth(rec.profile.a, cfg.sigma_ax);
    clip_to_bounds(rec.profile.a, cfg.bounds);
  }
  if (cfg.x_min > 0.0) {
    for (std::size_t i = 0; i < target_x.size() && target_x[i] <= cfg.x_min; ++i)
      rec.profile.a[i] = 1.0;
  }
  rec.profile.generator = "klo-reconstruction";
  rec.profile.validate();
  return rec;
}

KloReconstruction reconstruct_klo(const BoundaryTrace& trace, const KloInverseConfig& cfg,
                                  std::span<const double> target_x) {
  trace.validate();
  if (trace.kind != TraceKind::KloTrace)
    throw ParamError("reconstruct_klo: trace kind must be KloTrace");
  std::vector<double> h_hat(trace.samples.size());
  for (std::size_t i = 0; i < h_hat.size(); ++i) h_hat[i] = trace.dt * trace.samples[i];
  return reconstruct_klo_kernel(h_hat, trace.dt, cfg, target_x);
}

void save_klo_diagnostics_csv(const KloReconstruction& rec, const std::string& path) {
  csv::Writer w(path);
  w.header("r,s_alpha,k_raw,k_smooth");
  for (std::size_t j = 0; j < rec.r.size(); ++j)
    w.row({csv::format_double(rec.r[j]), csv::format_double(rec.s_alpha[j]),
           csv::format_double(rec.k_raw[j]), csv::format_double(rec.k_smooth[j])});
}

}  // namespace webrec
