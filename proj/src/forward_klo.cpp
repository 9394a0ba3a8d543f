#include "webrec/forward_klo.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "webrec/errors.hpp"
#include "webrec/grid.hpp"

namespace webrec {

void KloForwardConfig::validate(double length) const {
  if (nx < 8) throw ParamError("KloForwardConfig: nx must be at least 8");
  if (!(eta > 0.0) || eta >= 1.0)
    throw ParamError("KloForwardConfig: Courant number eta must be in (0, 1)");
  if (t_final < 2.0 * length)
    throw ParamError("KloForwardConfig: t_final must cover 2*length");
}

BoundaryTrace simulate_klo(const AreaProfile& profile, const KloForwardConfig& cfg) {
  profile.validate();
  cfg.validate(profile.length());

  const std::size_t nx = static_cast<std::size_t>(cfg.nx);
  const double dx = profile.length() / static_cast<double>(nx - 1);
  const double dt = cfg.eta * dx;
  const std::size_t n_t = static_cast<std::size_t>(std::floor(cfg.t_final / dt + 1e-9)) + 1;

  std::vector<double> a(nx), half_a(nx - 1);
  for (std::size_t i = 0; i < nx; ++i)
    a[i] = lerp_clamped(profile.x, profile.a, dx * static_cast<double>(i));
  for (std::size_t i = 0; i + 1 < nx; ++i) half_a[i] = 0.5 * (a[i] + a[i + 1]);

  std::vector<double> h_prev(nx, 0.0), h_cur(nx, 0.0), h_next(nx, 0.0), flux(nx - 1);
  const double dt2 = dt * dt;
  const double lam = cfg.eta;
  const double absorb = (lam - 1.0) / (lam + 1.0);

  BoundaryTrace out;
  out.dt = dt;
  out.kind = TraceKind::KloTrace;
  out.samples.assign(n_t, 0.0);

  for (std::size_t n = 0; n + 1 < n_t; ++n) {
    for (std::size_t i = 0; i + 1 < nx; ++i)
      flux[i] = half_a[i] * (h_cur[i + 1] - h_cur[i]) / dx;
    for (std::size_t i = 1; i + 1 < nx; ++i)
      h_next[i] = 2.0 * h_cur[i] - h_prev[i] + dt2 / (a[i] * dx) * (flux[i] - flux[i - 1]);
    // Neumann delta through the boundary flux, half-cell balance at the inlet.
    const double f_in = (n == 0) ? 1.0 / dt : 0.0;
    const double flux_ghost = a[0] * f_in;
    h_next[0] = 2.0 * h_cur[0] - h_prev[0] + dt2 / a[0] * (flux[0] - flux_ghost) / (dx / 2.0);
    h_next[nx - 1] = h_cur[nx - 2] + absorb * (h_next[nx - 2] - h_cur[nx - 1]);

    out.samples[n + 1] = h_next[0];
    if ((n & 63u) == 0 && !std::isfinite(h_next[0]))
      throw NumericalError("simulate_klo: non-finite state at step " + std::to_string(n));
    std::swap(h_prev, h_cur);
    std::swap(h_cur, h_next);
  }
  if (!std::isfinite(out.samples.back()))
    throw NumericalError("simulate_klo: non-finite state at final step");
  return out;
}

}  // namespace webrec
