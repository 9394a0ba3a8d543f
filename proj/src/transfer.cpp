#include "webrec/transfer.hpp"

#include <cmath>

#include "webrec/errors.hpp"
#include "webrec/klo_invert.hpp"
#include "webrec/toeplitz.hpp"

namespace webrec {

BoundaryTrace sg_kernel_from_klo(const BoundaryTrace& trace, double a0, double smooth_sigma,
                                 std::span<const double> step_reference) {
  trace.validate();
  if (trace.kind != TraceKind::KloTrace)
    throw ParamError("sg_kernel_from_klo: trace kind must be KloTrace");
  if (!(a0 > 0.0)) throw ParamError("sg_kernel_from_klo: A0 must be positive");
  if (smooth_sigma < 0.0) throw ParamError("sg_kernel_from_klo: smoothing width >= 0");
  const std::size_t n = trace.samples.size();
  if (!step_reference.empty() && step_reference.size() != n)
    throw ParamError("sg_kernel_from_klo: step reference grid mismatch");

  // Remove the direct step before smoothing/differentiating; what remains is
  // the reflection content whose derivative is the kernel.
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ref = step_reference.empty() ? (i == 0 ? 0.0 : -1.0 / a0)
                                              : step_reference[i];
    g[i] = trace.samples[i] - ref;
  }
  if (smooth_sigma > 0.0) g = gaussian_smooth(g, smooth_sigma);

  BoundaryTrace out;
  out.dt = trace.dt;
  out.kind = TraceKind::SgImpulseResponse;
  out.impulse_removed = true;
  out.samples.resize(n);
  const double scale = -1.0 / a0;
  out.samples[0] = scale * (g[1] - g[0]) / trace.dt;
  for (std::size_t i = 1; i + 1 < n; ++i)
    out.samples[i] = scale * (g[i + 1] - g[i - 1]) / (2.0 * trace.dt);
  out.samples[n - 1] = scale * (g[n - 1] - g[n - 2]) / trace.dt;
  return out;
}

Mat NdMap::to_matrix() const { return toeplitz_lower(kernel); }

std::vector<double> NdMap::apply(std::span<const double> f) const {
  return causal_conv(kernel, f);
}

NdMap ndmap_from_sg(const BoundaryTrace& h_sg, double a0, double dt, bool include_step) {
  h_sg.validate();
  if (h_sg.kind != TraceKind::SgImpulseResponse || !h_sg.impulse_removed)
    throw ParamError("ndmap_from_sg: need an impulse-removed SG kernel");
  if (!(a0 > 0.0)) throw ParamError("ndmap_from_sg: A0 must be positive");
  if (std::abs(dt - h_sg.dt) > 1e-12 * dt)
    throw ParamError("ndmap_from_sg: dt does not match the kernel grid");

  NdMap map;
  map.dt = dt;
  map.kernel.resize(h_sg.samples.size());
  double csum = 0.0;
  for (std::size_t k = 0; k < map.kernel.size(); ++k) {
    csum += h_sg.samples[k];
    map.kernel[k] = -a0 * dt * dt * csum;
    if (include_step && k >= 1) map.kernel[k] -= dt / a0;
  }
  return map;
}

}  // namespace webrec
