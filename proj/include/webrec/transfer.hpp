#pragma once

#include <span>
#include <vector>

#include "webrec/linalg.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// Conversions between the two boundary-data conventions, which differ by one
// time derivative.

// KLO trace -> SG impulse-response kernel: h = -(1/A0) dH/dt by central
// differences (one-sided at the ends), after optional Gaussian smoothing.
// The direct step contribution is removed by subtracting `step_reference`
// (same time grid) before differentiating; by default the ideal discrete step
// 0, -1/A0, -1/A0, ... is used. Passing the resampled uniform-tube trace from
// the same forward pipeline removes the launch transient as well.
BoundaryTrace sg_kernel_from_klo(const BoundaryTrace& trace, double a0, double smooth_sigma,
                                 std::span<const double> step_reference = {});

// SG kernel -> KLO-convention Neumann-to-Dirichlet map, represented by the
// first column of the lower-triangular Toeplitz matrix: -A0 dt^2 c_{n-k} with
// c the cumulative kernel sums. With include_step the direct step kernel
// (-dt/A0 at lags >= 1, matching the native trace alignment) is added so the
// A == 1 map is reproduced; without it, h == 0 maps to the zero operator.
struct NdMap {
  std::vector<double> kernel;  // consumable by reconstruct_klo_kernel
  double dt = 0.0;

  Mat to_matrix() const;
  std::vector<double> apply(std::span<const double> f) const;
};

NdMap ndmap_from_sg(const BoundaryTrace& h_sg, double a0, double dt,
                    bool include_step = true);

}  // namespace webrec
