#pragma once

#include <vector>

#include "webrec/profiles.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// Staggered-grid leapfrog solver for the first-order system
//   dH/dt = -(1/A) dQ/dx,   dQ/dt = -A dH/dx
// with flow Q at nodes, pressure H at half-nodes, a discrete flow impulse at
// the inlet and an Engquist-Majda absorbing update at the right end.
struct SgForwardConfig {
  int nx = 800;             // number of spatial intervals J
  double dt_over_dx = 1.0;  // Courant number; the scheme is run at 1 throughout
  double t_final = 4.0;
  int impulse_width = 1;  // K_imp: impulse spread over this many steps
  bool absorbing_right = true;
  bool remove_impulse = true;

  void validate(double length) const;
};

// Inlet flow samples of the discrete impulse: 1/(K_imp*dt) for the first K_imp
// steps, zero after; sums to 1 against the time step.
std::vector<double> sg_impulse_samples(int k_imp, double dt, std::size_t n);

// Inlet pressure trace on the solver time grid. With remove_impulse the direct
// contribution of the boundary impulse is subtracted (uniform-tube reference
// run on the same grid) and the record is aligned so that a reflector at depth
// x appears at lag 2x; the A == const response is then identically zero.
BoundaryTrace simulate_sg(const AreaProfile& profile, const SgForwardConfig& cfg);

}  // namespace webrec
