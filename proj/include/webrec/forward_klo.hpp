#pragma once

#include "webrec/profiles.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// Central three-level leapfrog for the second-order equation in conservative
// flux form, A d2H/dt2 = d/dx (A dH/dx), with a Neumann delta imposed through
// the inlet boundary flux and an Engquist-Majda absorbing right end.
struct KloForwardConfig {
  int nx = 801;      // grid points
  double eta = 0.4;  // Courant number, in (0, 1)
  double t_final = 4.0;

  void validate(double length) const;
};

// Inlet trace H(0, t_n). For A == const the response is a step of height
// -1/A(0) (the inlet flux convention fixes the sign; see README).
BoundaryTrace simulate_klo(const AreaProfile& profile, const KloForwardConfig& cfg);

}  // namespace webrec
