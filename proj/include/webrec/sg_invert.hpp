#pragma once

#include <cstddef>
#include <vector>

#include "webrec/linalg.hpp"
#include "webrec/profiles.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// Fredholm second-kind reconstruction from the impulse response: for each
// depth a = m*dt solve the (2m+1)-square symmetric Toeplitz system
//   T f = A(0) * 1,   c_k = (dt/2) h(k dt) + (1 + phi) delta_k0,
// with optional Gregory end-weight correction handled as a rank-<=4 update,
// and recover A(a) = f_{M-1}^2 from the endpoint value.

enum class SgQuadrature { Trapezoid, Gregory4 };
enum class SgSolver { LevinsonWoodbury, Dense };

struct SgInverseConfig {
  double phi = 1e-10;  // Tikhonov-style diagonal lift
  SgQuadrature quadrature = SgQuadrature::Gregory4;
  SgSolver solver = SgSolver::LevinsonWoodbury;
  std::vector<double> a_grid;  // empty: every j*dt with 2a within the record

  void validate() const;
};

// Assembled window system: symmetric Toeplitz first column plus the Gregory
// end-weight correction as explicit columns (empty for Trapezoid or M < 5).
struct SgSystem {
  std::vector<double> first_column;
  Mat correction_u;                        // M x p column block
  std::vector<std::size_t> correction_cols;  // touched column indices, p <= 4
  double dt = 0.0;

  std::size_t size() const { return first_column.size(); }
  Mat dense() const;  // full matrix, used as the oracle and dense mode
};

SgSystem assemble_system(const BoundaryTrace& h, double a, const SgInverseConfig& cfg);

struct SgWindowSolution {
  std::vector<double> f;
  bool dense_fallback = false;  // Levinson breakdown, solved densely instead
};

SgWindowSolution solve_window(const SgSystem& sys, double rhs_value,
                              const SgInverseConfig& cfg);

struct SgReconstruction {
  AreaProfile profile;         // x = a, A = endpoint value squared
  std::vector<double> f_end;   // f_{M-1} per depth
  bool any_dense_fallback = false;
};

SgReconstruction reconstruct_sg(const BoundaryTrace& h, const SgInverseConfig& cfg);

void save_reconstruction_csv(const AreaProfile& p, const std::string& path);

}  // namespace webrec
