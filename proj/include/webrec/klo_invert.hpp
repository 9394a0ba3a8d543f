#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "webrec/linalg.hpp"
#include "webrec/profiles.hpp"
#include "webrec/trace.hpp"

namespace webrec {

// Boundary-control reconstruction from the Neumann-to-Dirichlet trace: build
// the connecting operator K = R Lambda R J - J Lambda from the scaled kernel
// h_hat_i = dt * H(0, t_i), solve (K_rr + alpha I) f = B1 on nested windows
// [T0 - r, T0], differentiate s_alpha(r) = <f, B1> dt and smooth.

struct KloInverseConfig {
  double alpha = 3.3362010744001187e-07;  // noiseless schedule value
  double sigma_kr = 6.0;                  // Gaussian smoothing of k, in r-grid points
  double sigma_ax = 0.0;                  // optional post-smoothing of A on the x grid
  std::size_t n_r = 1500;                 // uniform radii in (0, T0]
  double x_min = 0.0;                     // inlet regularisation: A(x) = 1 for x <= x_min
  Bounds bounds{};
  bool central_diff = false;  // interior central differences instead of forward

  void validate() const;
};

// (Rv)_i = v_{n-1-i}
std::vector<double> time_reversal(std::span<const double> v);

// (Jv)_i = (dt/2) sum_{tau=i}^{N-i} v_tau when N - i > i, else 0 (N = n-1).
std::vector<double> integrate_J(std::span<const double> v, double dt);

// Lower-triangular Toeplitz convolution operator of the scaled kernel,
// explicit and matrix-free forms.
Mat convolution_matrix(std::span<const double> h_hat);
std::vector<double> convolution_apply(std::span<const double> h_hat,
                                      std::span<const double> v);

// Connecting operator K = R Lambda R J - J Lambda: explicit assembly in O(n^2)
// via kernel prefix sums, and the composed matrix-free action.
Mat connecting_operator(std::span<const double> h_hat, double dt);
std::vector<double> connecting_apply(std::span<const double> h_hat, double dt,
                                     std::span<const double> v);

// B1(t_i) = T0 - t_i for t_i <= T0, 0 beyond.
std::vector<double> b1_vector(std::size_t n, double dt);

struct KloWindow {
  std::size_t i_lo = 0, i_hi = 0;  // inclusive index range with t_i in [T0-r, T0]
  std::vector<double> f;           // solution on the window
  double s_alpha = 0.0;            // <f_full, b1> dt
};

KloWindow window_solve(const Mat& k_op, double r, double alpha, double dt);

// Normalised Gaussian smoothing, half-width max(1, floor(4 sigma)), symmetric
// reflection padding; sigma = 0 is the identity.
std::vector<double> gaussian_smooth(std::span<const double> seq, double sigma_pts);

struct KloReconstruction {
  AreaProfile profile;
  std::vector<double> r, s_alpha, k_raw, k_smooth;
};

KloReconstruction reconstruct_klo_kernel(std::span<const double> h_hat, double dt,
                                         const KloInverseConfig& cfg,
                                         std::span<const double> target_x);

KloReconstruction reconstruct_klo(const BoundaryTrace& trace, const KloInverseConfig& cfg,
                                  std::span<const double> target_x);

void save_klo_diagnostics_csv(const KloReconstruction& rec, const std::string& path);

}  // namespace webrec
