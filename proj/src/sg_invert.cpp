#include "webrec/sg_invert.hpp"

#include <cmath>
#include <string>

#include "webrec/csv.hpp"
#include "webrec/errors.hpp"
#include "webrec/grid.hpp"
#include "webrec/simd/kernels.hpp"
#include "webrec/toeplitz.hpp"

namespace webrec {

void SgInverseConfig::validate() const {
  if (phi < 0.0) throw ParamError("SgInverseConfig: phi must be nonnegative");
  if (!a_grid.empty()) {
    if (std::abs(a_grid.front()) > 1e-12)
      throw ParamError("SgInverseConfig: a_grid must start at 0");
    if (a_grid.size() >= 2 && !is_uniform_increasing(a_grid))
      throw ParamError("SgInverseConfig: a_grid must be uniform and increasing");
  }
}

Mat SgSystem::dense() const {
  Mat t = toeplitz_symmetric(first_column);
  for (std::size_t s = 0; s < correction_cols.size(); ++s) {
    const std::size_t j = correction_cols[s];
    for (std::size_t i = 0; i < size(); ++i) t(i, j) += correction_u(i, s);
  }
  return t;
}

SgSystem assemble_system(const BoundaryTrace& h, double a, const SgInverseConfig& cfg) {
  h.validate();
  cfg.validate();
  if (h.kind != TraceKind::SgImpulseResponse || !h.impulse_removed)
    throw ParamError("assemble_system: need an impulse-removed SG response");
  if (a < 0.0) throw ParamError("assemble_system: depth a must be nonnegative");

  const double dt = h.dt;
  const std::size_t m = static_cast<std::size_t>(std::llround(a / dt));
  if (std::abs(static_cast<double>(m) * dt - a) > 1e-9 * std::max(1.0, a))
    throw ParamError("assemble_system: a must be a multiple of the trace dt");
  const std::size_t mm = 2 * m + 1;
  if (mm > h.samples.size())
    throw RangeError("assemble_system: window 2a exceeds the record length");

  SgSystem sys;
  sys.dt = dt;
  sys.first_column.resize(mm);
  for (std::size_t k = 0; k < mm; ++k) sys.first_column[k] = 0.5 * dt * h.samples[k];
  sys.first_column[0] += 1.0 + cfg.phi;

  if (cfg.quadrature == SgQuadrature::Gregory4 && mm >= 5) {
    // End-weight deviations from the uniform dt weight: 5/12 at the ends,
    // 13/12 next to them.
    const std::size_t cols[4] = {0, 1, mm - 2, mm - 1};
    const double dev[4] = {-7.0 / 12.0 * dt, 1.0 / 12.0 * dt, 1.0 / 12.0 * dt,
                           -7.0 / 12.0 * dt};
    sys.correction_u = Mat(mm, 4);
    sys.correction_cols.assign(cols, cols + 4);
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t i = 0; i < mm; ++i) {
        const std::size_t lag = i >= cols[s] ? i - cols[s] : cols[s] - i;
        sys.correction_u(i, s) = 0.5 * dev[s] * h.samples[lag];
      }
  }
  return sys;
}

namespace {

SgWindowSolution solve_dense_path(const SgSystem& sys, double rhs_value, bool fallback) {
  SgWindowSolution out;
  out.dense_fallback = fallback;
  std::vector<double> b(sys.size(), rhs_value);
  Mat t = sys.dense();
  std::vector<int> piv;
  lu_factor(t, piv);
  lu_solve_inplace(t, piv, b.data());
  out.f = std::move(b);
  return out;
}

}  // namespace

SgWindowSolution solve_window(const SgSystem& sys, double rhs_value,
                              const SgInverseConfig& cfg) {
  const std::size_t mm = sys.size();
  if (mm == 0) throw ParamError("solve_window: empty system");
  if (cfg.solver == SgSolver::Dense) return solve_dense_path(sys, rhs_value, false);

  const std::size_t p = sys.correction_cols.size();
  std::vector<std::vector<double>> rhs(1 + p, std::vector<double>(mm));
  rhs[0].assign(mm, rhs_value);
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t i = 0; i < mm; ++i) rhs[1 + s][i] = sys.correction_u(i, s);

  std::vector<std::vector<double>> sol;
  const LevinsonStatus st = levinson_solve_multi(sys.first_column, rhs, sol);
  if (!st.ok) return solve_dense_path(sys, rhs_value, true);

  SgWindowSolution out;
  if (p == 0) {
    out.f = std::move(sol[0]);
    return out;
  }
  // Woodbury: f = xb - XU (I_p + V^T XU)^{-1} V^T xb, with V^T picking the
  // corrected columns' rows.
  Mat cap(p, p);
  std::vector<double> vxb(p);
  for (std::size_t r = 0; r < p; ++r) {
    const std::size_t jr = sys.correction_cols[r];
    for (std::size_t s = 0; s < p; ++s) cap(r, s) = (r == s ? 1.0 : 0.0) + sol[1 + s][jr];
    vxb[r] = sol[0][jr];
  }
  const std::vector<double> coef = solve_dense(cap, vxb);
  out.f = std::move(sol[0]);
  for (std::size_t s = 0; s < p; ++s)
    simd::axpy(-coef[s], sol[1 + s].data(), out.f.data(), mm);
  return out;
}

SgReconstruction reconstruct_sg(const BoundaryTrace& h, const SgInverseConfig& cfg) {
  h.validate();
  cfg.validate();
  std::vector<double> a_grid = cfg.a_grid;
  if (a_grid.empty()) {
    const std::size_t j_max = (h.samples.size() - 1) / 2;
    a_grid.resize(j_max + 1);
    for (std::size_t j = 0; j <= j_max; ++j) a_grid[j] = h.dt * static_cast<double>(j);
  }
  if (a_grid.size() < 3)
    throw ParamError("reconstruct_sg: need at least 3 reconstruction depths");

  SgReconstruction rec;
  rec.profile.x = a_grid;
  rec.profile.a.resize(a_grid.size());
  rec.f_end.resize(a_grid.size());
  rec.profile.generator = "sg-reconstruction";
  for (std::size_t j = 0; j < a_grid.size(); ++j) {
    const SgSystem sys = assemble_system(h, a_grid[j], cfg);
    const SgWindowSolution sol = solve_window(sys, 1.0, cfg);
    rec.any_dense_fallback |= sol.dense_fallback;
    const double fe = sol.f.back();
    rec.f_end[j] = fe;
    rec.profile.a[j] = fe * fe;
  }
  rec.profile.validate();
  return rec;
}

void save_reconstruction_csv(const AreaProfile& p, const std::string& path) {
  csv::Writer w(path);
  w.comment("kind", p.generator);
  w.header("x,A_rec");
  for (std::size_t i = 0; i < p.x.size(); ++i)
    w.row({csv::format_double(p.x[i]), csv::format_double(p.a[i])});
}

}  // namespace webrec
