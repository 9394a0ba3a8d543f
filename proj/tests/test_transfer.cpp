#include <cmath>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "webrec/errors.hpp"
#include "webrec/forward_klo.hpp"
#include "webrec/forward_sg.hpp"
#include "webrec/grid.hpp"
#include "webrec/klo_invert.hpp"
#include "webrec/metrics.hpp"
#include "webrec/profiles.hpp"
#include "webrec/sg_invert.hpp"
#include "webrec/trace.hpp"
#include "webrec/transfer.hpp"

using namespace webrec;

namespace {

BoundaryTrace klo_trace_from(std::vector<double> samples, double dt) {
  BoundaryTrace t;
  t.dt = dt;
  t.samples = std::move(samples);
  t.kind = TraceKind::KloTrace;
  return t;
}

BoundaryTrace sg_kernel_from(std::vector<double> samples, double dt) {
  BoundaryTrace t;
  t.dt = dt;
  t.samples = std::move(samples);
  t.kind = TraceKind::SgImpulseResponse;
  t.impulse_removed = true;
  return t;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("uniform step trace maps to the zero kernel") {
  const double dt = 0.01;
  std::vector<double> step(401, -1.0);
  step[0] = 0.0;
  const BoundaryTrace h = sg_kernel_from_klo(klo_trace_from(step, dt), 1.0, 0.0);
  CHECK(h.kind == TraceKind::SgImpulseResponse);
  CHECK(h.impulse_removed);
  for (double v : h.samples) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("nd map from the zero kernel") {
  const double dt = 0.01;
  const BoundaryTrace h0 = sg_kernel_from(std::vector<double>(101, 0.0), dt);
  SUBCASE("without the step term the operator vanishes") {
    const NdMap nd = ndmap_from_sg(h0, 1.0, dt, false);
    for (double v : nd.kernel) CHECK(v == 0.0);
  }
  SUBCASE("with the step term the uniform-tube map is reproduced") {
    const NdMap nd = ndmap_from_sg(h0, 1.0, dt, true);
    CHECK(nd.kernel[0] == 0.0);
    for (std::size_t k = 1; k < nd.kernel.size(); ++k)
      CHECK(nd.kernel[k] == doctest::Approx(-dt).epsilon(1e-14));
  }
}

TEST_CASE("nd map structure is lower-triangular Toeplitz") {
  const double dt = 0.02;
  const BoundaryTrace h = sg_kernel_from(testoracle::random_vector(40, 15), dt);
  const NdMap nd = ndmap_from_sg(h, 1.0, dt);
  const Mat m = nd.to_matrix();
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j) {
      if (j > i)
        CHECK(m(i, j) == 0.0);
      else
        CHECK(m(i, j) == nd.kernel[i - j]);
    }
  // matrix-free application agrees
  const std::vector<double> f = testoracle::random_vector(40, 16);
  const std::vector<double> fast = nd.apply(f);
  const std::vector<double> ref = matvec(m, f);
  for (std::size_t i = 0; i < 40; ++i)
    CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("both maps are linear in the data") {
  const double dt = 0.01;
  const std::vector<double> u = testoracle::random_vector(60, 1);
  const std::vector<double> v = testoracle::random_vector(60, 2);
  std::vector<double> w(60);
  for (std::size_t i = 0; i < 60; ++i) w[i] = 2.0 * u[i] - 3.0 * v[i];

  SUBCASE("differentiation map (with a fixed reference)") {
    const std::vector<double> ref(60, 0.0);
    const BoundaryTrace hu = sg_kernel_from_klo(klo_trace_from(u, dt), 1.0, 1.5, ref);
    const BoundaryTrace hv = sg_kernel_from_klo(klo_trace_from(v, dt), 1.0, 1.5, ref);
    const BoundaryTrace hw = sg_kernel_from_klo(klo_trace_from(w, dt), 1.0, 1.5, ref);
    for (std::size_t i = 0; i < 60; ++i)
      CHECK(hw.samples[i] ==
            doctest::Approx(2.0 * hu.samples[i] - 3.0 * hv.samples[i]).epsilon(1e-11));
  }
  SUBCASE("cumulative-sum map (kernel part)") {
    const NdMap nu = ndmap_from_sg(sg_kernel_from(u, dt), 1.0, dt, false);
    const NdMap nv = ndmap_from_sg(sg_kernel_from(v, dt), 1.0, dt, false);
    const NdMap nw = ndmap_from_sg(sg_kernel_from(w, dt), 1.0, dt, false);
    for (std::size_t i = 0; i < 60; ++i)
      CHECK(nw.kernel[i] ==
            doctest::Approx(2.0 * nu.kernel[i] - 3.0 * nv.kernel[i]).epsilon(1e-11));
  }
}

TEST_CASE("round trip recovers a smooth-profile kernel") {
  const AreaProfile p = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 400), 31);
  SgForwardConfig cfg;
  cfg.nx = 800;
  cfg.t_final = 4.0;
  const BoundaryTrace h = resample_trace(simulate_sg(p, cfg), 0.01, 401);

  const NdMap nd = ndmap_from_sg(h, 1.0, h.dt);
  std::vector<double> trace_samples(nd.kernel.size());
  for (std::size_t k = 0; k < nd.kernel.size(); ++k) trace_samples[k] = nd.kernel[k] / h.dt;
  const BoundaryTrace back =
      sg_kernel_from_klo(klo_trace_from(trace_samples, h.dt), 1.0, 0.0);

  // Rectangle cumulative sums followed by central differences compose to the
  // forward two-point average of the kernel; the composition matches that
  // limit at second order (the kernel itself is recovered half a sample late).
  double num = 0.0, den = 0.0, num_raw = 0.0;
  for (std::size_t k = 2; k + 2 < h.samples.size(); ++k) {
    const double avg = 0.5 * (h.samples[k] + h.samples[k + 1]);
    num += std::pow(back.samples[k] - avg, 2);
    num_raw += std::pow(back.samples[k] - h.samples[k], 2);
    den += h.samples[k] * h.samples[k];
  }
  CHECK(std::sqrt(num / den) <= 1e-2);
  CHECK(std::sqrt(num_raw / den) <= 5e-2);  // half-sample lead against the raw kernel
}

TEST_CASE("cross reconstructions agree with the native ones") {
  const AreaProfile p = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 400), 8);
  const AreaProfile unif = uniform_profile(linspace(0.0, 2.0, 400));
  const double dtc = 0.01;
  const std::size_t n_time = 401;
  const std::vector<double> common = linspace(0.0, 2.0, 201);

  SgForwardConfig sf;
  sf.nx = 800;
  sf.t_final = 4.0;
  const BoundaryTrace h_sg = resample_trace(simulate_sg(p, sf), dtc, n_time);
  KloForwardConfig kf;
  kf.nx = 801;
  kf.t_final = 4.0;
  const BoundaryTrace t_klo = resample_trace(simulate_klo(p, kf), dtc, n_time);
  const BoundaryTrace t_unif = resample_trace(simulate_klo(unif, kf), dtc, n_time);

  SgInverseConfig sic;
  KloInverseConfig kic;
  kic.n_r = 200;
  kic.sigma_kr = 0.8;

  SUBCASE("SG from KLO data vs native SG") {
    const AreaProfile native = reconstruct_sg(h_sg, sic).profile;
    const BoundaryTrace h_x = sg_kernel_from_klo(t_klo, 1.0, 0.0, t_unif.samples);
    const AreaProfile crossed = reconstruct_sg(h_x, sic).profile;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < native.a.size(); ++j) {
      num += std::pow(native.a[j] - crossed.a[j], 2);
      den += native.a[j] * native.a[j];
    }
    CHECK(std::sqrt(num / den) <= 1e-2);
  }
  SUBCASE("KLO from SG data vs native KLO") {
    const KloReconstruction native = reconstruct_klo(t_klo, kic, common);
    const NdMap nd = ndmap_from_sg(h_sg, 1.0, dtc);
    const KloReconstruction crossed = reconstruct_klo_kernel(nd.kernel, dtc, kic, common);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < common.size(); ++j) {
      num += std::pow(native.profile.a[j] - crossed.profile.a[j], 2);
      den += native.profile.a[j] * native.profile.a[j];
    }
    CHECK(std::sqrt(num / den) <= 2e-2);
  }
}

TEST_CASE("argument validation") {
  const double dt = 0.01;
  BoundaryTrace sg = sg_kernel_from(std::vector<double>(32, 0.0), dt);
  CHECK_THROWS_AS(sg_kernel_from_klo(sg, 1.0, 0.0), ParamError);
  BoundaryTrace klo = klo_trace_from(std::vector<double>(32, -1.0), dt);
  CHECK_THROWS_AS(sg_kernel_from_klo(klo, 0.0, 0.0), ParamError);
  CHECK_THROWS_AS(sg_kernel_from_klo(klo, 1.0, -1.0), ParamError);
  CHECK_THROWS_AS(ndmap_from_sg(klo, 1.0, dt), ParamError);
  CHECK_THROWS_AS(ndmap_from_sg(sg, 1.0, 2.0 * dt), ParamError);
}

}  // TEST_SUITE
