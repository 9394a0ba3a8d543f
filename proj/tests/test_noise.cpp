#include <cmath>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "webrec/errors.hpp"
#include "webrec/noise.hpp"
#include "webrec/toeplitz.hpp"
#include "webrec/trace.hpp"

using namespace webrec;

namespace {

BoundaryTrace make_trace(std::vector<double> v, double dt) {
  BoundaryTrace t;
  t.dt = dt;
  t.samples = std::move(v);
  t.kind = TraceKind::SgImpulseResponse;
  t.impulse_removed = true;
  return t;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("weighted norm") {
  CHECK(weighted_l2_norm(std::vector<double>(4, 1.0), 0.25) == doctest::Approx(1.0));
  CHECK(weighted_l2_norm(std::vector<double>(10, 0.0), 0.1) == 0.0);
  CHECK(weighted_l2_norm(std::vector<double>{3.0, 4.0}, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("relative-energy noise is exact by construction") {
  const BoundaryTrace h = make_trace(testoracle::random_vector(400, 5), 0.01);
  const double h_norm = weighted_l2_norm(h.samples, h.dt);
  for (double delta : {0.01, 0.05, 0.10, 0.37}) {
    const SgNoiseResult r = add_sg_noise(h, delta, 99);
    CHECK_FALSE(r.zero_signal);
    std::vector<double> diff(h.samples.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = r.trace.samples[i] - h.samples[i];
    CHECK(weighted_l2_norm(diff, h.dt) ==
          doctest::Approx(delta * h_norm).epsilon(1e-12));
  }
}

TEST_CASE("delta zero is the identity") {
  const BoundaryTrace h = make_trace(testoracle::random_vector(100, 6), 0.01);
  const SgNoiseResult r = add_sg_noise(h, 0.0, 1);
  CHECK(r.trace.samples == h.samples);
}

TEST_CASE("fixed seed fixes the direction across levels") {
  const BoundaryTrace h = make_trace(testoracle::random_vector(200, 7), 0.01);
  const SgNoiseResult a = add_sg_noise(h, 0.01, 42);
  const SgNoiseResult b = add_sg_noise(h, 0.10, 42);
  for (std::size_t i = 0; i < h.samples.size(); ++i) {
    const double da = a.trace.samples[i] - h.samples[i];
    const double db = b.trace.samples[i] - h.samples[i];
    CHECK(db == doctest::Approx(10.0 * da).epsilon(1e-10));
  }
}

TEST_CASE("zero signal with positive delta is returned unchanged") {
  const BoundaryTrace h = make_trace(std::vector<double>(50, 0.0), 0.01);
  const SgNoiseResult r = add_sg_noise(h, 0.05, 3);
  CHECK(r.zero_signal);
  CHECK(r.trace.samples == h.samples);
}

TEST_CASE("operator norm wrapper") {
  CHECK_THROWS_AS(operator_norm(std::vector<double>(16, 0.0)), ParamError);
  const std::vector<double> h = testoracle::random_vector(64, 8);
  const OperatorNormEstimate est = operator_norm(h, 1e-10, 2000);
  const double ref = testoracle::spectral_norm(toeplitz_lower(h));
  CHECK(std::abs(est.value - ref) <= 1e-6 * ref);
}

TEST_CASE("operator-norm noise has the constructed size") {
  std::vector<double> h = testoracle::random_vector(128, 9);
  for (double& v : h) v *= 0.05;
  h[0] += 1.0;
  const double lam = operator_norm(h).value;
  for (double delta : {0.01, 0.10}) {
    const std::vector<double> noisy = add_klo_noise(h, delta, 11);
    std::vector<double> pert(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) pert[i] = noisy[i] - h[i];
    const double eps = operator_norm(pert).value;
    CHECK(eps == doctest::Approx(delta * lam).epsilon(1e-6));
  }
  SUBCASE("direction shared across levels") {
    const std::vector<double> a = add_klo_noise(h, 0.01, 5);
    const std::vector<double> b = add_klo_noise(h, 0.10, 5);
    for (std::size_t i = 0; i < h.size(); ++i)
      CHECK(b[i] - h[i] == doctest::Approx(10.0 * (a[i] - h[i])).epsilon(1e-9));
  }
  SUBCASE("delta zero is the identity") { CHECK(add_klo_noise(h, 0.0, 5) == h); }
}

TEST_CASE("schedules follow the printed cases") {
  const KloSchedule s0 = klo_schedules(0.0, 1500);
  CHECK(s0.beta == 2e-5);
  CHECK(s0.alpha == doctest::Approx(2e-5 * std::pow(1e-4, 4.0 / 9.0)).epsilon(1e-14));
  CHECK(s0.alpha == doctest::Approx(3.3362010744001187e-07).epsilon(1e-12));
  CHECK(s0.sigma_kr == doctest::Approx(6.0));

  CHECK(klo_schedules(0.01, 1500).beta == 5e-3);
  CHECK(klo_schedules(0.005, 1500).beta == 5e-3);
  CHECK(klo_schedules(0.05, 1500).beta == 1e-2);

  const KloSchedule s5 = klo_schedules(0.05, 1500, 1.0);
  CHECK(s5.sigma_kr == doctest::Approx(18.0));
  CHECK(s5.eps_eff == doctest::Approx(0.05));
  CHECK(s5.alpha == doctest::Approx(1e-2 * std::pow(0.05, 4.0 / 9.0)).epsilon(1e-14));

  // operator norm scales eps_eff
  const KloSchedule s5n = klo_schedules(0.05, 750, 2.5);
  CHECK(s5n.eps_eff == doctest::Approx(0.125));
  CHECK(s5n.sigma_kr == doctest::Approx(6.0 * 0.5 * 3.0));
}

}  // TEST_SUITE
