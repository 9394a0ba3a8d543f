#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "webrec/errors.hpp"
#include "webrec/grid.hpp"
#include "webrec/metrics.hpp"
#include "webrec/profiles.hpp"

using namespace webrec;

namespace {

AreaProfile make(std::vector<double> x, std::vector<double> a) {
  AreaProfile p;
  p.x = std::move(x);
  p.a = std::move(a);
  p.generator = "external";
  return p;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("resampling") {
  const AreaProfile p = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 400), 2);
  SUBCASE("identity on the same grid") {
    const AreaProfile q = resample_profile(p, p.x);
    CHECK(q.a == p.a);
  }
  SUBCASE("affine profiles are reproduced exactly") {
    std::vector<double> x = linspace(0.0, 2.0, 101), a(101);
    for (std::size_t i = 0; i < 101; ++i) a[i] = 1.0 + 0.3 * x[i];
    const AreaProfile lin = make(std::move(x), std::move(a));
    const std::vector<double> target = linspace(0.0, 2.0, 37);
    const AreaProfile q = resample_profile(lin, target);
    for (std::size_t i = 0; i < target.size(); ++i)
      CHECK(q.a[i] == doctest::Approx(1.0 + 0.3 * target[i]).epsilon(1e-13));
  }
  SUBCASE("quadratic interpolation error bound") {
    // A = x^2 + 1 on a coarse grid: |error| <= dx^2/8 * max|A''| = dx^2/4
    const double dx = 0.1;
    std::vector<double> x = linspace(0.0, 2.0, 21), a(21);
    for (std::size_t i = 0; i < 21; ++i) a[i] = x[i] * x[i] + 1.0;
    const AreaProfile coarse = make(std::move(x), std::move(a));
    const std::vector<double> target = linspace(0.0, 2.0, 400);
    const AreaProfile q = resample_profile(coarse, target);
    double worst = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i)
      worst = std::max(worst, std::abs(q.a[i] - (target[i] * target[i] + 1.0)));
    CHECK(worst <= dx * dx / 4.0 + 1e-12);
  }
  SUBCASE("out-of-domain target is rejected") {
    CHECK_THROWS_AS(resample_profile(p, linspace(0.0, 2.5, 10)), RangeError);
  }
}

TEST_CASE("error report hand values") {
  SUBCASE("identical profiles give zero errors") {
    const AreaProfile p = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 200), 3);
    const ErrorRecord r = error_report(p, p);
    CHECK(r.l2_abs == 0.0);
    CHECK(r.l2_rel == 0.0);
    CHECK(r.h1_abs == 0.0);
    CHECK(r.h1_rel == 0.0);
  }
  SUBCASE("constant offset") {
    const std::size_t n = 200;
    const std::vector<double> x = linspace(0.0, 2.0, n);
    const AreaProfile truth = make(x, std::vector<double>(n, 1.0));
    const AreaProfile rec = make(x, std::vector<double>(n, 1.1));
    const ErrorRecord r = error_report(truth, rec);
    const double cell_sum = static_cast<double>(n) * truth.dx();  // rectangle measure
    CHECK(r.l2_abs == doctest::Approx(0.1 * std::sqrt(cell_sum)).epsilon(1e-12));
    CHECK(r.l2_abs == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(0.01));
    CHECK(r.l2_rel == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.h1_rel == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("sloped error strictly increases the H1 norm") {
    const std::size_t n = 100;
    const std::vector<double> x = linspace(0.0, 2.0, n);
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = 1.0 + 0.2 * x[i];
    const AreaProfile truth = make(x, std::vector<double>(n, 1.0));
    const AreaProfile rec = make(x, std::move(a));
    const ErrorRecord r = error_report(truth, rec);
    CHECK(r.h1_abs > r.l2_abs);
  }
}

TEST_CASE("symmetric roles and scale covariance") {
  const std::vector<double> grid = linspace(0.0, 2.0, 150);
  const AreaProfile a = sample_area(KernelSpec::se(), grid, 4);
  const AreaProfile b = sample_area(KernelSpec::matern(), grid, 5);
  const ErrorRecord ab = error_report(a, b);
  const ErrorRecord ba = error_report(b, a);
  CHECK(ab.l2_abs == doctest::Approx(ba.l2_abs).epsilon(1e-14));
  CHECK(ab.h1_abs == doctest::Approx(ba.h1_abs).epsilon(1e-14));

  AreaProfile a2 = a, b2 = b;
  for (double& v : a2.a) v *= 3.0;
  for (double& v : b2.a) v *= 3.0;
  const ErrorRecord scaled = error_report(a2, b2);
  CHECK(scaled.l2_abs == doctest::Approx(3.0 * ab.l2_abs).epsilon(1e-13));
  CHECK(scaled.h1_abs == doctest::Approx(3.0 * ab.h1_abs).epsilon(1e-13));
  CHECK(scaled.l2_rel == doctest::Approx(ab.l2_rel).epsilon(1e-13));
  CHECK(scaled.h1_rel == doctest::Approx(ab.h1_rel).epsilon(1e-13));
}

TEST_CASE("grid mismatch is rejected") {
  const AreaProfile a = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 100), 1);
  const AreaProfile b = sample_area(KernelSpec::se(), linspace(0.0, 2.0, 120), 1);
  CHECK_THROWS_AS(error_report(a, b), ParamError);
}

TEST_CASE("errors csv round trip") {
  std::vector<ErrorRecord> recs;
  for (int i = 0; i < 3; ++i) {
    ErrorRecord r;
    r.realisation = i;
    r.generator = i % 2 ? "se" : "hybrid";
    r.delta = 0.05;
    r.method = i % 2 ? "sg" : "klo";
    r.l2_abs = 0.1 * i;
    r.l2_rel = 0.01 * i;
    r.h1_abs = 0.2 * i;
    r.h1_rel = 0.02 * i;
    recs.push_back(r);
  }
  const std::string path =
      (std::filesystem::temp_directory_path() / "webrec_errors_test.csv").string();
  save_errors_csv(recs, path);
  const std::vector<ErrorRecord> back = load_errors_csv(path);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].realisation == recs[i].realisation);
    CHECK(back[i].generator == recs[i].generator);
    CHECK(back[i].method == recs[i].method);
    CHECK(back[i].l2_abs == recs[i].l2_abs);
    CHECK(back[i].h1_rel == recs[i].h1_rel);
  }
  std::filesystem::remove(path);
}

}  // TEST_SUITE
