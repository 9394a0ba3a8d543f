#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "webrec/rng.hpp"
#include "webrec/simd/kernels.hpp"

using namespace webrec;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar and dispatched variants agree") {
  const auto& scalar = simd::detail::scalar_table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 257u, 1000u}) {
    const std::vector<double> x = random_vec(n, 11 + n);
    const std::vector<double> y = random_vec(n, 31 + n);

    // Reductions: same values up to summation order.
    const double d_ref = scalar.dot(x.data(), y.data(), n);
    const double d_act = simd::dot(x.data(), y.data(), n);
    CHECK(std::abs(d_act - d_ref) <=
          1e-13 * (1.0 + static_cast<double>(n)) * (std::abs(d_ref) + 1.0));
    const double r_ref = scalar.dot_rev(x.data(), y.data(), n);
    const double r_act = simd::dot_rev(x.data(), y.data(), n);
    CHECK(std::abs(r_act - r_ref) <=
          1e-13 * (1.0 + static_cast<double>(n)) * (std::abs(r_ref) + 1.0));

    // Elementwise kernels: bit-identical (one rounding per element both ways).
    std::vector<double> a = y, b = y;
    scalar.axpy(0.7, x.data(), a.data(), n);
    simd::axpy(0.7, x.data(), b.data(), n);
    CHECK(a == b);

    a = y;
    b = y;
    scalar.axpy_rev(-1.3, x.data(), a.data(), n);
    simd::axpy_rev(-1.3, x.data(), b.data(), n);
    CHECK(a == b);

    a = y;
    b = y;
    scalar.scal(0.9, a.data(), n);
    simd::scal(0.9, b.data(), n);
    CHECK(a == b);
  }
}

TEST_CASE("dot_rev matches reversed dot") {
  const std::vector<double> x = random_vec(37, 5);
  const std::vector<double> y = random_vec(37, 6);
  std::vector<double> xr(x.rbegin(), x.rend());
  const double a = simd::dot_rev(x.data(), y.data(), x.size());
  const double b = simd::dot(xr.data(), y.data(), x.size());
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("force_scalar pins the reference path") {
  simd::force_scalar(true);
  CHECK(std::string(simd::active_isa()) == "scalar");
  simd::force_scalar(false);
  INFO("active ISA: ", simd::active_isa());
  CHECK((std::string(simd::active_isa()) == "scalar" ||
         std::string(simd::active_isa()) == "avx2+fma"));
}

}  // TEST_SUITE
