#include <doctest.h>

#include <cmath>

#include "so2zeros/limit_field.hpp"

using namespace so2zeros;

namespace {

// independent high-precision oracle values (schur complement + bivariate
// absolute moment by 2d quadrature)
constexpr double kPair1 = 0.07376759275306015;
constexpr double kPairTiny = 0.003978064178322167;

}  // namespace

TEST_SUITE("limit") {

TEST_CASE("kernel entries: value, mixed, slope blocks") {
  KernelEntries at0 = limit_kernel_entries(0.0);
  CHECK(at0.a == 1.0);
  CHECK(at0.b == 0.0);
  CHECK(at0.c == 1.0);
  KernelEntries at1 = limit_kernel_entries(1.0);
  double e = std::exp(-0.5);
  CHECK(at1.a == doctest::Approx(e).epsilon(1e-15));
  CHECK(at1.b == doctest::Approx(e).epsilon(1e-15));
  CHECK(std::abs(at1.c) < 1e-16);
  // odd symmetry of the mixed entry
  KernelEntries atm = limit_kernel_entries(-1.0);
  CHECK(atm.b == doctest::Approx(-e).epsilon(1e-15));
}

TEST_CASE("finite-degree entries approach the limit at rate 1/n") {
  const double dy = 1.0;
  KernelEntries lim = limit_kernel_entries(dy);
  double prev_err = -1.0;
  for (int n : {64, 128, 256, 512, 1024}) {
    KernelEntries fin = finite_kernel_entries(dy, n);
    double err = std::max({std::abs(fin.a - lim.a), std::abs(fin.b - lim.b),
                           std::abs(fin.c - lim.c)});
    if (prev_err > 0.0) {
      double ratio = prev_err / err;
      CHECK(ratio > 1.7);
      CHECK(ratio < 2.3);
    }
    prev_err = err;
  }
  CHECK_THROWS_AS(finite_kernel_entries(4.0, 2), ContractError);
}

TEST_CASE("kernel matrix is positive definite and blocks line up") {
  VectorXd pts(3);
  pts << -0.5, 0.4, 1.8;
  LimitKernel k = build_limit_kernel(pts);
  CHECK(k.min_eigenvalue > 0.0);
  CHECK(k.full.rows() == 6);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      KernelEntries e = limit_kernel_entries(pts[i] - pts[j]);
      CHECK(k.value_block(i, j) == doctest::Approx(e.a).epsilon(1e-15));
      CHECK(k.cross_block(i, j) == doctest::Approx(e.b).epsilon(1e-15));
      CHECK(k.slope_block(i, j) == doctest::Approx(e.c).epsilon(1e-15));
    }
  }
  VectorXd close(2);
  close << 0.0, 5e-4;
  CHECK_THROWS_AS(build_limit_kernel(close), DegeneracyError);
}

TEST_CASE("conditioning at one point: unit slope variance, gaussian prefactor") {
  VectorXd pt(1);
  pt << 0.3;
  ZeroConditional zc = condition_on_zero(build_limit_kernel(pt));
  CHECK(zc.cov(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zc.value_density ==
        doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));
  CHECK(intensity() == doctest::Approx(1.0 / kPi).epsilon(1e-16));
}

TEST_CASE("closed-form pair correlation against the frozen oracle") {
  VectorXd pts(2);
  pts << 0.0, 1.0;
  Estimate k2 = pair_intensity(build_limit_kernel(pts));
  CHECK(k2.value == doctest::Approx(kPair1).epsilon(1e-12));
  CHECK(k2.se == 0.0);

  VectorXd far(2);
  far << 0.0, 8.0;
  CHECK(pair_intensity(build_limit_kernel(far)).value ==
        doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-12));

  VectorXd tight(2);
  tight << 0.0, 0.05;
  CHECK(pair_intensity(build_limit_kernel(tight)).value ==
        doctest::Approx(kPairTiny).epsilon(1e-9));

  VectorXd three(3);
  three << 0.0, 1.0, 2.0;
  CHECK_THROWS_AS(pair_intensity(build_limit_kernel(three)), ContractError);
}

TEST_CASE("lattice-average estimate brackets the closed form") {
  VectorXd pts(2);
  pts << 0.0, 1.0;
  LimitKernel k = build_limit_kernel(pts);
  Estimate qmc = intensity_qmc(k, 100000, 2024);
  CHECK(qmc.se > 0.0);
  CHECK(qmc.se < 1e-3);
  CHECK(std::abs(qmc.value - kPair1) < 4.0 * qmc.se);
  // determinism
  Estimate again = intensity_qmc(k, 100000, 2024);
  CHECK(qmc.value == again.value);
  CHECK(qmc.se == again.se);
  CHECK_THROWS_AS(intensity_qmc(k, 100, 1), ContractError);
}

TEST_CASE("one-point lattice average reproduces the intensity") {
  VectorXd pt(1);
  pt << 0.0;
  LimitKernel k = build_limit_kernel(pt);
  Estimate got = intensity_qmc(k, 200000, 55);
  CHECK(std::abs(got.value - 1.0 / kPi) < 4.0 * got.se);
}

TEST_CASE("sampled limit zeros: windowed, ordered, audited, reproducible") {
  auto dist = CoefficientDistribution::gaussian();
  auto zs = sample_limit_zeros(-6.0, 6.0, dist, 17);
  CHECK(zs.size() < 20);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(zs[i] > -6.0);
    CHECK(zs[i] < 6.0);
    if (i > 0) CHECK(zs[i] > zs[i - 1]);
  }
  auto again = sample_limit_zeros(-6.0, 6.0, dist, 17);
  REQUIRE(zs.size() == again.size());
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(zs[i] == again[i]);

  // mean count over seeds ~ window length / pi
  double total = 0.0;
  for (std::uint64_t s = 0; s < 40; ++s)
    total += static_cast<double>(sample_limit_zeros(-6.0, 6.0, dist, s).size());
  double mean = total / 40.0;
  CHECK(mean > 12.0 / kPi - 1.5);
  CHECK(mean < 12.0 / kPi + 1.5);
}

}  // TEST_SUITE
