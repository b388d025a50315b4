#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "so2zeros/coefficient_ensembles.hpp"
#include "so2zeros/root_engine.hpp"

using namespace so2zeros;

namespace {

VectorXd draw(const CoefficientDistribution& d, int n, std::uint64_t seed) {
  return d.sample(n + 1, seed);
}

}  // namespace

TEST_SUITE("roots") {

TEST_CASE("factored quadratic: zeros at both diagonal angles") {
  BinomialRow row(2);
  VectorXd c(3);
  c << 1.0, 0.0, -1.0;  // 1 - x^2 after weighting
  RootScanner scanner(row);
  ZeroSample z = scanner.find_zeros(c);
  REQUIRE(z.theta.size() == 2);
  CHECK(z.theta[0] == doctest::Approx(-kPi / 4.0).epsilon(1e-12));
  CHECK(z.theta[1] == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(z.x[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(z.x[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : z.residual) CHECK(r < 1e-10);
}

TEST_CASE("degree one: single zero at -a/b including steep angles") {
  BinomialRow row(1);
  for (double a : {0.3, -1.7}) {
    for (double b : {1.0, 0.02, -0.6}) {
      VectorXd c(2);
      c << a, b;
      RootScanner scanner(row);
      ZeroSample z = scanner.find_zeros(c);
      REQUIRE(z.theta.size() == 1);
      CHECK(z.x[0] == doctest::Approx(-a / b).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero count parity matches the degree") {
  auto dist = CoefficientDistribution::gaussian();
  for (int n : {5, 16, 63}) {
    BinomialRow row(n);
    RootScanner scanner(row);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      ZeroSample z = scanner.find_zeros(draw(dist, n, seed));
      CHECK(static_cast<int>(z.theta.size()) % 2 == n % 2);
    }
  }
}

TEST_CASE("negating all coefficients leaves the zero set untouched") {
  auto dist = CoefficientDistribution::uniform();
  BinomialRow row(48);
  RootScanner scanner(row);
  VectorXd c = draw(dist, 48, 11);
  ZeroSample a = scanner.find_zeros(c);
  ZeroSample b = scanner.find_zeros((-c).eval());
  REQUIRE(a.theta.size() == b.theta.size());
  for (std::size_t i = 0; i < a.theta.size(); ++i)
    CHECK(a.theta[i] == b.theta[i]);
}

TEST_CASE("reversing coefficients reciprocates every zero") {
  auto dist = CoefficientDistribution::gaussian();
  const int n = 40;
  BinomialRow row(n);
  RootScanner scanner(row);
  VectorXd c = draw(dist, n, 23);
  VectorXd r = c.reverse().eval();  // sqrt-binomial weights are palindromic
  ZeroSample zc = scanner.find_zeros(c);
  ZeroSample zr = scanner.find_zeros(r);
  REQUIRE(zc.theta.size() == zr.theta.size());
  std::vector<double> mapped;
  for (double x : zc.x) mapped.push_back(std::atan(1.0 / x));
  std::sort(mapped.begin(), mapped.end());
  for (std::size_t i = 0; i < mapped.size(); ++i)
    CHECK(zr.theta[i] == doctest::Approx(mapped[i]).epsilon(1e-9));
}

TEST_CASE("windowed scan reproduces the full scan inside its window") {
  auto dist = CoefficientDistribution::gaussian();
  const int n = 64;
  BinomialRow row(n);
  RootScanner full(row);
  RootScanner windowed(row, 0.35, 1.05);
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    VectorXd c = draw(dist, n, seed);
    ZeroSample zf = full.find_zeros(c);
    ZeroSample zw = windowed.find_zeros(c);
    std::vector<double> inside;
    for (double t : zf.theta)
      if (t > 0.35 && t < 1.05) inside.push_back(t);
    REQUIRE(zw.theta.size() == inside.size());
    for (std::size_t i = 0; i < inside.size(); ++i)
      CHECK(zw.theta[i] == doctest::Approx(inside[i]).epsilon(1e-11));
  }
}

TEST_CASE("refinement residuals stay tiny across laws and degrees") {
  for (const char* name : {"gaussian", "uniform", "quartic"}) {
    auto dist = CoefficientDistribution::from_name(name);
    for (int n : {32, 128}) {
      BinomialRow row(n);
      RootScanner scanner(row);
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        ZeroSample z = scanner.find_zeros(draw(dist, n, seed));
        for (double r : z.residual) CHECK(r < 1e-10);
        CHECK(std::is_sorted(z.theta.begin(), z.theta.end()));
      }
    }
  }
}

TEST_CASE("a doubled grid finds nothing new") {
  auto dist = CoefficientDistribution::quartic();
  for (int n : {64, 256}) {
    BinomialRow row(n);
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
      GridAudit audit = audit_grid(row, draw(dist, n, seed));
      CHECK(audit.missed_theta.empty());
      CHECK(audit.fine_count == audit.base_count);
    }
  }
}

TEST_CASE("scanner contracts") {
  BinomialRow row(16);
  CHECK_THROWS_AS(RootScanner(row, 0.9, 0.2), ContractError);
  CHECK_THROWS_AS(RootScanner(row, -2.0, 0.5), ContractError);
  RootScanner scanner(row);
  VectorXd wrong(5);
  wrong.setOnes();
  CHECK_THROWS_AS(scanner.find_zeros(wrong), ContractError);
}

TEST_CASE("deterministic output for identical input") {
  auto dist = CoefficientDistribution::uniform();
  BinomialRow row(80);
  RootScanner scanner(row);
  VectorXd c = draw(dist, 80, 5);
  ZeroSample a = scanner.find_zeros(c);
  ZeroSample b = scanner.find_zeros(c);
  REQUIRE(a.theta.size() == b.theta.size());
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    CHECK(a.theta[i] == b.theta[i]);
    CHECK(a.residual[i] == b.residual[i]);
  }
}

}  // TEST_SUITE
