#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "so2zeros/quadrature.hpp"

using namespace so2zeros;

TEST_SUITE("quadrature") {

TEST_CASE("gauss rules integrate polynomials up to degree 2m-1 exactly") {
  for (int m : {4, 8, 16}) {
    quad::Rule r = quad::gauss_legendre(m);
    CHECK(r.x.size() == m);
    double wsum = r.w.sum();
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg < 2 * m; ++deg) {
      double acc = 0.0;
      for (Index i = 0; i < r.x.size(); ++i)
        acc += r.w[i] * std::pow(r.x[i], deg);
      double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
      CHECK(acc == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("node symmetry") {
  const quad::Rule& r = quad::gl16();
  for (Index i = 0; i < 8; ++i) {
    CHECK(r.x[i] == doctest::Approx(-r.x[15 - i]).epsilon(1e-15));
    CHECK(r.w[i] == doctest::Approx(r.w[15 - i]).epsilon(1e-15));
  }
}

TEST_CASE("paneled integration matches adaptive simpson") {
  auto f = [](double t) { return std::exp(-t * t) * std::cos(3.0 * t); };
  double got = quad::integrate(f, -4.0, 5.0, 0.5);
  double want = oracle::adaptive_simpson(f, -4.0, 5.0, 1e-13);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("fourier moments match the oscillatory oracle") {
  auto rho = [](double t) { return std::exp(-0.5 * t * t); };
  for (double s : {0.0, 1.0, 7.5, 40.0}) {
    for (int order : {0, 1, 2}) {
      std::complex<double> got = quad::fourier_moment(rho, -6.0, 6.0, s, order);
      // oracle integrates rho * t^order * e^{ist} without the i^order twist
      auto dens = [&](double t) { return rho(t); };
      std::complex<double> want = oracle::char_moment(dens, 6.0, s, order);
      // char_moment multiplies by i^order; undo it to compare raw moments
      std::complex<double> i_pow(1.0, 0.0);
      for (int i = 0; i < order; ++i) i_pow *= std::complex<double>(0.0, 1.0);
      want /= i_pow;
      CHECK(std::abs(got - want) < 1e-11);
    }
  }
}

TEST_CASE("high frequency does not degrade the fourier moment") {
  // split at the kink: panels assume smoothness inside the interval
  auto rho = [](double t) { return 1.0 - std::abs(t); };
  double s = 200.0;
  std::complex<double> got = quad::fourier_moment(rho, -1.0, 0.0, s, 0) +
                             quad::fourier_moment(rho, 0.0, 1.0, s, 0);
  // triangle transform: (sin(s/2)/(s/2))^2
  double want = std::pow(std::sin(0.5 * s) / (0.5 * s), 2);
  CHECK(got.real() == doctest::Approx(want).epsilon(1e-10));
  CHECK(std::abs(got.imag()) < 1e-13);
}

}  // TEST_SUITE
