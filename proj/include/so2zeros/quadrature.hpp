#pragma once

#include <complex>
#include <functional>

#include "so2zeros/common.hpp"

namespace so2zeros::quad {

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct Rule {
  VectorXd x, w;
};

// Nodes by Newton iteration on the Legendre recurrence.
Rule gauss_legendre(int points);

const Rule& gl16();

template <class F>
double panel(const Rule& r, F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (Index i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
  return half * acc;
}

// Integrates f over [a, b] with panels no wider than max_width.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double max_width);

// Fourier moment: integral of rho(t) * t^order * exp(i s t) over [a, b].
// Panels are kept under a quarter oscillation period.
std::complex<double> fourier_moment(const std::function<double(double)>& rho,
                                    double a, double b, double s, int order);

}  // namespace so2zeros::quad
