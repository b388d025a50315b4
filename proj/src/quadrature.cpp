#include "so2zeros/quadrature.hpp"

#include <cmath>

namespace so2zeros::quad {

Rule gauss_legendre(int points) {
  if (points < 2) throw ContractError("gauss_legendre: need at least 2 points");
  Rule r;
  r.x.resize(points);
  r.w.resize(points);
  int m = (points + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < points; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = points * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[points - 1 - i] = z;
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[i] = w;
    r.w[points - 1 - i] = w;
  }
  return r;
}

const Rule& gl16() {
  static const Rule r = gauss_legendre(16);
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double max_width) {
  if (!(b > a)) throw ContractError("integrate: empty interval");
  if (!(max_width > 0.0)) throw ContractError("integrate: bad panel width");
  int panels = static_cast<int>(std::ceil((b - a) / max_width));
  double h = (b - a) / panels;
  const Rule& r = gl16();
  KahanSum acc;
  for (int p = 0; p < panels; ++p)
    acc.add(panel(r, f, a + p * h, a + (p + 1) * h));
  return acc.value();
}

std::complex<double> fourier_moment(const std::function<double(double)>& rho,
                                    double a, double b, double s, int order) {
  if (!(b > a)) throw ContractError("fourier_moment: empty interval");
  double period_cap = 2.0 * kPi / (4.0 * std::max(std::abs(s), 1.0));
  double max_width = std::min((b - a) / 8.0, period_cap);
  int panels = static_cast<int>(std::ceil((b - a) / max_width));
  double h = (b - a) / panels;
  const Rule& r = gl16();
  KahanSum re, im;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h, half = 0.5 * h;
    for (Index i = 0; i < r.x.size(); ++i) {
      double t = mid + half * r.x[i];
      double v = rho(t);
      for (int k = 0; k < order; ++k) v *= t;
      v *= half * r.w[i];
      re.add(v * std::cos(s * t));
      im.add(v * std::sin(s * t));
    }
  }
  return {re.value(), im.value()};
}

}  // namespace so2zeros::quad
