#include "so2zeros/so2_polynomial.hpp"

#include <cmath>

namespace so2zeros {

BinomialRow::BinomialRow(int n) : n_(n) {
  if (n < 0) throw ContractError("BinomialRow: negative degree");
  hl_.resize(n + 1);
  long double acc = 0.0L;
  hl_[0] = 0.0;
  for (int k = 0; k + 1 <= n; ++k) {
    acc += logl(static_cast<long double>(n - k)) -
           logl(static_cast<long double>(k + 1));
    hl_[k + 1] = 0.5 * static_cast<double>(acc);
  }
}

WeightTable build_weights(const BinomialRow& row, double theta, double rel_cut) {
  const int n = row.n();
  if (n < 1) throw ContractError("build_weights: degree must be >= 1");
  if (!(theta > -0.5 * kPi && theta < 0.5 * kPi) || theta == 0.0)
    throw ContractError("build_weights: theta must lie in (-pi/2, pi/2), nonzero");
  if (!(rel_cut > 0.0 && rel_cut < 1.0))
    throw ContractError("build_weights: rel_cut must lie in (0,1)");

  const double s = std::sin(theta), c = std::cos(theta);
  const double ls = std::log(std::abs(s)), lc = std::log(c);
  const double u0 = s * s;
  const double sq = c * c + static_cast<double>(n) * s * s;

  VectorXd lmu(n + 1), lnu(n + 1), lla(n + 1);
  double mmu = -std::numeric_limits<double>::infinity();
  double mnu = mmu, mla = mmu;
  for (int k = 0; k <= n; ++k) {
    double base = row.half_log(k) + k * ls + (n - k) * lc;
    double u = static_cast<double>(k) / n;
    lmu[k] = base;
    lnu[k] = k == 0 ? -std::numeric_limits<double>::infinity()
                    : base + std::log(static_cast<double>(k));
    double du = std::abs(u - u0);
    lla[k] = du == 0.0 ? -std::numeric_limits<double>::infinity()
                       : base + std::log(du);
    mmu = std::max(mmu, lmu[k]);
    mnu = std::max(mnu, lnu[k]);
    mla = std::max(mla, lla[k]);
  }

  const double drop = std::log(rel_cut);
  int k_lo = n + 1, k_hi = -1;
  for (int k = 0; k <= n; ++k) {
    bool keep = lmu[k] - mmu >= drop || lnu[k] - mnu >= drop ||
                lla[k] - mla >= drop;
    if (keep) {
      k_lo = std::min(k_lo, k);
      k_hi = std::max(k_hi, k);
    }
  }

  WeightTable w;
  w.n = n;
  w.theta = theta;
  w.k_lo = k_lo;
  w.k_hi = k_hi;
  const int len = k_hi - k_lo + 1;
  w.mu.setZero(len);
  w.nu.setZero(len);
  w.lambda.setZero(len);

  const double sgn_s = s < 0.0 ? -1.0 : 1.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    double par = (s < 0.0 && (k & 1)) ? -1.0 : 1.0;
    double u = static_cast<double>(k) / n;
    int i = k - k_lo;
    if (lmu[k] - mmu >= drop) w.mu[i] = par * std::exp(lmu[k] - mmu);
    if (lnu[k] - mnu >= drop) w.nu[i] = par * sgn_s * std::exp(lnu[k] - mnu);
    if (lla[k] - mla >= drop) {
      double sg = (u > u0 ? 1.0 : -1.0) * sgn_s;
      w.lambda[i] = par * sg * std::exp(lla[k] - mla);
    }
  }

  auto normalize = [len](VectorXd& v) {
    KahanSum q;
    for (Index i = 0; i < len; ++i) q.add(v[i] * v[i]);
    double norm = std::sqrt(q.value());
    if (!(norm > 0.0)) throw NumericError("build_weights: empty weight family");
    v /= norm;
  };
  normalize(w.mu);
  normalize(w.nu);
  normalize(w.lambda);

  KahanSum dot;
  for (Index i = 0; i < len; ++i) dot.add(w.mu[i] * w.nu[i]);
  w.mu_nu = dot.value();
  w.mu_max = w.mu.cwiseAbs().maxCoeff();

  w.log_sigma = -static_cast<double>(n) * lc;
  w.log_zeta = 0.5 * std::log(static_cast<double>(n)) + 0.5 * std::log(sq) -
               static_cast<double>(n - 1) * lc;
  w.log_tau = lc - 0.5 * std::log(sq);
  return w;
}

GH evaluate_scaled(const WeightTable& w, const VectorXd& coeffs) {
  if (coeffs.size() != w.n + 1)
    throw ContractError("evaluate_scaled: coefficient count must be n+1");
  KahanSum g, h;
  for (int k = w.k_lo; k <= w.k_hi; ++k) {
    g.add(w.mu[k - w.k_lo] * coeffs[k]);
    h.add(w.lambda[k - w.k_lo] * coeffs[k]);
  }
  return {g.value(), h.value()};
}

double theta_rate(double u, double x) {
  if (!(u > 0.0 && u < 1.0)) throw ContractError("theta_rate: u must lie in (0,1)");
  if (x == 0.0) throw ContractError("theta_rate: x must be nonzero");
  double x2 = x * x;
  return u * std::log(u) + (1.0 - u) * std::log1p(-u) + std::log1p(x2) -
         u * std::log(x2);
}

double theta_rate_curvature(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw ContractError("theta_rate_curvature: u must lie in (0,1)");
  return 1.0 / (u * (1.0 - u));
}

LimitWeightTable build_limit_weights(double y, double tail_tol) {
  if (!(tail_tol > 0.0)) throw ContractError("build_limit_weights: bad tolerance");
  LimitWeightTable t;
  t.y = y;
  double ay = std::abs(y);
  int K = static_cast<int>(std::ceil(y * y + 12.0 * ay + 40.0));

  auto log_m = [y](int k) {
    return k * std::log(std::abs(y)) - 0.5 * y * y - 0.5 * std::lgamma(k + 1.0);
  };
  auto tail_beyond = [&](int kk) {
    if (y == 0.0) return 0.0;
    KahanSum tb;
    for (int k = kk + 1; k <= kk + 600; ++k) {
      double m = std::exp(log_m(k));
      double l = m * (k - y * y) / y;
      double term = m * m + l * l;
      tb.add(term);
      if (term < 1e-320) break;
    }
    return tb.value();
  };
  while (tail_beyond(K) > tail_tol) K += 16;
  t.K = K;
  t.tail_bound = tail_beyond(K);

  t.m.setZero(K + 1);
  t.l.setZero(K + 1);
  if (y == 0.0) {
    t.m[0] = 1.0;
    t.l[1] = 1.0;
    return t;
  }
  for (int k = 0; k <= K; ++k) {
    double par = (y < 0.0 && (k & 1)) ? -1.0 : 1.0;
    double m = par * std::exp(log_m(k));
    t.m[k] = m;
    t.l[k] = m * (k - y * y) / y;
  }
  return t;
}

GH evaluate_limit(const LimitWeightTable& t, const VectorXd& coeffs) {
  if (coeffs.size() < t.K + 1)
    throw ContractError("evaluate_limit: need at least K+1 coefficients");
  KahanSum g, h;
  for (int k = 0; k <= t.K; ++k) {
    g.add(t.m[k] * coeffs[k]);
    h.add(t.l[k] * coeffs[k]);
  }
  return {g.value(), h.value()};
}

}  // namespace so2zeros
