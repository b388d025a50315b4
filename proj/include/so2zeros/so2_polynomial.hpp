#pragma once

#include "so2zeros/common.hpp"

namespace so2zeros {

// Cached 0.5*log C(n,k) row; built once per degree, shared by evaluators.
class BinomialRow {
 public:
  explicit BinomialRow(int n);
  int n() const { return n_; }
  double half_log(int k) const { return hl_[k]; }
  const VectorXd& data() const { return hl_; }

 private:
  int n_;
  VectorXd hl_;
};

// Unit-norm weight families at angle theta. mu carries the value of the
// normalized polynomial, nu its normalized derivative, and lambda the
// derivative component orthogonal to the value. Entries outside
// [k_lo, k_hi] fall below rel_cut * max|family| and are dropped.
struct WeightTable {
  int n = 0;
  double theta = 0.0;
  int k_lo = 0, k_hi = 0;
  VectorXd mu, nu, lambda;  // indexed by k - k_lo
  double mu_nu = 0.0;       // <mu, nu>; analytic value sqrt(n)*x/sqrt(1+n x^2)
  double mu_max = 0.0;
  // log scale factors: sd of the polynomial, sd of its derivative, and the
  // orthogonal fraction tau = sqrt(1 - mu_nu^2)
  double log_sigma = 0.0, log_zeta = 0.0, log_tau = 0.0;
};

// theta in (-pi/2, pi/2), theta != 0; the origin is served by the scaling
// limit tables below.
WeightTable build_weights(const BinomialRow& row, double theta,
                          double rel_cut = 1e-18);

struct GH {
  double g = 0.0, h = 0.0;
};

// coeffs must have size n+1; windows select the retained terms.
GH evaluate_scaled(const WeightTable& w, const VectorXd& coeffs);

// Large-deviation rate of the squared value weights at profile position
// u = k/n: rate 0 exactly at u = x^2/(1+x^2), strictly convex in u.
double theta_rate(double u, double x);
double theta_rate_curvature(double u);

// Scaling-limit weights at height y: m_k = y^k e^{-y^2/2} / sqrt(k!) and the
// orthogonal derivative family l_k = m_k (k - y^2) / y (entrywise limit of
// lambda under theta = y / sqrt(n)).
struct LimitWeightTable {
  double y = 0.0;
  int K = 0;        // modes 0..K retained
  VectorXd m, l;    // size K+1
  double tail_bound = 0.0;  // dropped mass of m^2 + l^2 beyond K
};

LimitWeightTable build_limit_weights(double y, double tail_tol = 1e-16);

GH evaluate_limit(const LimitWeightTable& t, const VectorXd& coeffs);

}  // namespace so2zeros
