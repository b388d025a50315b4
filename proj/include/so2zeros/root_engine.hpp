#pragma once

#include <vector>

#include "so2zeros/so2_polynomial.hpp"

namespace so2zeros {

struct ZeroSample {
  int n = 0;
  std::uint64_t seed = 0;  // filled by callers that know the draw
  double grid_step = 0.0;
  std::vector<double> theta;     // ascending, in (-pi/2, pi/2]
  std::vector<double> x;         // tan(theta)
  std::vector<double> residual;  // |normalized value| at the refined angle
};

// Unnormalized value of the scaled polynomial at theta in (-pi/2, pi/2);
// shares zeros and signs with the normalized value. norm_out, when given,
// receives the scale needed to normalize: value/norm has unit variance.
double raw_value(const BinomialRow& row, const VectorXd& coeffs, double theta,
                 double* norm_out = nullptr);

// Sign-change scan at angular resolution pi/(grid_factor*sqrt(n)) followed by
// bracketed Illinois refinement. The full-chart scanner closes the circle
// through +-pi/2 using the parity of the degree.
class RootScanner {
 public:
  RootScanner(const BinomialRow& row, int grid_factor = 20);
  RootScanner(const BinomialRow& row, double theta_lo, double theta_hi,
              int grid_factor = 20);

  ZeroSample find_zeros(const VectorXd& coeffs) const;
  double step() const { return h_; }
  Index node_count() const { return static_cast<Index>(node_theta_.size()); }
  int n() const { return row_.n(); }

 private:
  void build_nodes();
  double node_value(const VectorXd& coeffs, Index i) const;

  BinomialRow row_;
  bool full_;
  double lo_ = 0.0, hi_ = 0.0, h_ = 0.0;
  std::vector<double> node_theta_;
  std::vector<int> node_klo_;
  std::vector<VectorXd> node_w_;
};

// Rescans with a doubled grid factor and reports zeros present only there.
struct GridAudit {
  int base_count = 0;
  int fine_count = 0;
  std::vector<double> missed_theta;
};

GridAudit audit_grid(const BinomialRow& row, const VectorXd& coeffs,
                     int grid_factor = 20);

}  // namespace so2zeros
