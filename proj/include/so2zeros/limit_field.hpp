#pragma once

#include <vector>

#include "so2zeros/coefficient_ensembles.hpp"

namespace so2zeros {

// Covariance entries between scaled values g and slopes h at separation
// dy = y_i - y_j: a = E g_i g_j, b = E g_i h_j, c = E h_i h_j.
struct KernelEntries {
  double a = 0.0, b = 0.0, c = 0.0;
};

KernelEntries limit_kernel_entries(double dy);
KernelEntries finite_kernel_entries(double dy, int n);

// Joint covariance of (g(y_1..m), h(y_1..m)); n = 0 selects the scaling
// limit. Points closer than min_separation make the kernel numerically
// degenerate and are rejected.
struct LimitKernel {
  VectorXd points;
  MatrixXd value_block, cross_block, slope_block;  // A, B, C
  MatrixXd full;                                   // [[A, B], [B^T, C]]
  double min_eigenvalue = 0.0;
  int n = 0;
};

LimitKernel build_limit_kernel(const VectorXd& points, int n = 0,
                               double min_separation = 1e-3);

// Slope distribution conditioned on all values vanishing.
struct ZeroConditional {
  MatrixXd cov;                 // C - B^T A^{-1} B
  double value_density = 0.0;   // gaussian density of the value vector at 0
};

ZeroConditional condition_on_zero(const LimitKernel& kernel);

// Intensity of limit zeros per unit y.
double intensity();

// Two-point zero correlation, closed form (absolute-moment identity for a
// bivariate gaussian).
Estimate pair_intensity(const LimitKernel& kernel);

// m-point correlation by a shifted-lattice average of the conditioned
// absolute moment; the error bar comes from 32 independent shifts.
Estimate intensity_qmc(const LimitKernel& kernel, Index samples,
                       std::uint64_t seed);

// One realization of limit zeros on a window. Every zero is re-refined with a
// doubled mode cutoff; movement above 1e-8 means the truncation was unsound.
std::vector<double> sample_limit_zeros(double y_lo, double y_hi,
                                       const CoefficientDistribution& dist,
                                       std::uint64_t seed);

}  // namespace so2zeros
