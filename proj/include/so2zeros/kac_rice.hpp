#pragma once

#include <complex>

#include "so2zeros/coefficient_ensembles.hpp"
#include "so2zeros/so2_polynomial.hpp"

namespace so2zeros {

struct SpectralGridConfig {
  double cutoff = 12.0;       // half-width of the alpha/beta square
  int size = 512;             // points per axis, even
  int max_doublings = 3;      // cutoff and size double together
  double boundary_tol = 1e-12;
  int workers = 1;
};

// Characteristic function of the scaled value/slope pair on a square grid.
struct SpectralGrid {
  VectorXd axis;      // shared coordinates, axis[i] = -cutoff + i * delta
  MatrixXcd phi;      // phi(i, j) at (alpha_i, beta_j)
  double cutoff = 0.0;
  int doublings = 0;
  double boundary_max = 0.0;  // max |phi| on the outermost ring
};

// w_value/w_slope are the matched weight families (mu/lambda for finite
// degree, m/l in the scaling limit). Doubling the cutoff halves the slice
// spacing and keeps its range fixed; if the boundary still exceeds
// boundary_tol after max_doublings the product decays too slowly.
SpectralGrid build_spectral_grid(const VectorXd& w_value, const VectorXd& w_slope,
                                 const CoefficientDistribution& dist,
                                 const SpectralGridConfig& cfg = {});

// Joint density of (value, slope) restricted to value = 0, as a function of
// the slope coordinate eta.
struct JointDensitySlice {
  VectorXd eta, values;
  double delta_eta = 0.0;
  double center = 0.0;         // value at eta = 0
  double imag_residual = 0.0;  // max |Im| discarded by the inversion
  double tail_constant = 0.0;  // sup |D|(1+|eta|)^3 over the outer window
};

JointDensitySlice invert_slice(const SpectralGrid& grid);

// integral of |eta| times the slice: endpoint-kink corrected trapezoid plus a
// cubic-decay estimate for the truncated tail
double absolute_moment(const JointDensitySlice& slice);

// Density of real zeros per unit of scaled coordinate. kac_rice_density is
// per x over sqrt(n); crossover_density is per y = sqrt(n) * x near the
// origin; both converge to 1/pi at the gaussian law.
double kac_rice_density(const BinomialRow& row, double theta,
                        const CoefficientDistribution& dist,
                        const SpectralGridConfig& cfg = {});
double origin_density(const CoefficientDistribution& dist);
double crossover_density(double y, const CoefficientDistribution& dist,
                         const SpectralGridConfig& cfg = {});

struct DecayAudit {
  double quad_a0 = 0.0;  // |phi| <= (1 + a0 |gamma|^2)^(-2) everywhere
  bool quad_holds = false;
  double deriv_c1 = 0.0, deriv_c2 = 0.0;  // slope-derivative envelopes
  double slice_constant = 0.0;  // sup |D|(1+|eta|)^3 over the full slice
  bool slice_holds = false;     // sup not carried by the outer edge
};

DecayAudit decay_audit(const SpectralGrid& grid, const JointDensitySlice& slice);

}  // namespace so2zeros
