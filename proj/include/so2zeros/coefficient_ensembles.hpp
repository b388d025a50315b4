#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "so2zeros/common.hpp"

namespace so2zeros {

enum class CoefficientLaw { Gaussian, Uniform, Quartic, Custom };

// All laws are standardized: mean 0, variance 1.
struct MomentSummary {
  double mean = 0.0;
  double variance = 1.0;
  double abs_mean = 0.0;         // E|c|
  double density_at_zero = 0.0;  // value of the coefficient density at 0
};

// Measured decay properties of the characteristic function on a test grid.
struct ConditionReport {
  double envelope_exponent = 0.0;  // tail decay power of |phi|, capped at 64
  double power_a = 0.0;            // |phi(s)| <= (1 + a s^2)^(-q) on the grid
  double power_q = 0.0;
  bool power_holds = false;
  double sextic_a = 0.0;  // |phi(s)| <= (1 + a|s|)^(-6); needs exponent >= 6
  bool sextic_holds = false;
  double sup_d2 = 0.0;  // sup |phi''|
  double sup_d3 = 0.0;  // sup |phi'''|
};

// A symmetric-or-skewed coefficient law with density, characteristic function,
// moments, and a reproducible sampler. Copies share immutable state.
class CoefficientDistribution {
 public:
  static CoefficientDistribution gaussian();
  static CoefficientDistribution uniform();
  static CoefficientDistribution quartic();
  // Piecewise-linear density on ascending knots; recentred and rescaled to
  // mean 0, variance 1. The applied affine map is exposed via shift()/scale().
  static CoefficientDistribution custom(const VectorXd& knots,
                                        const VectorXd& values,
                                        std::string label = "custom");
  static CoefficientDistribution from_name(std::string_view name);

  CoefficientLaw law() const;
  const std::string& name() const;
  // Distinguishes parameterizations for merge compatibility and manifests.
  const std::string& signature() const;

  double shift() const;
  double scale() const;

  double density(double t) const;
  double cdf(double t) const;
  // phi(s) = E exp(i s c) and derivatives (order <= 3).
  std::complex<double> char_fn(double s, int order = 0) const;
  // |t| beyond which the density is numerically zero.
  double support_halfwidth() const;
  const MomentSummary& moments() const;

  // count iid draws; identical (count, seed) gives identical output.
  VectorXd sample(Index count, std::uint64_t seed) const;

  // Ensures char_fn(s) is table-backed and lock-free for |s| <= s_max.
  void prime_char_table(double s_max) const;

  // Law-specialized phi evaluator for tight loops; prime_char_table first so
  // table-backed laws never fall back to direct quadrature.
  std::function<std::complex<double>(double)> char_eval() const;

  ConditionReport verify_conditions(double s_max = 50.0,
                                    Index grid_points = 5000) const;

 private:
  struct Impl;
  explicit CoefficientDistribution(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace so2zeros
