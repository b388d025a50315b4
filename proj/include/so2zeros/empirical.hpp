#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "so2zeros/coefficient_ensembles.hpp"
#include "so2zeros/root_engine.hpp"

namespace so2zeros {

inline constexpr int kBatches = 32;

// Uniform histogram over one of three charts: raw x, angle theta, or the
// scaled offset y = sqrt(n) * (theta - theta0).
struct BinGrid {
  enum class Coord { X, Theta, ScaledY };
  Coord coord = Coord::Theta;
  double theta0 = 0.0;  // chart center, ScaledY only
  double lo = 0.0, hi = 0.0;
  int count = 0;

  double width() const { return (hi - lo) / count; }
  double center(int bin) const { return lo + (bin + 0.5) * width(); }
  int index(double theta, double x, double sqrt_n) const;
  void validate() const;
};

// Accumulated zero-location histogram. Trials are indexed globally; the
// accumulator for trial t lives in batch t mod 32, so splitting a run and
// merging the parts reproduces the monolithic run exactly.
struct DensityEstimate {
  std::string dist_signature;
  int n = 0;
  int grid_factor = 0;
  BinGrid bins;
  std::uint64_t master_seed = 0;
  Index first_trial = 0, trials = 0;
  bool windowed_scan = false;  // zero totals cover only the scan window

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> batch_counts;
  Eigen::Matrix<std::int64_t, kBatches, 1> batch_outside;
  Eigen::Matrix<std::int64_t, kBatches, 1> batch_trials;
  Eigen::Matrix<std::int64_t, kBatches, 1> batch_zeros;
  Eigen::Matrix<std::int64_t, kBatches, 1> batch_zeros_sq;

  std::int64_t zeros_total() const { return batch_zeros.sum(); }
  // zeros per trial per unit of the bin coordinate
  Estimate density(int bin) const;
  Estimate mean_count() const;
  // share of found zeros landing in bins [bin_lo, bin_hi]
  Estimate fraction(int bin_lo, int bin_hi) const;
  // per-trial count difference between two bin ranges
  Estimate mass_difference(int lo1, int hi1, int lo2, int hi2) const;
};

DensityEstimate run_density(const CoefficientDistribution& dist, int n,
                            const BinGrid& bins, Index first_trial, Index trials,
                            std::uint64_t master_seed, int grid_factor = 20,
                            int workers = 1);

DensityEstimate merge(const DensityEstimate& a, const DensityEstimate& b);

// Product-of-counts statistics for disjoint scaled bins centered at
// theta0 + y/sqrt(n). correlation() is normalized per squared y-width, the
// same units as the limit pair intensity.
struct PairCorrelationEstimate {
  std::string dist_signature;
  int n = 0;
  int grid_factor = 0;
  double theta0 = 0.0;
  double bin_width = 0.0;  // in y units
  std::vector<std::pair<double, double>> y_pairs;
  std::uint64_t master_seed = 0;
  Index first_trial = 0, trials = 0;

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> batch_products;
  Eigen::Matrix<std::int64_t, kBatches, 1> batch_trials;

  Estimate correlation(int pair) const;
};

PairCorrelationEstimate run_pair_correlation(
    const CoefficientDistribution& dist, int n, double theta0,
    const std::vector<std::pair<double, double>>& y_pairs, double bin_width,
    Index first_trial, Index trials, std::uint64_t master_seed,
    int grid_factor = 20, int workers = 1);

PairCorrelationEstimate merge(const PairCorrelationEstimate& a,
                              const PairCorrelationEstimate& b);

}  // namespace so2zeros
