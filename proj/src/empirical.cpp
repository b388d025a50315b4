#include "so2zeros/empirical.hpp"

#include <cmath>
#include <mutex>

namespace so2zeros {
namespace {

Estimate batch_rate_estimate(
    const Eigen::Matrix<std::int64_t, kBatches, 1>& counts,
    const Eigen::Matrix<std::int64_t, kBatches, 1>& trials, double scale) {
  double total_c = 0.0, total_t = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    total_c += static_cast<double>(counts[b]);
    total_t += static_cast<double>(trials[b]);
  }
  Estimate e;
  e.value = total_c / total_t * scale;
  double mean = 0.0;
  int used = 0;
  VectorXd rates(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    if (trials[b] == 0) continue;
    rates[used] =
        static_cast<double>(counts[b]) / static_cast<double>(trials[b]) * scale;
    mean += rates[used];
    ++used;
  }
  if (used < 8) throw ContractError("estimate: too few populated batches");
  mean /= used;
  double var = 0.0;
  for (int b = 0; b < used; ++b) var += (rates[b] - mean) * (rates[b] - mean);
  var /= (used - 1);
  e.se = std::sqrt(var / used);
  return e;
}

}  // namespace

int BinGrid::index(double theta, double x, double sqrt_n) const {
  double v;
  switch (coord) {
    case Coord::X: v = x; break;
    case Coord::Theta: v = theta; break;
    default: v = (theta - theta0) * sqrt_n; break;
  }
  if (v < lo || v >= hi) return -1;
  int b = static_cast<int>((v - lo) / width());
  return b >= count ? count - 1 : b;
}

void BinGrid::validate() const {
  if (!(hi > lo)) throw ContractError("BinGrid: empty range");
  if (count < 1) throw ContractError("BinGrid: need at least one bin");
  if (coord == Coord::ScaledY &&
      !(theta0 > -0.5 * kPi && theta0 < 0.5 * kPi))
    throw ContractError("BinGrid: chart center outside (-pi/2, pi/2)");
}

Estimate DensityEstimate::density(int bin) const {
  if (bin < 0 || bin >= bins.count)
    throw ContractError("density: bin out of range");
  Eigen::Matrix<std::int64_t, kBatches, 1> col = batch_counts.col(bin);
  return batch_rate_estimate(col, batch_trials, 1.0 / bins.width());
}

Estimate DensityEstimate::mean_count() const {
  return batch_rate_estimate(batch_zeros, batch_trials, 1.0);
}

Estimate DensityEstimate::fraction(int bin_lo, int bin_hi) const {
  if (bin_lo < 0 || bin_hi >= bins.count || bin_lo > bin_hi)
    throw ContractError("fraction: bad bin range");
  Eigen::Matrix<std::int64_t, kBatches, 1> inside =
      Eigen::Matrix<std::int64_t, kBatches, 1>::Zero();
  for (int b = bin_lo; b <= bin_hi; ++b) inside += batch_counts.col(b);
  // ratio per batch; zeros_total weighting for the point value
  double total_in = static_cast<double>(inside.sum());
  double total_all = static_cast<double>(batch_zeros.sum());
  Estimate e;
  e.value = total_in / total_all;
  VectorXd fr(kBatches);
  int used = 0;
  double mean = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    if (batch_zeros[b] == 0) continue;
    fr[used] = static_cast<double>(inside[b]) / static_cast<double>(batch_zeros[b]);
    mean += fr[used];
    ++used;
  }
  if (used < 8) throw ContractError("fraction: too few populated batches");
  mean /= used;
  double var = 0.0;
  for (int b = 0; b < used; ++b) var += (fr[b] - mean) * (fr[b] - mean);
  var /= (used - 1);
  e.se = std::sqrt(var / used);
  return e;
}

Estimate DensityEstimate::mass_difference(int lo1, int hi1, int lo2,
                                          int hi2) const {
  if (lo1 < 0 || hi1 >= bins.count || lo1 > hi1 || lo2 < 0 ||
      hi2 >= bins.count || lo2 > hi2)
    throw ContractError("mass_difference: bad bin ranges");
  Eigen::Matrix<std::int64_t, kBatches, 1> diff =
      Eigen::Matrix<std::int64_t, kBatches, 1>::Zero();
  for (int b = lo1; b <= hi1; ++b) diff += batch_counts.col(b);
  for (int b = lo2; b <= hi2; ++b) diff -= batch_counts.col(b);
  return batch_rate_estimate(diff, batch_trials, 1.0);
}

namespace {

RootScanner make_scanner(const BinomialRow& row, const BinGrid& bins,
                         int grid_factor, bool* windowed) {
  *windowed = bins.coord == BinGrid::Coord::ScaledY;
  if (!*windowed) return RootScanner(row, grid_factor);
  double sq = std::sqrt(static_cast<double>(row.n()));
  double h = kPi / (grid_factor * sq);
  double lo = bins.theta0 + bins.lo / sq - 3.0 * h;
  double hi = bins.theta0 + bins.hi / sq + 3.0 * h;
  double edge = 0.5 * kPi - 1e-9;
  lo = std::max(lo, -edge);
  hi = std::min(hi, edge);
  if (!(hi > lo))
    throw ContractError("run_density: scaled window leaves the chart");
  return RootScanner(row, lo, hi, grid_factor);
}

}  // namespace

DensityEstimate run_density(const CoefficientDistribution& dist, int n,
                            const BinGrid& bins, Index first_trial, Index trials,
                            std::uint64_t master_seed, int grid_factor,
                            int workers) {
  bins.validate();
  if (n < 1) throw ContractError("run_density: n must be >= 1");
  if (trials < 64) throw ContractError("run_density: need at least 64 trials");
  if (first_trial < 0) throw ContractError("run_density: negative trial offset");

  BinomialRow row(n);
  bool windowed = false;
  RootScanner scanner = make_scanner(row, bins, grid_factor, &windowed);
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  DensityEstimate est;
  est.dist_signature = dist.signature();
  est.n = n;
  est.grid_factor = grid_factor;
  est.bins = bins;
  est.master_seed = master_seed;
  est.first_trial = first_trial;
  est.trials = trials;
  est.windowed_scan = windowed;
  est.batch_counts.setZero(kBatches, bins.count);
  est.batch_outside.setZero();
  est.batch_trials.setZero();
  est.batch_zeros.setZero();
  est.batch_zeros_sq.setZero();

  std::mutex merge_mu;
  parallel_blocks(trials, workers, [&](Index t_lo, Index t_hi) {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(
            kBatches, bins.count);
    Eigen::Matrix<std::int64_t, kBatches, 1> outside, btrials, zeros, zeros_sq;
    outside.setZero();
    btrials.setZero();
    zeros.setZero();
    zeros_sq.setZero();
    for (Index t = t_lo; t < t_hi; ++t) {
      std::uint64_t global = static_cast<std::uint64_t>(first_trial + t);
      int batch = static_cast<int>(global % kBatches);
      VectorXd coeffs = dist.sample(n + 1, trial_seed(master_seed, global));
      ZeroSample zs = scanner.find_zeros(coeffs);
      std::int64_t found = static_cast<std::int64_t>(zs.theta.size());
      btrials[batch] += 1;
      zeros[batch] += found;
      zeros_sq[batch] += found * found;
      for (std::size_t z = 0; z < zs.theta.size(); ++z) {
        int b = bins.index(zs.theta[z], zs.x[z], sqrt_n);
        if (b < 0)
          outside[batch] += 1;
        else
          counts(batch, b) += 1;
      }
    }
    std::lock_guard<std::mutex> lk(merge_mu);
    est.batch_counts += counts;
    est.batch_outside += outside;
    est.batch_trials += btrials;
    est.batch_zeros += zeros;
    est.batch_zeros_sq += zeros_sq;
  });
  return est;
}

DensityEstimate merge(const DensityEstimate& a, const DensityEstimate& b) {
  bool compatible = a.dist_signature == b.dist_signature && a.n == b.n &&
                    a.grid_factor == b.grid_factor &&
                    a.master_seed == b.master_seed &&
                    a.bins.coord == b.bins.coord && a.bins.lo == b.bins.lo &&
                    a.bins.hi == b.bins.hi && a.bins.count == b.bins.count &&
                    a.bins.theta0 == b.bins.theta0;
  if (!compatible) throw ContractError("merge: incompatible density runs");
  if (a.first_trial + a.trials != b.first_trial)
    throw ContractError("merge: trial ranges must be contiguous");
  DensityEstimate out = a;
  out.trials += b.trials;
  out.batch_counts += b.batch_counts;
  out.batch_outside += b.batch_outside;
  out.batch_trials += b.batch_trials;
  out.batch_zeros += b.batch_zeros;
  out.batch_zeros_sq += b.batch_zeros_sq;
  return out;
}

Estimate PairCorrelationEstimate::correlation(int pair) const {
  if (pair < 0 || pair >= static_cast<int>(y_pairs.size()))
    throw ContractError("correlation: pair out of range");
  Eigen::Matrix<std::int64_t, kBatches, 1> col = batch_products.col(pair);
  return batch_rate_estimate(col, batch_trials,
                             1.0 / (bin_width * bin_width));
}

PairCorrelationEstimate run_pair_correlation(
    const CoefficientDistribution& dist, int n, double theta0,
    const std::vector<std::pair<double, double>>& y_pairs, double bin_width,
    Index first_trial, Index trials, std::uint64_t master_seed, int grid_factor,
    int workers) {
  if (n < 1) throw ContractError("run_pair_correlation: n must be >= 1");
  if (trials < 64)
    throw ContractError("run_pair_correlation: need at least 64 trials");
  if (!(bin_width > 0.0))
    throw ContractError("run_pair_correlation: bin width must be positive");
  if (y_pairs.empty())
    throw ContractError("run_pair_correlation: no separations given");
  const double delta_guard = 0.1;
  if (!(theta0 > delta_guard && theta0 < 0.5 * kPi - delta_guard))
    throw ContractError(
        "run_pair_correlation: chart center must keep a 0.1 margin inside "
        "(0, pi/2)");

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double y_min = y_pairs[0].first, y_max = y_pairs[0].first;
  for (const auto& [y1, y2] : y_pairs) {
    if (std::abs(y1 - y2) < bin_width * (1.0 + 1e-12))
      throw ContractError("run_pair_correlation: bins overlap");
    y_min = std::min({y_min, y1, y2});
    y_max = std::max({y_max, y1, y2});
  }
  double margin = 0.5 * bin_width;
  double th_lo = theta0 + (y_min - margin) / sqrt_n;
  double th_hi = theta0 + (y_max + margin) / sqrt_n;
  if (!(th_lo > -0.5 * kPi && th_hi < 0.5 * kPi))
    throw ContractError("run_pair_correlation: bins leave the chart");

  BinomialRow row(n);
  double h = kPi / (grid_factor * sqrt_n);
  RootScanner scanner(row, std::max(th_lo - 3.0 * h, -0.5 * kPi + 1e-9),
                      std::min(th_hi + 3.0 * h, 0.5 * kPi - 1e-9), grid_factor);

  PairCorrelationEstimate est;
  est.dist_signature = dist.signature();
  est.n = n;
  est.grid_factor = grid_factor;
  est.theta0 = theta0;
  est.bin_width = bin_width;
  est.y_pairs = y_pairs;
  est.master_seed = master_seed;
  est.first_trial = first_trial;
  est.trials = trials;
  est.batch_products.setZero(kBatches, static_cast<Index>(y_pairs.size()));
  est.batch_trials.setZero();

  std::mutex merge_mu;
  parallel_blocks(trials, workers, [&](Index t_lo, Index t_hi) {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> products =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(
            kBatches, static_cast<Index>(y_pairs.size()));
    Eigen::Matrix<std::int64_t, kBatches, 1> btrials;
    btrials.setZero();
    for (Index t = t_lo; t < t_hi; ++t) {
      std::uint64_t global = static_cast<std::uint64_t>(first_trial + t);
      int batch = static_cast<int>(global % kBatches);
      VectorXd coeffs = dist.sample(n + 1, trial_seed(master_seed, global));
      ZeroSample zs = scanner.find_zeros(coeffs);
      btrials[batch] += 1;
      for (std::size_t p = 0; p < y_pairs.size(); ++p) {
        double c1 = theta0 + y_pairs[p].first / sqrt_n;
        double c2 = theta0 + y_pairs[p].second / sqrt_n;
        double half = 0.5 * bin_width / sqrt_n;
        std::int64_t n1 = 0, n2 = 0;
        for (double th : zs.theta) {
          if (std::abs(th - c1) < half) ++n1;
          if (std::abs(th - c2) < half) ++n2;
        }
        products(batch, static_cast<Index>(p)) += n1 * n2;
      }
    }
    std::lock_guard<std::mutex> lk(merge_mu);
    est.batch_products += products;
    est.batch_trials += btrials;
  });
  return est;
}

PairCorrelationEstimate merge(const PairCorrelationEstimate& a,
                              const PairCorrelationEstimate& b) {
  bool compatible = a.dist_signature == b.dist_signature && a.n == b.n &&
                    a.grid_factor == b.grid_factor && a.theta0 == b.theta0 &&
                    a.bin_width == b.bin_width && a.y_pairs == b.y_pairs &&
                    a.master_seed == b.master_seed;
  if (!compatible)
    throw ContractError("merge: incompatible pair-correlation runs");
  if (a.first_trial + a.trials != b.first_trial)
    throw ContractError("merge: trial ranges must be contiguous");
  PairCorrelationEstimate out = a;
  out.trials += b.trials;
  out.batch_products += b.batch_products;
  out.batch_trials += b.batch_trials;
  return out;
}

}  // namespace so2zeros
