#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace so2zeros {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;

// Bad run parameters (flags, config files, parameter ranges). CLI maps this to exit 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// API misuse: out-of-domain arguments, incompatible merges. CLI maps this to exit 2.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure that invalidates a result: lost bracket, non-convergent
// quadrature, characteristic product decaying too slowly. CLI maps this to exit 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate geometry (coincident evaluation points, singular kernels).
struct DegeneracyError : NumericError {
  using NumericError::NumericError;
};

// A point value with a standard error, for statistics built from batches.
struct Estimate {
  double value = 0.0, se = 0.0;
};

// Compensated accumulator; keeps long sums accurate to a few ulp.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

// splitmix64 output function; decorrelates nearby inputs.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for one trial. Trials are indexed globally so that split runs and merged
// runs draw identical coefficient streams.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return mix64(master + 0x9E3779B97F4A7C15ull * (trial + 1));
}

// Inverse standard normal cdf (Wichura's PPND16), good to ~1e-15 on (0,1).
double norm_ppf(double p);

double norm_cdf(double t);

// Runs fn(begin, end) over contiguous blocks of [0, count). Results must not
// depend on the partition; callers merge integer accumulators.
void parallel_blocks(Index count, int workers,
                     const std::function<void(Index, Index)>& fn);

std::string format_double(double v);

}  // namespace so2zeros
