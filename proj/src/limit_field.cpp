#include "so2zeros/limit_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "so2zeros/so2_polynomial.hpp"

namespace so2zeros {

KernelEntries limit_kernel_entries(double dy) {
  double e = std::exp(-0.5 * dy * dy);
  return {e, dy * e, (1.0 - dy * dy) * e};
}

KernelEntries finite_kernel_entries(double dy, int n) {
  if (n < 1) throw ContractError("finite_kernel_entries: n must be >= 1");
  double de = dy / std::sqrt(static_cast<double>(n));
  if (std::abs(de) >= 0.5 * kPi)
    throw ContractError("finite_kernel_entries: separation exceeds the chart");
  double cn = std::cos(de), tn = std::tan(de);
  double an = std::pow(cn, n);
  return {an, std::sqrt(static_cast<double>(n)) * tn * an,
          (1.0 / (cn * cn) - n * tn * tn) * an};
}

LimitKernel build_limit_kernel(const VectorXd& points, int n,
                               double min_separation) {
  const Index m = points.size();
  if (m < 1) throw ContractError("build_limit_kernel: need at least one point");
  for (Index i = 0; i + 1 < m; ++i) {
    if (!(points[i + 1] > points[i]))
      throw ContractError("build_limit_kernel: points must be ascending");
    if (points[i + 1] - points[i] < min_separation)
      throw DegeneracyError("build_limit_kernel: points closer than the "
                            "separation floor");
  }

  LimitKernel k;
  k.points = points;
  k.n = n;
  k.value_block.resize(m, m);
  k.cross_block.resize(m, m);
  k.slope_block.resize(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      KernelEntries e = n == 0
                            ? limit_kernel_entries(points[i] - points[j])
                            : finite_kernel_entries(points[i] - points[j], n);
      k.value_block(i, j) = e.a;
      k.cross_block(i, j) = e.b;
      k.slope_block(i, j) = e.c;
    }

  k.full.resize(2 * m, 2 * m);
  k.full.topLeftCorner(m, m) = k.value_block;
  k.full.topRightCorner(m, m) = k.cross_block;
  k.full.bottomLeftCorner(m, m) = k.cross_block.transpose();
  k.full.bottomRightCorner(m, m) = k.slope_block;

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(k.full);
  k.min_eigenvalue = es.eigenvalues().minCoeff();
  if (!(k.min_eigenvalue > 1e-12))
    throw DegeneracyError("build_limit_kernel: joint kernel is singular");
  return k;
}

ZeroConditional condition_on_zero(const LimitKernel& kernel) {
  const Index m = kernel.points.size();
  Eigen::LLT<MatrixXd> llt(kernel.value_block);
  if (llt.info() != Eigen::Success)
    throw DegeneracyError("condition_on_zero: value block not positive");
  MatrixXd ainv_b = llt.solve(kernel.cross_block);
  ZeroConditional zc;
  zc.cov = kernel.slope_block - kernel.cross_block.transpose() * ainv_b;
  double det = 1.0;
  for (Index i = 0; i < m; ++i) det *= llt.matrixL()(i, i);
  // det is sqrt(det A) from the Cholesky diagonal
  zc.value_density =
      std::pow(2.0 * kPi, -0.5 * static_cast<double>(m)) / det;
  return zc;
}

double intensity() { return 1.0 / kPi; }

Estimate pair_intensity(const LimitKernel& kernel) {
  if (kernel.points.size() != 2)
    throw ContractError("pair_intensity: exactly two points required");
  ZeroConditional zc = condition_on_zero(kernel);
  double s1 = std::sqrt(zc.cov(0, 0)), s2 = std::sqrt(zc.cov(1, 1));
  double rho = std::clamp(zc.cov(0, 1) / (s1 * s2), -1.0, 1.0);
  double abs_moment =
      2.0 / kPi * s1 * s2 *
      (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho));
  return {zc.value_density * abs_moment, 0.0};
}

Estimate intensity_qmc(const LimitKernel& kernel, Index samples,
                       std::uint64_t seed) {
  const Index m = kernel.points.size();
  constexpr int kBatches = 32;
  if (samples < kBatches * 8)
    throw ContractError("intensity_qmc: too few samples");
  ZeroConditional zc = condition_on_zero(kernel);
  Eigen::LLT<MatrixXd> llt(zc.cov);
  if (llt.info() != Eigen::Success)
    throw DegeneracyError("intensity_qmc: conditioned covariance not positive");
  MatrixXd L = llt.matrixL();

  static constexpr double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
                                      31, 37, 41, 43, 47, 53};
  if (m > static_cast<Index>(std::size(primes)))
    throw ContractError("intensity_qmc: too many points");
  VectorXd alpha(m);
  for (Index d = 0; d < m; ++d) {
    double r = std::sqrt(primes[d]);
    alpha[d] = r - std::floor(r);
  }

  const Index per_batch = samples / kBatches;
  VectorXd batch_mean(kBatches);
  VectorXd z(m), u(m);
  for (int b = 0; b < kBatches; ++b) {
    std::mt19937_64 g(trial_seed(seed, static_cast<std::uint64_t>(b)));
    VectorXd shift(m);
    for (Index d = 0; d < m; ++d)
      shift[d] = ((g() >> 11) + 0.5) * 0x1.0p-53;
    KahanSum acc;
    for (Index i = 0; i < per_batch; ++i) {
      for (Index d = 0; d < m; ++d) {
        double v = std::fma(static_cast<double>(i), alpha[d], shift[d]);
        u[d] = v - std::floor(v);
        u[d] = std::min(std::max(u[d], 0x1.0p-53), 1.0 - 0x1.0p-53);
      }
      for (Index d = 0; d < m; ++d) z[d] = norm_ppf(u[d]);
      VectorXd w = L * z;
      double p = 1.0;
      for (Index d = 0; d < m; ++d) p *= std::abs(w[d]);
      acc.add(p);
    }
    batch_mean[b] = acc.value() / static_cast<double>(per_batch);
  }
  double mean = batch_mean.mean();
  double var = (batch_mean.array() - mean).square().sum() / (kBatches - 1);
  double se = std::sqrt(var / kBatches);
  return {zc.value_density * mean, zc.value_density * se};
}

namespace {

double limit_value(const VectorXd& coeffs, int K, double y) {
  if (y == 0.0) return coeffs[0];
  double ly = std::log(std::abs(y)), y2 = y * y;
  KahanSum acc;
  for (int k = 0; k <= K; ++k) {
    double mk = std::exp(k * ly - 0.5 * y2 - 0.5 * std::lgamma(k + 1.0));
    if (y < 0.0 && (k & 1)) mk = -mk;
    acc.add(mk * coeffs[k]);
  }
  return acc.value();
}

double refine_limit(const VectorXd& coeffs, int K, double a, double b,
                    double fa, double fb) {
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = (a * fb - b * fa) / (fb - fa);
    if (!std::isfinite(mid) || !(mid > std::min(a, b) && mid < std::max(a, b)))
      mid = 0.5 * (a + b);
    double fm = limit_value(coeffs, K, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = mid;
      fb = fm;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (std::abs(b - a) < 1e-13) break;
    if (it == 199) throw NumericError("sample_limit_zeros: refinement stalled");
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace

std::vector<double> sample_limit_zeros(double y_lo, double y_hi,
                                       const CoefficientDistribution& dist,
                                       std::uint64_t seed) {
  if (!(y_hi > y_lo)) throw ContractError("sample_limit_zeros: empty window");
  double reach = std::max(std::abs(y_lo), std::abs(y_hi));
  LimitWeightTable table = build_limit_weights(reach);
  const int K = table.K;
  const int K2 = 2 * K;
  VectorXd coeffs = dist.sample(K2 + 1, seed);

  const double h = 0.05;
  Index nodes = static_cast<Index>(std::ceil((y_hi - y_lo) / h)) + 1;
  double step = (y_hi - y_lo) / static_cast<double>(nodes - 1);

  std::vector<double> zeros;
  double prev_y = y_lo, prev_f = limit_value(coeffs, K, y_lo);
  for (Index i = 1; i < nodes; ++i) {
    double y = y_lo + static_cast<double>(i) * step;
    double f = limit_value(coeffs, K, y);
    if (prev_f == 0.0) zeros.push_back(prev_y);
    if (prev_f != 0.0 && f != 0.0 && (prev_f > 0.0) != (f > 0.0))
      zeros.push_back(refine_limit(coeffs, K, prev_y, y, prev_f, f));
    prev_y = y;
    prev_f = f;
  }

  // doubled-cutoff audit: zeros must be stable under more modes
  for (double z : zeros) {
    double lo = z - 1e-3, hi = z + 1e-3;
    double fa = limit_value(coeffs, K2, lo), fb = limit_value(coeffs, K2, hi);
    if (fa == 0.0 || fb == 0.0) continue;
    if ((fa > 0.0) == (fb > 0.0))
      throw NumericError("sample_limit_zeros: zero lost at doubled cutoff");
    double z2 = refine_limit(coeffs, K2, lo, hi, fa, fb);
    if (std::abs(z2 - z) > 1e-8)
      throw NumericError("sample_limit_zeros: zero moved at doubled cutoff");
  }
  return zeros;
}

}  // namespace so2zeros
