#include "so2zeros/kac_rice.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <vector>

namespace so2zeros {
namespace {

struct ActiveWeights {
  std::vector<double> g, h;
  double max_reach = 0.0;  // max |g_k| + |h_k|
};

ActiveWeights collect_active(const VectorXd& wg, const VectorXd& wh) {
  if (wg.size() != wh.size() || wg.size() == 0)
    throw ContractError("build_spectral_grid: weight families must match");
  ActiveWeights a;
  for (Index k = 0; k < wg.size(); ++k) {
    if (wg[k] == 0.0 && wh[k] == 0.0) continue;
    a.g.push_back(wg[k]);
    a.h.push_back(wh[k]);
    a.max_reach = std::max(a.max_reach, std::abs(wg[k]) + std::abs(wh[k]));
  }
  if (a.g.empty())
    throw ContractError("build_spectral_grid: all weights vanish");
  return a;
}

using CharEval = std::function<std::complex<double>(double)>;

std::complex<double> product_at(const ActiveWeights& w, const CharEval& ev,
                                double alpha, double beta) {
  std::complex<double> p(1.0, 0.0);
  for (std::size_t k = 0; k < w.g.size(); ++k) {
    p *= ev(w.g[k] * alpha + w.h[k] * beta);
    // |phi| <= 1, so the product magnitude can only shrink
    if (std::abs(p.real()) + std::abs(p.imag()) < 1e-300)
      return {0.0, 0.0};
  }
  return p;
}

VectorXd make_axis(double cutoff, int size) {
  VectorXd axis(size);
  double delta = 2.0 * cutoff / size;
  for (int i = 0; i < size; ++i) axis[i] = -cutoff + i * delta;
  return axis;
}

double ring_max(const ActiveWeights& w, const CharEval& ev, const VectorXd& axis) {
  Index n = axis.size();
  double m = 0.0;
  for (Index i = 0; i < n; ++i) {
    m = std::max(m, std::abs(product_at(w, ev, axis[i], axis[0])));
    m = std::max(m, std::abs(product_at(w, ev, axis[i], axis[n - 1])));
    m = std::max(m, std::abs(product_at(w, ev, axis[0], axis[i])));
    m = std::max(m, std::abs(product_at(w, ev, axis[n - 1], axis[i])));
  }
  return m;
}

}  // namespace

SpectralGrid build_spectral_grid(const VectorXd& w_value, const VectorXd& w_slope,
                                 const CoefficientDistribution& dist,
                                 const SpectralGridConfig& cfg) {
  if (cfg.size < 16 || (cfg.size & 1))
    throw ContractError("build_spectral_grid: size must be even and >= 16");
  if (!(cfg.cutoff > 0.0))
    throw ContractError("build_spectral_grid: cutoff must be positive");
  ActiveWeights w = collect_active(w_value, w_slope);

  double cutoff = cfg.cutoff;
  int size = cfg.size;
  int level = 0;
  for (;; ++level) {
    dist.prime_char_table(cutoff * w.max_reach * 1.01 + 1.0);
    CharEval ev = dist.char_eval();
    VectorXd axis = make_axis(cutoff, size);
    double bmax = ring_max(w, ev, axis);
    if (bmax <= cfg.boundary_tol) {
      SpectralGrid grid;
      grid.axis = std::move(axis);
      grid.cutoff = cutoff;
      grid.doublings = level;
      grid.boundary_max = bmax;
      grid.phi.resize(size, size);
      parallel_blocks(size, cfg.workers, [&](Index j_lo, Index j_hi) {
        for (Index j = j_lo; j < j_hi; ++j)
          for (Index i = 0; i < size; ++i)
            grid.phi(i, j) = product_at(w, ev, grid.axis[i], grid.axis[j]);
      });
      return grid;
    }
    if (level == cfg.max_doublings)
      throw NumericError(
          "build_spectral_grid: characteristic product decays too slowly at "
          "the largest admissible cutoff");
    cutoff *= 2.0;
    size *= 2;
  }
}

JointDensitySlice invert_slice(const SpectralGrid& grid) {
  const Index n = grid.axis.size();
  const double delta = grid.axis[1] - grid.axis[0];

  VectorXcd integral(n);
  for (Index j = 0; j < n; ++j) {
    KahanSum re, im;
    for (Index i = 0; i < n; ++i) {
      double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      re.add(tw * grid.phi(i, j).real());
      im.add(tw * grid.phi(i, j).imag());
    }
    integral[j] = std::complex<double>(re.value(), im.value()) * delta;
  }

  VectorXcd sig(n);
  for (Index j = 0; j < n; ++j) sig[j] = (j & 1) ? -integral[j] : integral[j];
  Eigen::FFT<double> fft;
  VectorXcd freq(n);
  fft.fwd(freq, sig);

  JointDensitySlice slice;
  slice.delta_eta = 2.0 * kPi / (static_cast<double>(n) * delta);
  slice.eta.resize(n);
  slice.values.resize(n);
  const double scale = delta / (4.0 * kPi * kPi);
  const bool half_odd = (n / 2) & 1;
  double imag_max = 0.0;
  for (Index k = 0; k < n; ++k) {
    double sgn = ((k & 1) != 0) != half_odd ? -1.0 : 1.0;
    std::complex<double> v = scale * sgn * freq[k];
    slice.eta[k] = (static_cast<double>(k) - n / 2) * slice.delta_eta;
    slice.values[k] = v.real();
    imag_max = std::max(imag_max, std::abs(v.imag()));
  }
  slice.imag_residual = imag_max;
  if (imag_max > 1e-6)
    throw NumericError("invert_slice: inversion left a non-real density");
  slice.center = slice.values[n / 2];

  // Calibrated on the outer band so the cubic-tail estimate continues the
  // amplitude actually present at the truncation edge; an inner window would
  // charge fast-decaying densities for mass they do not have.
  double eta_max = std::max(std::abs(slice.eta[0]), slice.eta[n - 1]);
  double lo = 0.8 * eta_max;
  double c = 0.0;
  for (Index k = 0; k < n; ++k) {
    double ae = std::abs(slice.eta[k]);
    if (ae >= lo) {
      double b = 1.0 + ae;
      c = std::max(c, std::abs(slice.values[k]) * b * b * b);
    }
  }
  slice.tail_constant = c;
  return slice;
}

double absolute_moment(const JointDensitySlice& slice) {
  const Index n = slice.eta.size();
  KahanSum acc;
  for (Index k = 0; k < n; ++k) {
    double tw = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    acc.add(tw * std::abs(slice.eta[k]) * slice.values[k]);
  }
  double q = acc.value() * slice.delta_eta;
  // |eta| has a kink at the origin: first-order Euler-Maclaurin correction
  q += slice.delta_eta * slice.delta_eta / 6.0 * slice.center;
  auto tail = [&](double H) {
    double u = 1.0 + H;
    return slice.tail_constant * (1.0 / u - 0.5 / (u * u));
  };
  q += tail(std::abs(slice.eta[0])) + tail(slice.eta[n - 1]);
  return q;
}

double kac_rice_density(const BinomialRow& row, double theta,
                        const CoefficientDistribution& dist,
                        const SpectralGridConfig& cfg) {
  if (theta == 0.0) return origin_density(dist);
  WeightTable w = build_weights(row, theta);
  SpectralGrid grid = build_spectral_grid(w.mu, w.lambda, dist, cfg);
  JointDensitySlice slice = invert_slice(grid);
  double x = std::tan(theta);
  return absolute_moment(slice) / (1.0 + x * x);
}

double origin_density(const CoefficientDistribution& dist) {
  const MomentSummary& m = dist.moments();
  return m.density_at_zero * m.abs_mean;
}

double crossover_density(double y, const CoefficientDistribution& dist,
                         const SpectralGridConfig& cfg) {
  LimitWeightTable t = build_limit_weights(y);
  SpectralGrid grid = build_spectral_grid(t.m, t.l, dist, cfg);
  return absolute_moment(invert_slice(grid));
}

DecayAudit decay_audit(const SpectralGrid& grid, const JointDensitySlice& slice) {
  const Index n = grid.axis.size();
  DecayAudit audit;

  double a0 = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double g2 = grid.axis[i] * grid.axis[i] + grid.axis[j] * grid.axis[j];
      if (g2 == 0.0) continue;
      double mag = std::max(std::abs(grid.phi(i, j)), 1e-300);
      a0 = std::min(a0, (1.0 / std::sqrt(mag) - 1.0) / g2);
    }
  audit.quad_a0 = a0;
  audit.quad_holds = a0 > 0.0;
  for (Index i = 0; i < n && audit.quad_holds; ++i)
    for (Index j = 0; j < n; ++j) {
      double g2 = grid.axis[i] * grid.axis[i] + grid.axis[j] * grid.axis[j];
      double bound = 1.0 / ((1.0 + a0 * g2) * (1.0 + a0 * g2));
      if (std::abs(grid.phi(i, j)) > bound * (1.0 + 1e-9)) {
        audit.quad_holds = false;
        break;
      }
    }

  const double delta = grid.axis[1] - grid.axis[0];
  for (Index i = 0; i < n; ++i)
    for (Index j = 1; j + 1 < n; ++j) {
      double g2 = grid.axis[i] * grid.axis[i] + grid.axis[j] * grid.axis[j];
      double env = (1.0 + a0 * g2) * (1.0 + a0 * g2);
      double d1 = std::abs(grid.phi(i, j + 1) - grid.phi(i, j - 1)) / (2.0 * delta);
      double d2 = std::abs(grid.phi(i, j + 1) - 2.0 * grid.phi(i, j) +
                           grid.phi(i, j - 1)) /
                  (delta * delta);
      audit.deriv_c1 = std::max(audit.deriv_c1, d1 * env);
      audit.deriv_c2 = std::max(audit.deriv_c2, d2 * env);
    }

  const Index m = slice.eta.size();
  double edge_band = 0.0, full = 0.0;
  double eta_max = std::max(std::abs(slice.eta[0]), slice.eta[m - 1]);
  for (Index k = 0; k < m; ++k) {
    double b = 1.0 + std::abs(slice.eta[k]);
    double v = std::abs(slice.values[k]) * b * b * b;
    full = std::max(full, v);
    if (std::abs(slice.eta[k]) >= 0.9 * eta_max) edge_band = std::max(edge_band, v);
  }
  audit.slice_constant = full;
  audit.slice_holds = full > 0.0 && edge_band <= 0.5 * full;
  return audit;
}

}  // namespace so2zeros
