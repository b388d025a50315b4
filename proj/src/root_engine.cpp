#include "so2zeros/root_engine.hpp"

#include <algorithm>
#include <cmath>

namespace so2zeros {
namespace {

constexpr double kWindowDrop = 45.0;  // e^-45 tail, below residual resolution

// Window of k indices whose log-magnitude stays within kWindowDrop of the peak.
struct LogWindow {
  int lo, hi;
  double ref;
};

LogWindow log_window(const BinomialRow& row, double ls, double lc, double u0) {
  const int n = row.n();
  auto lv = [&](int k) { return row.half_log(k) + k * ls + (n - k) * lc; };
  int k0 = std::clamp(static_cast<int>(std::llround(u0 * n)), 0, n);
  double ref = lv(k0);
  if (k0 > 0) ref = std::max(ref, lv(k0 - 1));
  if (k0 < n) ref = std::max(ref, lv(k0 + 1));
  int lo = k0, hi = k0;
  while (lo > 0 && lv(lo - 1) > ref - kWindowDrop) --lo;
  while (hi < n && lv(hi + 1) > ref - kWindowDrop) ++hi;
  return {lo, hi, ref};
}

}  // namespace

double raw_value(const BinomialRow& row, const VectorXd& coeffs, double theta,
                 double* norm_out) {
  const int n = row.n();
  if (coeffs.size() != n + 1)
    throw ContractError("raw_value: coefficient count must be n+1");
  double s = std::sin(theta), c = std::cos(theta);
  if (s == 0.0) {
    if (norm_out) *norm_out = 1.0;
    return coeffs[0];
  }
  double ls = std::log(std::abs(s)), lc = std::log(c);
  LogWindow win = log_window(row, ls, lc, s * s);
  KahanSum acc, nrm;
  for (int k = win.lo; k <= win.hi; ++k) {
    double w = std::exp(row.half_log(k) + k * ls + (n - k) * lc - win.ref);
    if (s < 0.0 && (k & 1)) w = -w;
    acc.add(w * coeffs[k]);
    if (norm_out) nrm.add(w * w);
  }
  if (norm_out) *norm_out = std::sqrt(nrm.value());
  return acc.value();
}

RootScanner::RootScanner(const BinomialRow& row, int grid_factor)
    : row_(row), full_(true) {
  if (grid_factor < 2) throw ContractError("RootScanner: grid_factor must be >= 2");
  double h0 = kPi / (grid_factor * std::sqrt(static_cast<double>(row_.n())));
  Index m = static_cast<Index>(std::ceil(kPi / h0));
  h_ = kPi / static_cast<double>(m);
  node_theta_.resize(m);
  for (Index i = 0; i < m; ++i)
    node_theta_[i] = -0.5 * kPi + (static_cast<double>(i) + 0.5) * h_;
  lo_ = node_theta_.front();
  hi_ = node_theta_.back();
  build_nodes();
}

RootScanner::RootScanner(const BinomialRow& row, double theta_lo,
                         double theta_hi, int grid_factor)
    : row_(row), full_(false), lo_(theta_lo), hi_(theta_hi) {
  if (grid_factor < 2) throw ContractError("RootScanner: grid_factor must be >= 2");
  if (!(-0.5 * kPi < lo_ && lo_ < hi_ && hi_ < 0.5 * kPi))
    throw ContractError("RootScanner: window must satisfy -pi/2 < lo < hi < pi/2");
  double h0 = kPi / (grid_factor * std::sqrt(static_cast<double>(row_.n())));
  Index m = static_cast<Index>(std::ceil((hi_ - lo_) / h0)) + 1;
  h_ = (hi_ - lo_) / static_cast<double>(m - 1);
  node_theta_.resize(m);
  for (Index i = 0; i < m; ++i)
    node_theta_[i] = lo_ + static_cast<double>(i) * h_;
  build_nodes();
}

void RootScanner::build_nodes() {
  const int n = row_.n();
  node_klo_.resize(node_theta_.size());
  node_w_.resize(node_theta_.size());
  for (std::size_t i = 0; i < node_theta_.size(); ++i) {
    double th = node_theta_[i];
    double s = std::sin(th), c = std::cos(th);
    if (s == 0.0) {
      node_klo_[i] = 0;
      node_w_[i] = VectorXd::Ones(1);
      continue;
    }
    double ls = std::log(std::abs(s)), lc = std::log(c);
    LogWindow win = log_window(row_, ls, lc, s * s);
    VectorXd w(win.hi - win.lo + 1);
    for (int k = win.lo; k <= win.hi; ++k) {
      double v = std::exp(row_.half_log(k) + k * ls + (n - k) * lc - win.ref);
      if (s < 0.0 && (k & 1)) v = -v;
      w[k - win.lo] = v;
    }
    node_klo_[i] = win.lo;
    node_w_[i] = std::move(w);
  }
}

double RootScanner::node_value(const VectorXd& coeffs, Index i) const {
  const VectorXd& w = node_w_[static_cast<std::size_t>(i)];
  return w.dot(coeffs.segment(node_klo_[static_cast<std::size_t>(i)], w.size()));
}

ZeroSample RootScanner::find_zeros(const VectorXd& coeffs) const {
  const int n = row_.n();
  if (coeffs.size() != n + 1)
    throw ContractError("find_zeros: coefficient count must be n+1");

  const double parity = (n & 1) ? -1.0 : 1.0;
  // Evaluation continued through +pi/2 via g(theta + pi) = parity * g(theta).
  auto value_at = [&](double th) {
    if (th > 0.5 * kPi) return parity * raw_value(row_, coeffs, th - kPi);
    if (th < -0.5 * kPi) return parity * raw_value(row_, coeffs, th + kPi);
    return raw_value(row_, coeffs, th);
  };

  const Index m = node_count();
  std::vector<double> vals(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    vals[static_cast<std::size_t>(i)] = node_value(coeffs, i);

  ZeroSample out;
  out.n = n;
  out.grid_step = h_;

  auto refine = [&](double a, double b, double fa, double fb) {
    int side = 0;
    double mid = 0.5 * (a + b), fm = 0.0;
    for (int it = 0; it < 200; ++it) {
      mid = (a * fb - b * fa) / (fb - fa);
      double safe_lo = std::min(a, b), safe_hi = std::max(a, b);
      if (!std::isfinite(mid) || !(mid > safe_lo && mid < safe_hi))
        mid = 0.5 * (a + b);
      fm = value_at(mid);
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
      if (std::abs(b - a) < 1e-14) break;
      if (it == 199)
        throw NumericError("find_zeros: refinement did not converge");
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
  };

  auto push_root = [&](double th) {
    if (th > 0.5 * kPi) th -= kPi;
    if (th <= -0.5 * kPi) th += kPi;
    double norm = 1.0;
    double v = raw_value(row_, coeffs, th, &norm);
    out.theta.push_back(th);
    out.x.push_back(std::tan(th));
    out.residual.push_back(std::abs(v) / norm);
  };

  for (Index i = 0; i + 1 < m; ++i) {
    double fa = vals[static_cast<std::size_t>(i)];
    double fb = vals[static_cast<std::size_t>(i + 1)];
    if (fa == 0.0) push_root(node_theta_[static_cast<std::size_t>(i)]);
    if (fa == 0.0 || fb == 0.0) continue;
    if ((fa > 0.0) != (fb > 0.0))
      push_root(refine(node_theta_[static_cast<std::size_t>(i)],
                       node_theta_[static_cast<std::size_t>(i + 1)], fa, fb));
  }
  double f_last = vals[static_cast<std::size_t>(m - 1)];
  if (f_last == 0.0) push_root(node_theta_[static_cast<std::size_t>(m - 1)]);
  if (full_) {
    // close the circle: bracket between the last node and the first node + pi
    double f_first = parity * vals[0];
    if (f_last != 0.0 && f_first != 0.0 && (f_last > 0.0) != (f_first > 0.0))
      push_root(refine(node_theta_.back(), node_theta_.front() + kPi, f_last,
                       f_first));
  }

  std::vector<std::size_t> order(out.theta.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return out.theta[p] < out.theta[q];
  });
  ZeroSample sorted;
  sorted.n = out.n;
  sorted.grid_step = out.grid_step;
  for (std::size_t i : order) {
    sorted.theta.push_back(out.theta[i]);
    sorted.x.push_back(out.x[i]);
    sorted.residual.push_back(out.residual[i]);
  }
  return sorted;
}

GridAudit audit_grid(const BinomialRow& row, const VectorXd& coeffs,
                     int grid_factor) {
  RootScanner base(row, grid_factor);
  RootScanner fine(row, 2 * grid_factor);
  ZeroSample zb = base.find_zeros(coeffs);
  ZeroSample zf = fine.find_zeros(coeffs);
  GridAudit audit;
  audit.base_count = static_cast<int>(zb.theta.size());
  audit.fine_count = static_cast<int>(zf.theta.size());
  for (double tf : zf.theta) {
    bool matched = false;
    for (double tb : zb.theta)
      if (std::abs(tb - tf) < 1e-8) {
        matched = true;
        break;
      }
    if (!matched) audit.missed_theta.push_back(tf);
  }
  return audit;
}

}  // namespace so2zeros
