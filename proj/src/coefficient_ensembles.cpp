#include "so2zeros/coefficient_ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <vector>

#include "so2zeros/quadrature.hpp"

namespace so2zeros {
namespace {

// uniform in (0,1), both ends excluded; 53-bit resolution
double u01(std::mt19937_64& g) { return ((g() >> 11) + 0.5) * 0x1.0p-53; }

struct GaussPair {
  double a, b;
};
GaussPair gauss_pair(std::mt19937_64& g) {
  double r = std::sqrt(-2.0 * std::log(u01(g)));
  double t = 2.0 * kPi * u01(g);
  return {r * std::cos(t), r * std::sin(t)};
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Quadrature nodes (t_j, weight*density) shared by every characteristic
// function value; panels sized for both the density scale and the maximum
// oscillation that the table must resolve.
struct FourierNodes {
  std::vector<double> t, g;
};

FourierNodes make_nodes(const std::function<double(double)>& rho,
                        const std::vector<double>& breaks, double s_max) {
  FourierNodes out;
  const quad::Rule& r = quad::gl16();
  // GL16 resolves e^{ist} to ~1e-15 while s*width/2 <= 8.
  double osc_cap = 16.0 / std::max(s_max, 1.0);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    if (!(b > a)) continue;
    double width = std::min({b - a, osc_cap, (breaks.back() - breaks.front()) / 16.0});
    int panels = static_cast<int>(std::ceil((b - a) / width));
    double h = (b - a) / panels;
    for (int q = 0; q < panels; ++q) {
      double mid = a + (q + 0.5) * h, half = 0.5 * h;
      for (Index i = 0; i < r.x.size(); ++i) {
        double tj = mid + half * r.x[i];
        out.t.push_back(tj);
        out.g.push_back(half * r.w[i] * rho(tj));
      }
    }
  }
  return out;
}

struct CharTable {
  double h = 0.0, s_max = 0.0;
  std::vector<std::complex<double>> v;

  std::complex<double> eval(double s) const {
    double as = std::abs(s);
    double p = as / h;
    Index i = static_cast<Index>(p);
    Index last = static_cast<Index>(v.size()) - 1;
    if (i > last - 2) i = last - 2;
    double f = p - static_cast<double>(i);
    std::complex<double> vm = i == 0 ? std::conj(v[1]) : v[i - 1];
    double wm = -f * (f - 1.0) * (f - 2.0) / 6.0;
    double w0 = (f * f - 1.0) * (f - 2.0) / 2.0;
    double w1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
    double w2 = f * (f * f - 1.0) / 6.0;
    std::complex<double> val = wm * vm + w0 * v[i] + w1 * v[i + 1] + w2 * v[i + 2];
    return s < 0.0 ? std::conj(val) : val;
  }
};

std::shared_ptr<const CharTable> build_char_table(
    const std::function<double(double)>& rho, const std::vector<double>& breaks,
    double s_max) {
  auto tab = std::make_shared<CharTable>();
  tab->h = 0.004;
  tab->s_max = s_max;
  Index count = static_cast<Index>(std::ceil(s_max / tab->h)) + 3;
  FourierNodes nodes = make_nodes(rho, breaks, s_max);
  std::size_t nn = nodes.t.size();
  std::vector<std::complex<double>> z(nn, {1.0, 0.0}), rot(nn);
  for (std::size_t j = 0; j < nn; ++j)
    rot[j] = std::polar(1.0, tab->h * nodes.t[j]);
  tab->v.resize(count);
  for (Index i = 0; i < count; ++i) {
    KahanSum re, im;
    for (std::size_t j = 0; j < nn; ++j) {
      re.add(nodes.g[j] * z[j].real());
      im.add(nodes.g[j] * z[j].imag());
      z[j] *= rot[j];
    }
    tab->v[i] = {re.value(), im.value()};
  }
  // Divide out the measured mass so the table represents an exactly
  // normalized density and phi(0) = 1 holds to the last bit.
  double mass = tab->v[0].real();
  for (auto& c : tab->v) c /= mass;
  tab->v[0] = {1.0, 0.0};
  return tab;
}

double sinc_family(double x, int order) {
  // order-th derivative of sin(x)/x
  if (std::abs(x) < 0.5) {
    double x2 = x * x;
    switch (order) {
      case 0: return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
      case 1: return x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
      case 2: return -1.0 / 3.0 + x2 * 3.0 / 30.0 - x2 * x2 * 5.0 / 840.0;
      default: return x * (6.0 / 30.0 - x2 * 20.0 / 840.0 + x2 * x2 * 42.0 / 45360.0);
    }
  }
  double s = std::sin(x), c = std::cos(x);
  switch (order) {
    case 0: return s / x;
    case 1: return (x * c - s) / (x * x);
    case 2: return -s / x - 2.0 * c / (x * x) + 2.0 * s / (x * x * x);
    default:
      return -c / x + 3.0 * s / (x * x) + 6.0 * c / (x * x * x) -
             6.0 * s / (x * x * x * x);
  }
}

}  // namespace

struct CoefficientDistribution::Impl {
  CoefficientLaw law{};
  std::string label, sig;
  MomentSummary mom;
  double halfwidth = 0.0;

  // quartic law parameters, found by root solving at construction
  double beta = 0.0, Z = 1.0;
  VectorXd cdf_t, cdf_v;

  // standardized piecewise-linear density
  VectorXd kn, kv, cum;
  double shift = 0.0, scale = 1.0;

  mutable std::shared_ptr<const CharTable> table;
  mutable std::mutex table_mu;

  bool quadrature_law() const {
    return law == CoefficientLaw::Quartic || law == CoefficientLaw::Custom;
  }

  std::vector<double> pieces() const {
    if (law == CoefficientLaw::Custom)
      return std::vector<double>(kn.begin(), kn.end());
    return {-halfwidth, 0.0, halfwidth};
  }

  double dens(double t) const {
    switch (law) {
      case CoefficientLaw::Gaussian:
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi);
      case CoefficientLaw::Uniform:
        return std::abs(t) <= halfwidth ? 0.5 / halfwidth : 0.0;
      case CoefficientLaw::Quartic:
        return std::exp(-beta * t * t * t * t) / Z;
      default: {
        if (t <= kn[0] || t >= kn[kn.size() - 1]) return 0.0;
        Index i = std::upper_bound(kn.begin(), kn.end(), t) - kn.begin() - 1;
        double f = (t - kn[i]) / (kn[i + 1] - kn[i]);
        return kv[i] + f * (kv[i + 1] - kv[i]);
      }
    }
  }

  std::complex<double> chi_direct(double s, int order) const {
    auto f = [this](double t) { return dens(t); };
    std::vector<double> br = pieces();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p + 1 < br.size(); ++p)
      acc += quad::fourier_moment(f, br[p], br[p + 1], s, order);
    std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[order & 3] * acc;
  }

  void prime(double s_max) const {
    if (!quadrature_law()) return;
    std::lock_guard<std::mutex> lk(table_mu);
    if (table && table->s_max >= s_max) return;
    double target = std::max(s_max * 1.25 + 5.0, 60.0);
    auto f = [this](double t) { return dens(t); };
    table = build_char_table(f, pieces(), target);
  }

  std::complex<double> chi(double s, int order) const {
    if (order < 0 || order > 3) throw ContractError("char_fn: order must be 0..3");
    switch (law) {
      case CoefficientLaw::Gaussian: {
        double e = std::exp(-0.5 * s * s);
        switch (order) {
          case 0: return {e, 0.0};
          case 1: return {-s * e, 0.0};
          case 2: return {(s * s - 1.0) * e, 0.0};
          default: return {(3.0 * s - s * s * s) * e, 0.0};
        }
      }
      case CoefficientLaw::Uniform: {
        double w = halfwidth;
        double p = 1.0;
        for (int k = 0; k < order; ++k) p *= w;
        return {p * sinc_family(w * s, order), 0.0};
      }
      default: {
        if (order > 0) return chi_direct(s, order);
        auto tab = table;
        if (!tab || std::abs(s) > tab->s_max) {
          prime(std::abs(s));
          tab = table;
        }
        return tab->eval(s);
      }
    }
  }
};

CoefficientDistribution::CoefficientDistribution(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

CoefficientDistribution CoefficientDistribution::gaussian() {
  auto im = std::make_shared<Impl>();
  im->law = CoefficientLaw::Gaussian;
  im->label = im->sig = "gaussian";
  im->halfwidth = 10.0;
  im->mom = {0.0, 1.0, std::sqrt(2.0 / kPi), 1.0 / std::sqrt(2.0 * kPi)};
  return CoefficientDistribution(im);
}

CoefficientDistribution CoefficientDistribution::uniform() {
  auto im = std::make_shared<Impl>();
  im->law = CoefficientLaw::Uniform;
  im->label = im->sig = "uniform";
  im->halfwidth = std::sqrt(3.0);
  im->mom = {0.0, 1.0, 0.5 * std::sqrt(3.0), 0.5 / std::sqrt(3.0)};
  return CoefficientDistribution(im);
}

CoefficientDistribution CoefficientDistribution::quartic() {
  auto im = std::make_shared<Impl>();
  im->law = CoefficientLaw::Quartic;
  im->label = im->sig = "quartic";

  auto trunc = [](double b) { return std::pow(184.0 / b, 0.25); };
  auto raw_moment = [&](double b, int pw) {
    double T = trunc(b);
    return quad::integrate(
        [b, pw](double t) {
          double v = std::exp(-b * t * t * t * t);
          for (int k = 0; k < pw; ++k) v *= t;
          return v;
        },
        -T, T, T / 64.0);
  };
  // variance(beta) is strictly decreasing; bisect to unit variance
  double lo = 1e-3, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double var = raw_moment(mid, 2) / raw_moment(mid, 0);
    (var > 1.0 ? lo : hi) = mid;
    if (hi - lo < 1e-15 * mid) break;
  }
  im->beta = 0.5 * (lo + hi);
  im->Z = raw_moment(im->beta, 0);
  im->halfwidth = trunc(im->beta);

  double T = im->halfwidth;
  double abs_mean = 2.0 / im->Z *
                    quad::integrate(
                        [b = im->beta](double t) {
                          return t * std::exp(-b * t * t * t * t);
                        },
                        0.0, T, T / 64.0);
  im->mom = {0.0, 1.0, abs_mean, 1.0 / im->Z};

  // cdf table for sampling checks; GL cell masses keep it accurate to ~1e-12
  Index cells = 4000;
  im->cdf_t.resize(cells + 1);
  im->cdf_v.resize(cells + 1);
  KahanSum acc;
  im->cdf_t[0] = -T;
  im->cdf_v[0] = 0.0;
  for (Index i = 0; i < cells; ++i) {
    double a = -T + 2.0 * T * i / cells, b2 = -T + 2.0 * T * (i + 1) / cells;
    acc.add(quad::panel(quad::gl16(),
                        [im](double t) { return im->dens(t); }, a, b2));
    im->cdf_t[i + 1] = b2;
    im->cdf_v[i + 1] = acc.value();
  }
  double total = im->cdf_v[cells];
  im->cdf_v /= total;
  return CoefficientDistribution(im);
}

CoefficientDistribution CoefficientDistribution::custom(const VectorXd& knots,
                                                        const VectorXd& values,
                                                        std::string label) {
  if (knots.size() != values.size() || knots.size() < 2)
    throw ContractError("custom: need matching knot/value arrays of length >= 2");
  for (Index i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i + 1] > knots[i]))
      throw ContractError("custom: knots must be strictly ascending");
  if ((values.array() < 0.0).any())
    throw ContractError("custom: density values must be nonnegative");

  auto cell_integral = [&](Index i, int pw) {
    double a = knots[i], b = knots[i + 1];
    double va = values[i], vb = values[i + 1];
    return quad::panel(
        quad::gl16(),
        [&](double t) {
          double f = (t - a) / (b - a);
          double v = va + f * (vb - va);
          for (int k = 0; k < pw; ++k) v *= t;
          return v;
        },
        a, b);
  };
  KahanSum mass, m1, m2;
  for (Index i = 0; i + 1 < knots.size(); ++i) {
    mass.add(cell_integral(i, 0));
    m1.add(cell_integral(i, 1));
    m2.add(cell_integral(i, 2));
  }
  if (!(mass.value() > 0.0)) throw ContractError("custom: density has zero mass");
  double mean = m1.value() / mass.value();
  double var = m2.value() / mass.value() - mean * mean;
  if (!(var > 0.0)) throw ContractError("custom: density has zero variance");
  double sd = std::sqrt(var);

  auto im = std::make_shared<Impl>();
  im->law = CoefficientLaw::Custom;
  im->label = std::move(label);
  im->shift = mean;
  im->scale = sd;
  im->kn = (knots.array() - mean) / sd;
  im->kv = values.array() * (sd / mass.value());
  im->halfwidth = std::max(std::abs(im->kn[0]), std::abs(im->kn[im->kn.size() - 1]));

  im->cum.resize(im->kn.size());
  KahanSum c;
  im->cum[0] = 0.0;
  for (Index i = 0; i + 1 < im->kn.size(); ++i) {
    c.add(0.5 * (im->kv[i] + im->kv[i + 1]) * (im->kn[i + 1] - im->kn[i]));
    im->cum[i + 1] = c.value();
  }
  im->cum /= im->cum[im->cum.size() - 1];

  std::string digest = im->label + ":";
  for (Index i = 0; i < knots.size(); ++i)
    digest += format_double(knots[i]) + "," + format_double(values[i]) + ";";
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(digest)));
  im->sig = "custom:" + std::string(buf);
  im->mom = {0.0, 1.0, 0.0, im->dens(0.0)};
  // |t| kinks at zero; split the straddling cell
  double am = 0.0;
  for (Index i = 0; i + 1 < im->kn.size(); ++i) {
    double a = im->kn[i], b = im->kn[i + 1];
    auto f = [&](double t) { return std::abs(t) * im->dens(t); };
    if (a < 0.0 && b > 0.0) {
      am += quad::panel(quad::gl16(), f, a, 0.0);
      am += quad::panel(quad::gl16(), f, 0.0, b);
    } else {
      am += quad::panel(quad::gl16(), f, a, b);
    }
  }
  im->mom.abs_mean = am;
  return CoefficientDistribution(im);
}

CoefficientDistribution CoefficientDistribution::from_name(std::string_view name) {
  if (name == "gaussian") return gaussian();
  if (name == "uniform") return uniform();
  if (name == "quartic") return quartic();
  throw ConfigError("unknown coefficient law: " + std::string(name));
}

CoefficientLaw CoefficientDistribution::law() const { return impl_->law; }
const std::string& CoefficientDistribution::name() const { return impl_->label; }
const std::string& CoefficientDistribution::signature() const { return impl_->sig; }
double CoefficientDistribution::shift() const { return impl_->shift; }
double CoefficientDistribution::scale() const { return impl_->scale; }
double CoefficientDistribution::density(double t) const { return impl_->dens(t); }
double CoefficientDistribution::support_halfwidth() const { return impl_->halfwidth; }
const MomentSummary& CoefficientDistribution::moments() const { return impl_->mom; }

std::complex<double> CoefficientDistribution::char_fn(double s, int order) const {
  return impl_->chi(s, order);
}

void CoefficientDistribution::prime_char_table(double s_max) const {
  impl_->prime(s_max);
}

std::function<std::complex<double>(double)> CoefficientDistribution::char_eval()
    const {
  switch (impl_->law) {
    case CoefficientLaw::Gaussian:
      return [](double s) {
        return std::complex<double>(std::exp(-0.5 * s * s), 0.0);
      };
    case CoefficientLaw::Uniform:
      return [w = impl_->halfwidth](double s) {
        return std::complex<double>(sinc_family(w * s, 0), 0.0);
      };
    default: {
      auto im = impl_;
      auto tab = im->table;
      return [im, tab](double s) {
        auto t = tab && std::abs(s) <= tab->s_max ? tab : im->table;
        if (!t || std::abs(s) > t->s_max) return im->chi_direct(s, 0);
        return t->eval(s);
      };
    }
  }
}

double CoefficientDistribution::cdf(double t) const {
  const Impl& im = *impl_;
  switch (im.law) {
    case CoefficientLaw::Gaussian:
      return norm_cdf(t);
    case CoefficientLaw::Uniform:
      if (t <= -im.halfwidth) return 0.0;
      if (t >= im.halfwidth) return 1.0;
      return 0.5 * (t / im.halfwidth + 1.0);
    case CoefficientLaw::Quartic: {
      if (t <= im.cdf_t[0]) return 0.0;
      Index last = im.cdf_t.size() - 1;
      if (t >= im.cdf_t[last]) return 1.0;
      double p = (t - im.cdf_t[0]) / (im.cdf_t[1] - im.cdf_t[0]);
      Index i = std::min<Index>(static_cast<Index>(p), last - 1);
      double f = p - static_cast<double>(i);
      return im.cdf_v[i] + f * (im.cdf_v[i + 1] - im.cdf_v[i]);
    }
    default: {
      if (t <= im.kn[0]) return 0.0;
      Index last = im.kn.size() - 1;
      if (t >= im.kn[last]) return 1.0;
      Index i = std::upper_bound(im.kn.begin(), im.kn.end(), t) - im.kn.begin() - 1;
      double dt = t - im.kn[i];
      double slope = (im.kv[i + 1] - im.kv[i]) / (im.kn[i + 1] - im.kn[i]);
      return im.cum[i] + im.kv[i] * dt + 0.5 * slope * dt * dt;
    }
  }
}

VectorXd CoefficientDistribution::sample(Index count, std::uint64_t seed) const {
  if (count < 0) throw ContractError("sample: negative count");
  const Impl& im = *impl_;
  VectorXd out(count);
  std::mt19937_64 g(seed);
  switch (im.law) {
    case CoefficientLaw::Gaussian: {
      for (Index i = 0; i < count; i += 2) {
        GaussPair p = gauss_pair(g);
        out[i] = p.a;
        if (i + 1 < count) out[i + 1] = p.b;
      }
      break;
    }
    case CoefficientLaw::Uniform: {
      for (Index i = 0; i < count; ++i)
        out[i] = (2.0 * u01(g) - 1.0) * im.halfwidth;
      break;
    }
    case CoefficientLaw::Quartic: {
      // rejection from a unit gaussian; log u <= z^2/2 - beta z^4 - 1/(16 beta)
      double shift2 = 1.0 / (16.0 * im.beta);
      Index i = 0;
      bool have_spare = false;
      double spare = 0.0;
      while (i < count) {
        double z;
        if (have_spare) {
          z = spare;
          have_spare = false;
        } else {
          GaussPair p = gauss_pair(g);
          z = p.a;
          spare = p.b;
          have_spare = true;
        }
        double z2 = z * z;
        if (std::log(u01(g)) <= 0.5 * z2 - im.beta * z2 * z2 - shift2)
          out[i++] = z;
      }
      break;
    }
    default: {
      for (Index i = 0; i < count; ++i) {
        double u = u01(g);
        Index c = std::upper_bound(im.cum.begin(), im.cum.end(), u) -
                  im.cum.begin() - 1;
        c = std::clamp<Index>(c, 0, im.cum.size() - 2);
        double m = u - im.cum[c];
        double a = (im.kv[c + 1] - im.kv[c]) / (im.kn[c + 1] - im.kn[c]);
        double disc = im.kv[c] * im.kv[c] + 2.0 * a * m;
        double xi = 2.0 * m / (im.kv[c] + std::sqrt(std::max(disc, 0.0)));
        out[i] = im.kn[c] + xi;
      }
      break;
    }
  }
  return out;
}

ConditionReport CoefficientDistribution::verify_conditions(double s_max,
                                                           Index grid_points) const {
  if (!(s_max > 2.0) || grid_points < 100)
    throw ContractError("verify_conditions: grid too small");
  prime_char_table(s_max);
  ConditionReport rep;
  double floor_v = impl_->quadrature_law() ? 1e-12 : 1e-300;

  VectorXd s(grid_points), mag(grid_points);
  for (Index i = 0; i < grid_points; ++i) {
    s[i] = s_max * static_cast<double>(i + 1) / static_cast<double>(grid_points);
    mag[i] = std::abs(char_fn(s[i]));
  }

  double m1 = 0.0, m2 = 0.0;
  for (Index i = 0; i < grid_points; ++i) {
    if (s[i] > 0.25 * s_max && s[i] <= 0.5 * s_max) m1 = std::max(m1, mag[i]);
    if (s[i] > 0.5 * s_max) m2 = std::max(m2, mag[i]);
  }
  if (m1 <= 2.0 * floor_v || m2 <= 2.0 * floor_v)
    rep.envelope_exponent = 64.0;
  else
    rep.envelope_exponent = std::clamp(std::log2(m1 / m2), 0.0, 64.0);

  rep.power_q = std::clamp(rep.envelope_exponent / 2.0, 0.25, 32.0);
  double a = std::numeric_limits<double>::infinity();
  double a6 = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < grid_points; ++i) {
    double fl = std::max(mag[i], floor_v);
    a = std::min(a, (std::pow(fl, -1.0 / rep.power_q) - 1.0) / (s[i] * s[i]));
    if (s[i] >= 1.0)
      a6 = std::min(a6, (std::pow(fl, -1.0 / 6.0) - 1.0) / s[i]);
  }
  rep.power_a = a;
  rep.sextic_a = a6;
  rep.power_holds = true;
  for (Index i = 0; i < grid_points; ++i)
    if (mag[i] > std::pow(1.0 + a * s[i] * s[i], -rep.power_q) * (1.0 + 1e-9))
      rep.power_holds = false;
  rep.sextic_holds = rep.envelope_exponent >= 6.0;

  for (Index i = 0; i <= 400; ++i) {
    double si = 10.0 * i / 400.0;
    rep.sup_d2 = std::max(rep.sup_d2, std::abs(char_fn(si, 2)));
    rep.sup_d3 = std::max(rep.sup_d3, std::abs(char_fn(si, 3)));
  }
  return rep;
}

}  // namespace so2zeros
