// End-to-end acceptance battery. Each numbered criterion prints exactly one
// [PASS]/[FAIL] line; the exit code is the number of failures. argv[1] must
// name the command-line binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "so2zeros/empirical.hpp"
#include "so2zeros/kac_rice.hpp"
#include "so2zeros/limit_field.hpp"
#include "so2zeros/so2_polynomial.hpp"

using namespace so2zeros;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int num, const std::string& what, bool ok,
            const std::string& detail) {
  std::printf("[%s] %2d %s — %s\n", ok ? "PASS" : "FAIL", num, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

BinGrid one_bin_full_circle() {
  BinGrid g;
  g.coord = BinGrid::Coord::Theta;
  g.lo = -2.0;
  g.hi = 2.0;
  g.count = 1;
  return g;
}

void criterion_1_gaussian_mean_count() {
  auto t0 = std::chrono::steady_clock::now();
  auto dist = CoefficientDistribution::gaussian();
  DensityEstimate est =
      run_density(dist, 64, one_bin_full_circle(), 0, 20000, 101);
  Estimate mean = est.mean_count();
  double elapsed = seconds_since(t0);
  bool ok = std::abs(mean.value - 8.0) <= 3.0 * mean.se && elapsed < 120.0;
  report(1, "gaussian mean zero count at n=64", ok,
         "mean " + fmt(mean.value) + " (se " + fmt(mean.se) + ") vs 8, " +
             fmt(elapsed) + " s");
}

void criterion_2_gaussian_density_exact() {
  BinomialRow row(32);
  auto dist = CoefficientDistribution::gaussian();
  double worst = 0.0;
  for (double x : {0.25, 0.5, 1.0, 2.0}) {
    double got = kac_rice_density(row, std::atan(x), dist);
    double want = 1.0 / (kPi * (1.0 + x * x));
    worst = std::max(worst, std::abs(got / want - 1.0));
  }
  report(2, "gaussian density equals the cauchy curve", worst < 1e-3,
         "worst relative error " + fmt(worst));
}

void criterion_3_origin_non_universality() {
  auto uni = CoefficientDistribution::uniform();
  double formula = origin_density(uni);
  bool formula_ok = std::abs(formula - 0.25) <= 1e-8;

  BinGrid g;
  g.coord = BinGrid::Coord::ScaledY;
  g.theta0 = 0.0;
  g.lo = -0.25;
  g.hi = 0.25;
  g.count = 1;
  DensityEstimate est = run_density(uni, 1024, g, 0, 100000, 103);
  Estimate d = est.density(0);
  bool near_quarter = std::abs(d.value - 0.25) <= 3.0 * d.se;
  bool far_from_gauss = std::abs(d.value - 1.0 / kPi) > 3.0 * d.se;
  report(3, "uniform origin density is 1/4, not 1/pi",
         formula_ok && near_quarter && far_from_gauss,
         "formula " + fmt(formula) + "; mc " + fmt(d.value) + " (se " +
             fmt(d.se) + "), " + fmt(std::abs(d.value - 1.0 / kPi) / d.se) +
             " se from 1/pi");
}

void criterion_4_universality_away_from_origin() {
  auto uni = CoefficientDistribution::uniform();
  const double target = 0.5 / kPi;
  std::vector<double> errs;
  for (int n : {64, 256, 1024}) {
    BinomialRow row(n);
    errs.push_back(std::abs(kac_rice_density(row, kPi / 4.0, uni) - target));
  }
  bool decreasing = errs[0] > errs[1] && errs[1] > errs[2];
  bool small = errs[2] < 0.02;

  BinGrid g;
  g.coord = BinGrid::Coord::ScaledY;
  g.theta0 = kPi / 4.0;
  g.lo = -0.25;
  g.hi = 0.25;
  g.count = 1;
  DensityEstimate est = run_density(uni, 1024, g, 0, 20000, 104);
  Estimate d = est.density(0);  // per unit y; target 1/pi
  bool mc_ok = std::abs(d.value - 1.0 / kPi) <= 3.0 * d.se;
  report(4, "uniform density at x=1 converges to 1/(2 pi)",
         decreasing && small && mc_ok,
         "errors " + fmt(errs[0]) + " > " + fmt(errs[1]) + " > " +
             fmt(errs[2]) + "; mc within " +
             fmt(std::abs(d.value - 1.0 / kPi) / d.se) + " se");
}

void criterion_5_crossover() {
  auto qua = CoefficientDistribution::quartic();
  double at0 = crossover_density(0.0, qua);
  double origin = origin_density(qua);
  bool q0 = std::abs(at0 - origin) <= 1e-3;
  double at4 = crossover_density(4.0, qua);
  bool q4 = std::abs(at4 - 1.0 / kPi) <= 0.03;

  auto gau = CoefficientDistribution::gaussian();
  double worst_g = 0.0;
  for (double y : {0.0, 1.0, 2.0, 4.0})
    worst_g = std::max(worst_g,
                       std::abs(crossover_density(y, gau) - 1.0 / kPi));
  bool gok = worst_g <= 1e-3;
  report(5, "origin crossover: moment product to flat limit", q0 && q4 && gok,
         "quartic p(0) err " + fmt(std::abs(at0 - origin)) + ", p(4) err " +
             fmt(std::abs(at4 - 1.0 / kPi)) + ", gaussian worst " +
             fmt(worst_g));
}

void criterion_6_mean_count_universality() {
  auto uni = CoefficientDistribution::uniform();
  DensityEstimate est =
      run_density(uni, 1024, one_bin_full_circle(), 0, 20000, 106);
  double ratio = est.mean_count().value / 32.0;
  report(6, "uniform mean count tracks sqrt(n) at n=1024",
         ratio >= 0.95 && ratio <= 1.05, "mean/sqrt(n) = " + fmt(ratio));
}

void criterion_7_weight_identities() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n : {2, 64, 1024, 4096}) {
    BinomialRow row(n);
    double sqrt_n = std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 20; ++i) {
      double theta = -1.45 + 2.9 * (i + 0.5) / 20.0;
      if (theta == 0.0) theta = 1e-3;
      WeightTable w = build_weights(row, theta);
      double x = std::tan(theta);
      KahanSum mu2, nu2, la2, mula, munu;
      for (Index k = 0; k < w.mu.size(); ++k) {
        mu2.add(w.mu[k] * w.mu[k]);
        nu2.add(w.nu[k] * w.nu[k]);
        la2.add(w.lambda[k] * w.lambda[k]);
        mula.add(w.mu[k] * w.lambda[k]);
        munu.add(w.mu[k] * w.nu[k]);
      }
      double target = sqrt_n * x / std::sqrt(1.0 + n * x * x);
      worst = std::max({worst, std::abs(mu2.value() - 1.0),
                        std::abs(nu2.value() - 1.0),
                        std::abs(la2.value() - 1.0), std::abs(mula.value()),
                        std::abs(munu.value() - target)});
    }
  }
  double elapsed = seconds_since(t0);
  report(7, "five weight identities to 1e-12 up to n=4096",
         worst <= 1e-12 && elapsed < 10.0,
         "worst residual " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void criterion_8_kernel_convergence_rate() {
  KernelEntries lim = limit_kernel_entries(1.0);
  double prev = -1.0;
  bool ok = true;
  std::string ratios;
  for (int n = 64; n <= 1024; n *= 2) {
    KernelEntries fin = finite_kernel_entries(1.0, n);
    double err = std::max({std::abs(fin.a - lim.a), std::abs(fin.b - lim.b),
                           std::abs(fin.c - lim.c)});
    if (prev > 0.0) {
      double r = prev / err;
      ok = ok && r >= 1.7 && r <= 2.3;
      if (!ratios.empty()) ratios += ", ";
      ratios += fmt(r);
    }
    prev = err;
  }
  report(8, "kernel entries converge at rate 1/n", ok,
         "halving ratios " + ratios);
}

void criterion_9_pair_correlation() {
  VectorXd pts(2);
  pts << 0.0, 1.0;
  LimitKernel kernel = build_limit_kernel(pts);
  double closed = pair_intensity(kernel).value;
  Estimate qmc = intensity_qmc(kernel, 1000000, 109);
  bool qmc_ok = std::abs(qmc.value - closed) <= 3.0 * qmc.se;

  std::vector<std::pair<double, double>> pairs{{0.0, 1.0}};
  auto gau = CoefficientDistribution::gaussian();
  PairCorrelationEstimate ge =
      run_pair_correlation(gau, 256, 0.7, pairs, 0.25, 0, 100000, 209);
  Estimate g2 = ge.correlation(0);
  bool g_ok = std::abs(g2.value - closed) <= 3.0 * g2.se;

  auto uni = CoefficientDistribution::uniform();
  PairCorrelationEstimate ue =
      run_pair_correlation(uni, 1024, 0.7, pairs, 0.25, 0, 100000, 309);
  Estimate u2 = ue.correlation(0);
  bool u_ok = std::abs(u2.value - closed) <= 3.0 * u2.se;

  report(9, "pair correlation: closed form, lattice mc, two empirical laws",
         qmc_ok && g_ok && u_ok,
         "closed " + fmt(closed) + "; qmc off " +
             fmt(std::abs(qmc.value - closed) / qmc.se) + " se; gaussian off " +
             fmt(std::abs(g2.value - closed) / g2.se) + " se; uniform off " +
             fmt(std::abs(u2.value - closed) / u2.se) + " se");
}

void criterion_10_decay_audits() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"uniform", "quartic"}) {
    auto dist = CoefficientDistribution::from_name(name);
    double prev_const = 0.0;
    for (int n : {64, 256}) {
      BinomialRow row(n);
      WeightTable w = build_weights(row, 0.7);
      SpectralGrid grid = build_spectral_grid(w.mu, w.lambda, dist);
      JointDensitySlice slice = invert_slice(grid);
      DecayAudit audit = decay_audit(grid, slice);
      ok = ok && audit.quad_holds && audit.slice_holds && audit.quad_a0 > 0.0;
      if (prev_const > 0.0) {
        double r = audit.slice_constant / prev_const;
        ok = ok && r > 0.2 && r < 5.0;  // fitted constant stays on one scale
      }
      prev_const = audit.slice_constant;
      if (!detail.empty()) detail += "; ";
      detail += std::string(name) + " n=" + std::to_string(n) + " a0=" +
                fmt(audit.quad_a0) + " C=" + fmt(audit.slice_constant);
    }
  }
  report(10, "quadratic and cubic decay envelopes verified on full grids", ok,
         detail);
}

void criterion_11_reciprocal_symmetry() {
  BinGrid g;
  g.coord = BinGrid::Coord::Theta;
  g.lo = std::atan(0.5);
  g.hi = std::atan(2.0);
  g.count = 2;  // equal halves meeting exactly at atan(1)
  bool ok = true;
  std::string detail;
  for (const char* name : {"gaussian", "uniform"}) {
    auto dist = CoefficientDistribution::from_name(name);
    DensityEstimate est = run_density(dist, 256, g, 0, 20000, 111);
    Estimate diff = est.mass_difference(0, 0, 1, 1);
    double sigmas = diff.se > 0.0 ? std::abs(diff.value) / diff.se : 0.0;
    ok = ok && sigmas <= 3.0;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " " + fmt(sigmas) + " se";
  }
  report(11, "zero mass in [1/2,1] matches [1,2]", ok, detail);
}

// --- criterion 12: byte determinism of the command line tool ---

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[entry.path().filename().string()] = ss.str();
  }
  return out;
}

bool run_cli(const std::string& bin, const std::string& args,
             const fs::path& out) {
  std::string cmd = bin + " " + args + " --out " + out.string() +
                    " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
}

void criterion_12_cli_determinism(const std::string& bin) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"count", "count --dist gaussian --n 32 --trials 256 --seed 7"},
      {"density",
       "density --dist uniform --n 32 --trials 256 --seed 7 --bins -1.2:1.2:6"},
      {"kacrice", "kacrice --dist quartic --n 32 --y 0,1"},
      {"crossover", "crossover --dist gaussian --y 0,1"},
      {"pair-corr",
       "pair-corr --dist gaussian --n 64 --trials 256 --seed 7 --y 1"},
      {"validate", "validate --dist gaussian --n 32 --seed 7"},
  };
  fs::path base =
      fs::temp_directory_path() /
      ("so2zeros_accept_" + std::to_string(static_cast<long>(getpid())));
  fs::remove_all(base);
  bool ok = !bin.empty();
  std::string detail = ok ? "" : "no tool path given";
  for (const auto& [name, args] : cases) {
    if (!ok) break;
    fs::path a = base / (name + "_a"), b = base / (name + "_b"),
             c = base / (name + "_c");
    bool ran = run_cli(bin, args + " --workers 1", a) &&
               run_cli(bin, args + " --workers 1", b) &&
               run_cli(bin, args + " --workers 3", c);
    if (!ran) {
      ok = false;
      detail = name + " did not run cleanly";
      break;
    }
    auto fa = slurp_dir(a), fb = slurp_dir(b), fc = slurp_dir(c);
    if (fa.empty() || fa != fb || fa != fc) {
      ok = false;
      detail = name + " output differs between runs or worker counts";
      break;
    }
    detail = "all six subcommands byte-identical across reruns and workers";
  }
  fs::remove_all(base);
  report(12, "command line outputs are byte-deterministic", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  criterion_1_gaussian_mean_count();
  criterion_2_gaussian_density_exact();
  criterion_3_origin_non_universality();
  criterion_4_universality_away_from_origin();
  criterion_5_crossover();
  criterion_6_mean_count_universality();
  criterion_7_weight_identities();
  criterion_8_kernel_convergence_rate();
  criterion_9_pair_correlation();
  criterion_10_decay_audits();
  criterion_11_reciprocal_symmetry();
  criterion_12_cli_determinism(cli);
  if (g_failures > 0)
    std::printf("%d criterion(s) failed\n", g_failures);
  else
    std::printf("all 12 criteria passed\n");
  return g_failures;
}
