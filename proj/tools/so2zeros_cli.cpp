// Batch experiment runner: each subcommand resolves its configuration
// (flags over an optional JSON config file), runs the requested estimate,
// and writes result CSVs, a plot-ready long-format CSV, a summary, and a
// manifest that pins everything needed to reproduce the bytes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "so2zeros/coefficient_ensembles.hpp"
#include "so2zeros/empirical.hpp"
#include "so2zeros/io.hpp"
#include "so2zeros/kac_rice.hpp"
#include "so2zeros/limit_field.hpp"
#include "so2zeros/root_engine.hpp"

namespace {

using nlohmann::json;
using namespace so2zeros;

constexpr const char* kToolName = "so2zeros";
constexpr const char* kToolVersion = "1.0.0";
constexpr int kSchemaVersion = 1;

struct Options {
  std::string dist = "gaussian";
  int n = 64;
  long long trials = 20000;
  std::uint64_t seed = 1;
  double theta0 = 0.7;
  std::string y;
  std::string bins = "-1.55:1.55:31";
  std::string coord = "theta";
  double bin_width = 0.25;
  int grid_factor = 20;
  int workers = 1;
  std::string out = "out";
  std::string config_path;
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad grid entry '" + item + "' in '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty grid '" + s + "'");
  return out;
}

void parse_bins(const std::string& s, double* lo, double* hi, int* count) {
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
      !std::getline(ss, c))
    throw ConfigError("bins must be lo:hi:count, got '" + s + "'");
  try {
    *lo = std::stod(a);
    *hi = std::stod(b);
    *count = std::stoi(c);
  } catch (const std::exception&) {
    throw ConfigError("bins must be lo:hi:count, got '" + s + "'");
  }
}

BinGrid::Coord parse_coord(const std::string& s) {
  if (s == "x") return BinGrid::Coord::X;
  if (s == "theta") return BinGrid::Coord::Theta;
  if (s == "y" || s == "scaled") return BinGrid::Coord::ScaledY;
  throw ConfigError("coord must be x, theta, or y; got '" + s + "'");
}

CoefficientDistribution load_distribution(const std::string& name_or_path) {
  if (name_or_path == "gaussian" || name_or_path == "uniform" ||
      name_or_path == "quartic")
    return CoefficientDistribution::from_name(name_or_path);
  if (name_or_path.find('/') != std::string::npos ||
      (name_or_path.size() > 5 &&
       name_or_path.substr(name_or_path.size() - 5) == ".json")) {
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("cannot read distribution file: " + name_or_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("bad distribution file " + name_or_path + ": " + e.what());
    }
    if (!j.contains("knots") || !j.contains("values"))
      throw ConfigError("distribution file needs 'knots' and 'values' arrays");
    std::vector<double> kn = j["knots"].get<std::vector<double>>();
    std::vector<double> va = j["values"].get<std::vector<double>>();
    VectorXd knots = Eigen::Map<VectorXd>(kn.data(), kn.size());
    VectorXd values = Eigen::Map<VectorXd>(va.data(), va.size());
    std::string label = j.value("label", std::string("custom"));
    return CoefficientDistribution::custom(knots, values, label);
  }
  return CoefficientDistribution::from_name(name_or_path);  // throws with a clear name
}

std::string config_hash(const json& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : cfg.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

// Flags the user typed win; remaining keys come from the config file.
void merge_config(const Options& base, Options* opt, CLI::App* cmd) {
  if (opt->config_path.empty()) return;
  std::ifstream in(opt->config_path);
  if (!in) throw ConfigError("cannot read config file: " + opt->config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config file: ") + e.what());
  }
  (void)base;
  auto take = [&](const char* key, auto* field) {
    const CLI::Option* o = cmd->get_option_no_throw(std::string("--") + key);
    if (!o || o->count() > 0) return;  // flag given explicitly
    if (!cfg.contains(key)) return;
    try {
      cfg.at(key).get_to(*field);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  };
  take("dist", &opt->dist);
  take("n", &opt->n);
  take("trials", &opt->trials);
  take("seed", &opt->seed);
  take("theta0", &opt->theta0);
  take("y", &opt->y);
  take("bins", &opt->bins);
  take("coord", &opt->coord);
  take("bin-width", &opt->bin_width);
  take("grid-factor", &opt->grid_factor);
  take("workers", &opt->workers);
  take("out", &opt->out);
}

// Everything that determines the numbers; workers and out deliberately
// excluded, so worker count and target directory cannot change the bytes.
json resolved_config(const std::string& sub, const Options& o) {
  json cfg;
  cfg["dist"] = o.dist;
  cfg["seed"] = o.seed;
  if (sub == "density" || sub == "pair-corr" || sub == "count" ||
      sub == "kacrice" || sub == "validate")
    cfg["n"] = o.n;
  if (sub == "density" || sub == "pair-corr" || sub == "count")
    cfg["trials"] = o.trials;
  if (sub == "density") {
    cfg["bins"] = o.bins;
    cfg["coord"] = o.coord;
    cfg["theta0"] = o.theta0;
    cfg["grid-factor"] = o.grid_factor;
  }
  if (sub == "pair-corr") {
    cfg["theta0"] = o.theta0;
    cfg["y"] = o.y;
    cfg["bin-width"] = o.bin_width;
    cfg["grid-factor"] = o.grid_factor;
  }
  if (sub == "count") cfg["grid-factor"] = o.grid_factor;
  if (sub == "crossover" || sub == "kacrice") cfg["y"] = o.y;
  return cfg;
}

struct RunOutput {
  std::vector<std::pair<std::string, io::Table>> tables;  // name -> table
  std::vector<std::string> summary;
};

void finish(const std::string& sub, const Options& o,
            const CoefficientDistribution& dist, RunOutput&& run) {
  json manifest = io::make_manifest(sub, resolved_config(sub, o));
  manifest["config_hash"] = config_hash(manifest["config"]);
  manifest["dist_signature"] = dist.signature();
  manifest["master_seed"] = o.seed;
  manifest["schema_version"] = kSchemaVersion;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;

  std::filesystem::create_directories(o.out);
  for (const auto& [name, table] : run.tables) {
    std::string path = o.out + "/" + name;
    io::write_csv_file(table, path);
    io::add_output(manifest, name, static_cast<Index>(table.rows.size()));
  }
  std::string text;
  for (const auto& line : run.summary) text += line + "\n";
  {
    std::ofstream os(o.out + "/summary.txt", std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + o.out);
    os << text;
  }
  io::add_output(manifest, "summary.txt",
                 static_cast<Index>(run.summary.size()));
  io::write_manifest(manifest, o.out + "/manifest.json");
  std::cout << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Density of zeros per unit of the bin coordinate, per trial, divided by
// sqrt(n) so every chart limits to the same Cauchy/uniform curve.
double analytic_density(const BinomialRow& row, const BinGrid& g, double c,
                        const CoefficientDistribution& dist,
                        const SpectralGridConfig& scfg) {
  double sqrt_n = std::sqrt(static_cast<double>(row.n()));
  double theta;
  bool x_chart = g.coord == BinGrid::Coord::X;
  switch (g.coord) {
    case BinGrid::Coord::X: theta = std::atan(c); break;
    case BinGrid::Coord::Theta: theta = c; break;
    default: theta = g.theta0 + c / sqrt_n; break;
  }
  double per_x = kac_rice_density(row, theta, dist, scfg);
  if (x_chart) return per_x;
  double t = std::tan(theta);
  return per_x * (1.0 + t * t);
}

double cauchy_density(const BinGrid& g, double c) {
  if (g.coord == BinGrid::Coord::X) return 1.0 / (kPi * (1.0 + c * c));
  return 1.0 / kPi;
}

int cmd_density(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  BinGrid grid;
  grid.coord = parse_coord(o.coord);
  grid.theta0 = o.theta0;
  parse_bins(o.bins, &grid.lo, &grid.hi, &grid.count);
  grid.validate();
  if (o.n < 1) throw ConfigError("n must be positive");
  if (o.trials < 64) throw ConfigError("need at least 64 trials");

  BinomialRow row(o.n);
  double sqrt_n = std::sqrt(static_cast<double>(o.n));
  DensityEstimate est = run_density(dist, o.n, grid, 0, o.trials, o.seed,
                                    o.grid_factor, o.workers);
  SpectralGridConfig scfg;
  scfg.workers = o.workers;

  io::Table table({"bin", "center", "count", "density", "density_se",
                   "kacrice", "cauchy"});
  io::Table plot({"x", "series", "value", "error"});
  double worst_dev = 0.0;
  int overlay_failures = 0;
  for (int b = 0; b < grid.count; ++b) {
    double c = grid.center(b);
    Estimate d = est.density(b);
    double emp = d.value / sqrt_n, se = d.se / sqrt_n;
    double kr;
    try {
      kr = analytic_density(row, grid, c, dist, scfg);
    } catch (const NumericError&) {
      // too few live coefficients at this angle for the slow-decay law;
      // keep the empirical histogram and blank the overlay
      kr = std::numeric_limits<double>::quiet_NaN();
      ++overlay_failures;
    }
    double cy = cauchy_density(grid, c);
    std::int64_t cnt = est.batch_counts.col(b).sum();
    table.add({io::cell(static_cast<Index>(b)), io::cell(c), io::cell(cnt),
               io::cell(emp), io::cell(se), io::cell(kr), io::cell(cy)});
    plot.add({io::cell(c), "empirical", io::cell(emp), io::cell(se)});
    plot.add({io::cell(c), "kacrice", io::cell(kr), io::cell(0.0)});
    plot.add({io::cell(c), "cauchy", io::cell(cy), io::cell(0.0)});
    if (se > 0.0 && std::isfinite(kr))
      worst_dev = std::max(worst_dev, std::abs(emp - kr) / se);
  }

  Estimate mean = est.mean_count();
  RunOutput run;
  run.tables.emplace_back("density.csv", std::move(table));
  run.tables.emplace_back("density_plot.csv", std::move(plot));
  run.summary.push_back("density: dist=" + dist.signature() +
                        " n=" + std::to_string(o.n) +
                        " trials=" + std::to_string(o.trials));
  run.summary.push_back("zeros found: " + std::to_string(est.zeros_total()) +
                        " (mean " + fmt(mean.value) + " per trial, se " +
                        fmt(mean.se) + ")");
  run.summary.push_back("largest |empirical - kacrice| deviation: " +
                        fmt(worst_dev) + " se units");
  if (overlay_failures > 0)
    run.summary.push_back("kacrice overlay unavailable for " +
                          std::to_string(overlay_failures) +
                          " bins (characteristic product decays too slowly)");
  finish("density", o, dist, std::move(run));
  return 0;
}

int cmd_crossover(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  std::vector<double> ys = parse_grid(o.y);
  SpectralGridConfig scfg;
  scfg.workers = o.workers;
  const double uniform_limit = 1.0 / kPi;

  io::Table table({"y", "density", "limit"});
  io::Table plot({"x", "series", "value", "error"});
  double worst = 0.0;
  for (double y : ys) {
    double p = crossover_density(y, dist, scfg);
    table.add({io::cell(y), io::cell(p), io::cell(uniform_limit)});
    plot.add({io::cell(y), "crossover", io::cell(p), io::cell(0.0)});
    plot.add({io::cell(y), "limit", io::cell(uniform_limit), io::cell(0.0)});
    worst = std::max(worst, std::abs(p - uniform_limit));
  }
  double origin = origin_density(dist);

  RunOutput run;
  run.tables.emplace_back("crossover.csv", std::move(table));
  run.tables.emplace_back("crossover_plot.csv", std::move(plot));
  run.summary.push_back("crossover: dist=" + dist.signature());
  run.summary.push_back("origin density r(0)E|c| = " + fmt(origin));
  run.summary.push_back("max |p(y) - 1/pi| on the grid = " + fmt(worst));
  finish("crossover", o, dist, std::move(run));
  return 0;
}

int cmd_pair_corr(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  std::vector<double> seps = parse_grid(o.y);
  std::vector<std::pair<double, double>> pairs;
  for (double s : seps) pairs.emplace_back(0.0, s);

  PairCorrelationEstimate est =
      run_pair_correlation(dist, o.n, o.theta0, pairs, o.bin_width, 0,
                           o.trials, o.seed, o.grid_factor, o.workers);

  io::Table table({"separation", "empirical", "se", "limit"});
  io::Table plot({"x", "series", "value", "error"});
  double worst_dev = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    Estimate e = est.correlation(static_cast<int>(p));
    VectorXd pts(2);
    pts << 0.0, seps[p];
    double lim = pair_intensity(build_limit_kernel(pts)).value;
    table.add({io::cell(seps[p]), io::cell(e.value), io::cell(e.se),
               io::cell(lim)});
    plot.add({io::cell(seps[p]), "empirical", io::cell(e.value),
              io::cell(e.se)});
    plot.add({io::cell(seps[p]), "limit", io::cell(lim), io::cell(0.0)});
    if (e.se > 0.0)
      worst_dev = std::max(worst_dev, std::abs(e.value - lim) / e.se);
  }

  RunOutput run;
  run.tables.emplace_back("pair_corr.csv", std::move(table));
  run.tables.emplace_back("pair_corr_plot.csv", std::move(plot));
  run.summary.push_back("pair-corr: dist=" + dist.signature() +
                        " n=" + std::to_string(o.n) +
                        " theta0=" + fmt(o.theta0) +
                        " trials=" + std::to_string(o.trials));
  run.summary.push_back("largest |empirical - limit| deviation: " +
                        fmt(worst_dev) + " se units");
  finish("pair-corr", o, dist, std::move(run));
  return 0;
}

int cmd_count(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  BinGrid grid;
  grid.coord = BinGrid::Coord::Theta;
  grid.lo = -2.0;
  grid.hi = 2.0;
  grid.count = 1;
  DensityEstimate est = run_density(dist, o.n, grid, 0, o.trials, o.seed,
                                    o.grid_factor, o.workers);
  Estimate mean = est.mean_count();
  double target = std::sqrt(static_cast<double>(o.n));
  double dev = mean.se > 0.0 ? std::abs(mean.value - target) / mean.se : 0.0;

  io::Table table(
      {"n", "trials", "mean_count", "se", "sqrt_n", "deviation_se"});
  table.add({io::cell(static_cast<Index>(o.n)),
             io::cell(static_cast<Index>(o.trials)), io::cell(mean.value),
             io::cell(mean.se), io::cell(target), io::cell(dev)});

  RunOutput run;
  run.tables.emplace_back("count.csv", std::move(table));
  run.summary.push_back("count: dist=" + dist.signature() +
                        " n=" + std::to_string(o.n) +
                        " trials=" + std::to_string(o.trials));
  run.summary.push_back("mean count " + fmt(mean.value) + " (se " +
                        fmt(mean.se) + "), target sqrt(n) = " + fmt(target));
  run.summary.push_back("|mean - sqrt(n)| = " + fmt(dev) +
                        " standard errors");
  finish("count", o, dist, std::move(run));
  return 0;
}

int cmd_kacrice(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  std::vector<double> xs = parse_grid(o.y);
  BinomialRow row(o.n);
  SpectralGridConfig scfg;
  scfg.workers = o.workers;

  io::Table table({"x", "density", "cauchy"});
  io::Table plot({"x", "series", "value", "error"});
  double worst = 0.0;
  for (double x : xs) {
    double v = kac_rice_density(row, std::atan(x), dist, scfg);
    double cy = 1.0 / (kPi * (1.0 + x * x));
    table.add({io::cell(x), io::cell(v), io::cell(cy)});
    plot.add({io::cell(x), "kacrice", io::cell(v), io::cell(0.0)});
    plot.add({io::cell(x), "cauchy", io::cell(cy), io::cell(0.0)});
    worst = std::max(worst, std::abs(v - cy));
  }

  RunOutput run;
  run.tables.emplace_back("kacrice.csv", std::move(table));
  run.tables.emplace_back("kacrice_plot.csv", std::move(plot));
  run.summary.push_back("kacrice: dist=" + dist.signature() +
                        " n=" + std::to_string(o.n));
  run.summary.push_back("max |density - cauchy| on the grid = " + fmt(worst));
  finish("kacrice", o, dist, std::move(run));
  return 0;
}

int cmd_validate(const Options& o) {
  CoefficientDistribution dist = load_distribution(o.dist);
  if (o.n < 2) throw ConfigError("validate needs n >= 2");
  BinomialRow row(o.n);
  double sqrt_n = std::sqrt(static_cast<double>(o.n));

  io::Table table({"check", "passed", "detail"});
  std::vector<std::string> summary;
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok,
                    const std::string& detail) {
    table.add({name, ok ? "1" : "0", detail});
    summary.push_back(std::string(ok ? "[ok]   " : "[FAIL] ") + name + ": " +
                      detail);
    all_ok = all_ok && ok;
  };

  const MomentSummary& mom = dist.moments();
  record("moments",
         std::abs(mom.mean) < 1e-8 && std::abs(mom.variance - 1.0) < 1e-8,
         "mean " + fmt(mom.mean) + ", variance " + fmt(mom.variance));

  ConditionReport rep = dist.verify_conditions();
  record("char-envelope", rep.power_holds,
         "a=" + fmt(rep.power_a) + " q=" + fmt(rep.power_q) +
             " tail exponent " + fmt(rep.envelope_exponent));
  summary.push_back(std::string("       sextic envelope ") +
                    (rep.sextic_holds ? "holds" : "not available") +
                    " (needed for pair statistics only)");

  double worst_identity = 0.0;
  for (double theta : {-1.2, -0.7, -0.3, -0.05, 0.05, 0.4, 0.9, 1.4}) {
    WeightTable w = build_weights(row, theta);
    double x = std::tan(theta);
    double dot_target = sqrt_n * x / std::sqrt(1.0 + o.n * x * x);
    KahanSum mu2, nu2, la2, mula;
    for (Index i = 0; i < w.mu.size(); ++i) {
      mu2.add(w.mu[i] * w.mu[i]);
      nu2.add(w.nu[i] * w.nu[i]);
      la2.add(w.lambda[i] * w.lambda[i]);
      mula.add(w.mu[i] * w.lambda[i]);
    }
    worst_identity = std::max(
        {worst_identity, std::abs(mu2.value() - 1.0),
         std::abs(nu2.value() - 1.0), std::abs(la2.value() - 1.0),
         std::abs(mula.value()), std::abs(w.mu_nu - dot_target)});
  }
  record("weight-identities", worst_identity < 1e-12,
         "worst residual " + fmt(worst_identity));

  VectorXd pts(3);
  pts << 0.0, 0.7, 1.9;
  bool kernel_ok = true;
  std::string kernel_detail;
  try {
    LimitKernel k = build_limit_kernel(pts);
    kernel_detail = "min eigenvalue " + fmt(k.min_eigenvalue);
    VectorXd far(2);
    far << 0.0, 8.0;
    double k2 = pair_intensity(build_limit_kernel(far)).value;
    double indep = intensity() * intensity();
    kernel_ok = std::abs(k2 - indep) < 1e-10;
    kernel_detail += ", K2 at separation 8 ~ 1/pi^2 within " +
                     fmt(std::abs(k2 - indep));
  } catch (const DegeneracyError& e) {
    kernel_ok = false;
    kernel_detail = e.what();
  }
  record("limit-kernel", kernel_ok, kernel_detail);

  SpectralGridConfig scfg;
  scfg.workers = o.workers;
  WeightTable w = build_weights(row, 0.7);
  SpectralGrid grid = build_spectral_grid(w.mu, w.lambda, dist, scfg);
  JointDensitySlice slice = invert_slice(grid);
  DecayAudit audit = decay_audit(grid, slice);
  record("spectral-decay", audit.quad_holds && audit.slice_holds,
         "a0=" + fmt(audit.quad_a0) + " slice constant " +
             fmt(audit.slice_constant) + " imag residual " +
             fmt(slice.imag_residual));

  int missed = 0;
  double worst_residual = 0.0;
  RootScanner scanner(row, o.grid_factor);
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    VectorXd coeffs = dist.sample(
        o.n + 1, trial_seed(o.seed, static_cast<std::uint64_t>(rep_i)));
    GridAudit ga = audit_grid(row, coeffs, o.grid_factor);
    missed += static_cast<int>(ga.missed_theta.size());
    ZeroSample zs = scanner.find_zeros(coeffs);
    for (double r : zs.residual) worst_residual = std::max(worst_residual, r);
  }
  record("grid-audit", missed == 0,
         std::to_string(missed) + " zeros missed at the base grid");
  record("refinement", worst_residual < 1e-10,
         "worst normalized residual " + fmt(worst_residual));

  RunOutput run;
  run.tables.emplace_back("validate.csv", std::move(table));
  run.summary.push_back("validate: dist=" + dist.signature() +
                        " n=" + std::to_string(o.n));
  run.summary.insert(run.summary.end(), summary.begin(), summary.end());
  run.summary.push_back(all_ok ? "all checks passed" : "CHECKS FAILED");
  finish("validate", o, dist, std::move(run));
  return all_ok ? 0 : 3;
}

struct Subcommand {
  CLI::App* cmd = nullptr;
  Options opt;
  int (*fn)(const Options&) = nullptr;
};

void add_common(CLI::App* cmd, Options* o) {
  cmd->add_option("--dist", o->dist,
                  "coefficient law: gaussian, uniform, quartic, or a JSON "
                  "density file");
  cmd->add_option("--seed", o->seed, "master seed");
  cmd->add_option("--out", o->out, "output directory");
  cmd->add_option("--workers", o->workers, "worker threads (never affects results)");
  cmd->add_option("--config", o->config_path,
                  "JSON config file; explicit flags win");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero statistics of random trigonometric-binomial polynomials"};
  app.require_subcommand(1);
  std::map<std::string, Subcommand> subs;

  auto make = [&](const std::string& name, const std::string& help,
                  int (*fn)(const Options&)) -> Subcommand& {
    Subcommand& s = subs[name];
    s.cmd = app.add_subcommand(name, help);
    s.fn = fn;
    add_common(s.cmd, &s.opt);
    return s;
  };

  {
    Subcommand& s = make("density", "empirical zero-location histogram vs analytic curves",
                         &cmd_density);
    s.cmd->add_option("--n", s.opt.n, "polynomial degree");
    s.cmd->add_option("--trials", s.opt.trials, "number of random draws");
    s.cmd->add_option("--bins", s.opt.bins, "histogram range lo:hi:count");
    s.cmd->add_option("--coord", s.opt.coord,
                      "bin coordinate: x, theta, or y (scaled angle)");
    s.cmd->add_option("--theta0", s.opt.theta0, "chart center for coord=y");
    s.cmd->add_option("--grid-factor", s.opt.grid_factor,
                      "scan nodes per mean spacing");
  }
  {
    Subcommand& s = make("crossover", "local zero density near the origin vs its flat limit",
                         &cmd_crossover);
    s.opt.y = "0,0.5,1,1.5,2,2.5,3,4";
    s.cmd->add_option("--y", s.opt.y, "comma-separated scaled heights");
  }
  {
    Subcommand& s = make("pair-corr", "two-point zero correlation vs the limit prediction",
                         &cmd_pair_corr);
    s.opt.y = "1,2,3";
    s.cmd->add_option("--n", s.opt.n, "polynomial degree");
    s.cmd->add_option("--trials", s.opt.trials, "number of random draws");
    s.cmd->add_option("--theta0", s.opt.theta0, "chart center");
    s.cmd->add_option("--y", s.opt.y, "comma-separated pair separations");
    s.cmd->add_option("--bin-width", s.opt.bin_width, "counting bin width (scaled units)");
    s.cmd->add_option("--grid-factor", s.opt.grid_factor,
                      "scan nodes per mean spacing");
  }
  {
    Subcommand& s = make("count", "mean number of real zeros vs sqrt(n)", &cmd_count);
    s.cmd->add_option("--n", s.opt.n, "polynomial degree");
    s.cmd->add_option("--trials", s.opt.trials, "number of random draws");
    s.cmd->add_option("--grid-factor", s.opt.grid_factor,
                      "scan nodes per mean spacing");
  }
  {
    Subcommand& s = make("kacrice", "analytic zero density across the real line",
                         &cmd_kacrice);
    s.opt.y = "0,0.25,0.5,1,2,4";
    s.cmd->add_option("--n", s.opt.n, "polynomial degree");
    s.cmd->add_option("--y", s.opt.y, "comma-separated x values");
  }
  {
    Subcommand& s = make("validate", "run the cross-module invariant suite",
                         &cmd_validate);
    s.cmd->add_option("--n", s.opt.n, "polynomial degree");
    s.cmd->add_option("--grid-factor", s.opt.grid_factor,
                      "scan nodes per mean spacing");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, s] : subs) {
      if (!s.cmd->parsed()) continue;
      merge_config(s.opt, &s.opt, s.cmd);
      return s.fn(s.opt);
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
