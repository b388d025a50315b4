#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "so2zeros/common.hpp"

using namespace so2zeros;

TEST_SUITE("common") {

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
    double z = norm_ppf(p);
    CHECK(oracle::norm_cdf(z) == doctest::Approx(p).epsilon(1e-11));
  }
  CHECK(norm_ppf(0.5) == 0.0);
  CHECK_THROWS_AS(norm_ppf(0.0), ContractError);
  CHECK_THROWS_AS(norm_ppf(1.0), ContractError);
}

TEST_CASE("normal cdf matches erfc form") {
  for (double t : {-8.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0})
    CHECK(norm_cdf(t) == doctest::Approx(oracle::norm_cdf(t)).epsilon(1e-14));
}

TEST_CASE("compensated sum survives cancellation-heavy input") {
  // 2^20 copies of 2^-60 hide under a unit offset; plain accumulation drops
  // every one of them, the compensated sum keeps them through the cancel.
  const int reps = 1 << 20;
  const double tiny = std::ldexp(1.0, -60);
  KahanSum acc;
  acc.add(1.0);
  double naive = 1.0;
  for (int i = 0; i < reps; ++i) {
    acc.add(tiny);
    naive += tiny;
  }
  acc.add(-1.0);
  naive += -1.0;
  double expect = std::ldexp(1.0, -40);
  CHECK(acc.value() == doctest::Approx(expect).epsilon(1e-6));
  CHECK(naive == 0.0);
}

TEST_CASE("trial seeds decorrelate nearby trials") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.push_back(trial_seed(7, t));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(trial_seed(7, 3) != trial_seed(8, 3));
  // low bits must differ too, not just high ones
  int low_changes = 0;
  for (std::uint64_t t = 0; t + 1 < 64; ++t)
    low_changes += ((trial_seed(1, t) ^ trial_seed(1, t + 1)) & 1) != 0;
  CHECK(low_changes > 10);
}

TEST_CASE("parallel blocks cover the range exactly once") {
  for (int workers : {1, 3, 7}) {
    std::vector<std::atomic<int>> hits(101);
    for (auto& h : hits) h = 0;
    parallel_blocks(101, workers, [&](Index lo, Index hi) {
      CHECK(lo <= hi);
      for (Index i = lo; i < hi; ++i) hits[i]++;
    });
    for (auto& h : hits) CHECK(h == 1);
  }
  parallel_blocks(0, 2, [&](Index, Index) { CHECK(false); });
  CHECK_THROWS_AS(parallel_blocks(5, 0, [](Index, Index) {}), ContractError);
}

TEST_CASE("formatted doubles round-trip exactly") {
  for (double v : {0.0, 1.0 / 3.0, -2.7182818284590452, 1e-300, 8.125,
                   0.07376759275306015}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

}  // TEST_SUITE
