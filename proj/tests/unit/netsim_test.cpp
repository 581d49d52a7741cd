#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ammlab/error.hpp"
#include "ammlab/netsim.hpp"
#include "ammlab/random.hpp"
#include "test_support.hpp"

using namespace ammlab;

namespace {

NetSimConfig small_eth(std::uint64_t blocks = 4000) {
  NetSimConfig c = chain_preset("eth");
  c.blocks = blocks;
  c.seed = 42;
  return c;
}

}  // namespace

TEST(Flooding, PublishedExample) {
  EXPECT_NEAR(flooding_degradation(70, 1.92, 13, 200), 40.46, 0.005);
}

TEST(Flooding, NoAmplificationLeavesBandwidth) { EXPECT_DOUBLE_EQ(flooding_degradation(70, 1.92, 13, 0), 70.0); }

TEST(Flooding, LinearInAmplification) {
  const double base = flooding_degradation(100, 2, 10, 0);
  const double one = base - flooding_degradation(100, 2, 10, 10);
  for (double a : {20.0, 50.0, 120.0}) {
    EXPECT_NEAR(base - flooding_degradation(100, 2, 10, a), one * a / 10, 1e-9);
  }
}

TEST(Flooding, FloorAndSaturation) {
  EXPECT_DOUBLE_EQ(flooding_degradation(70, 1.92, 13, 200, 45), 45.0);
  try {
    flooding_degradation(70, 1.92, 13, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::saturation);
  }
  EXPECT_THROW(flooding_degradation(0, 1, 1, 1), Error);
}

TEST(LatencyCdf, InterpolatesPoints) {
  LatencyCdf cdf(chain_preset("eth").latency);
  EXPECT_DOUBLE_EQ(cdf.quantile(50), 180.0);
  EXPECT_DOUBLE_EQ(cdf.quantile(90), 280.5);
  EXPECT_NEAR(cdf.quantile(5), 47.75, 1e-9);
  EXPECT_THROW(LatencyCdf({{0, 0}, {50, 10}}), Error);
  EXPECT_THROW(LatencyCdf({{0, 5}, {50, 4}, {100, 10}}), Error);
}

TEST(LatencyCdf, SamplesReproducePercentiles) {
  LatencyCdf cdf(chain_preset("eth").latency);
  Rng rng(801);
  std::vector<double> s(100'000);
  for (auto& v : s) v = cdf.quantile(rng.uniform(0, 100));
  std::sort(s.begin(), s.end());
  for (const auto& p : cdf.points()) {
    if (p.percentile == 0 || p.percentile == 100) continue;
    const double emp = s[static_cast<std::size_t>(p.percentile / 100.0 * (s.size() - 1))];
    EXPECT_NEAR(emp, p.ms, 0.02 * p.ms) << p.percentile;
  }
}

TEST(Config, PresetsValidateAndRoundTrip) {
  for (const auto& name : chain_names()) {
    NetSimConfig c = chain_preset(name);
    EXPECT_NO_THROW(c.validate());
    json j = c;
    NetSimConfig back = j.get<NetSimConfig>();
    EXPECT_EQ(json(back).dump(), j.dump()) << name;
  }
  EXPECT_THROW(chain_preset("xrp"), Error);
}

TEST(Config, CommittedFilesMatchPresets) {
  for (const auto& name : chain_names()) {
    NetSimConfig c = read_netsim_config(ammlab::testing::fixture_path("netsim/" + name + ".json"));
    EXPECT_EQ(json(c).dump(), json(chain_preset(name)).dump()) << name;
  }
}

TEST(Config, Validation) {
  NetSimConfig c = small_eth();
  c.bandwidth_mbps = 0;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
  c = small_eth();
  c.hashrate = {0.7, 0.7};
  EXPECT_THROW(c.validate(), Error);
  c = small_eth();
  c.block_interval_min = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Simulate, SingleMinerNeverForks) {
  NetSimConfig c = small_eth(2000);
  c.hashrate = {0.5};
  SimResult r = simulate(c);
  EXPECT_EQ(r.stale, 0u);
  EXPECT_EQ(r.stale_rate, 0.0);
  EXPECT_EQ(r.blocks, 2000u);
}

TEST(Simulate, Deterministic) {
  SimResult a = simulate(small_eth()), b = simulate(small_eth());
  EXPECT_EQ(a.stale, b.stale);
  EXPECT_EQ(a.wins, b.wins);
  NetSimConfig other = small_eth();
  other.seed = 43;
  EXPECT_NE(simulate(other).wins, a.wins);
}

TEST(Simulate, WinsFollowHashrate) {
  NetSimConfig c = small_eth(20'000);
  SimResult r = simulate(c);
  double total = 0;
  for (double h : c.hashrate) total += h;
  std::uint64_t n = 0;
  for (auto w : r.wins) n += w;
  ASSERT_EQ(n, r.blocks);
  for (std::size_t i = 0; i < c.hashrate.size(); ++i) {
    const double p = c.hashrate[i] / total;
    const double sigma = std::sqrt(n * p * (1 - p));
    EXPECT_LE(std::fabs(static_cast<double>(r.wins[i]) - n * p), 3 * sigma) << "miner " << i;
  }
}

TEST(Simulate, SlowerLinksForkMore) {
  NetSimConfig slow = small_eth(), fast = small_eth();
  slow.bandwidth_mbps = 5;
  fast.bandwidth_mbps = 200;
  SimResult a = simulate(slow), b = simulate(fast);
  EXPECT_GT(a.stale_rate, b.stale_rate);
  EXPECT_GT(a.stderr_, 0.0);
}

TEST(Fit, RecoversAnExactQuadratic) {
  std::vector<CurvePoint> pts;
  for (double b = 10; b <= 100; b += 10) pts.push_back({b, (0.000158 * b * b - 0.03541 * b + 7.531) / 100, 0});
  StaleRateCurve c = fit_quadratic(pts);
  EXPECT_NEAR(c.a, 0.000158, 1e-9);
  EXPECT_NEAR(c.b, -0.03541, 1e-8);
  EXPECT_NEAR(c.c, 7.531, 1e-7);
  EXPECT_NEAR(c.eval_percent(70), 0.000158 * 4900 - 0.03541 * 70 + 7.531, 1e-7);
}

TEST(Fit, NeedsThreeDistinctBandwidths) {
  EXPECT_THROW(fit_quadratic({{10, 0.1, 0}, {10, 0.1, 0}, {20, 0.05, 0}}), Error);
  EXPECT_THROW(sweep_and_fit(small_eth(100), {50, 50, 50}), Error);
  EXPECT_THROW(sweep_and_fit(small_eth(100), {10, 20}), Error);
}

TEST(Fit, FlatResponseGivesFlatCurve) {
  // Latency-free, tiny blocks: bandwidth barely matters.
  NetSimConfig c = small_eth(3000);
  c.block_size_kb_mean = 0.001;
  c.block_size_kb_std = 0;
  c.min_block_kb = 0.001;
  c.latency = {{0, 0}, {100, 0}};
  StaleRateCurve curve = sweep_and_fit(c, {10, 40, 70, 100});
  EXPECT_NEAR(curve.a, 0.0, 1e-6);
  EXPECT_NEAR(curve.b, 0.0, 1e-4);
}

TEST(Sweep, JobCountDoesNotChangeResults) {
  NetSimConfig c = small_eth(1500);
  const std::vector<double> bws{10, 40, 70, 100};
  EXPECT_EQ(curve_csv(sweep_and_fit(c, bws, 1)), curve_csv(sweep_and_fit(c, bws, 4)));
  EXPECT_EQ(to_json(sweep_and_fit(c, bws, 1)).dump(), to_json(sweep_and_fit(c, bws, 2)).dump());
}
