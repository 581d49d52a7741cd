#include "ammlab/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "ammlab/error.hpp"
#include "ammlab/random.hpp"

namespace ammlab {

LatencyCdf::LatencyCdf(std::vector<LatencyPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) fail(Errc::invalid_argument, "latency CDF needs at least two points");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].percentile <= points_[i - 1].percentile || points_[i].ms < points_[i - 1].ms) {
      fail(Errc::invalid_argument, "latency percentile points must be increasing");
    }
  }
  if (points_.front().percentile != 0 || points_.back().percentile != 100) {
    fail(Errc::invalid_argument, "latency points must span percentiles 0 to 100");
  }
  if (points_.front().ms < 0) fail(Errc::invalid_argument, "negative latency");
}

double LatencyCdf::quantile(double p) const {
  p = std::clamp(p, 0.0, 100.0);
  auto hi = std::lower_bound(points_.begin(), points_.end(), p,
                             [](const LatencyPoint& a, double v) { return a.percentile < v; });
  if (hi == points_.begin()) return hi->ms;
  auto lo = std::prev(hi);
  const double t = (p - lo->percentile) / (hi->percentile - lo->percentile);
  return lo->ms + t * (hi->ms - lo->ms);
}

void NetSimConfig::validate() const {
  if (!(block_interval_min > 0)) fail(Errc::invalid_argument, "block interval must be positive");
  if (!(block_size_kb_mean >= 0) || !(block_size_kb_std >= 0)) {
    fail(Errc::invalid_argument, "block size mean and std must be non-negative");
  }
  if (!(min_block_kb >= 0)) fail(Errc::invalid_argument, "minimum block size must be non-negative");
  LatencyCdf check(latency);
  if (hashrate.empty()) fail(Errc::invalid_argument, "at least one miner is required");
  double sum = 0;
  for (double h : hashrate) {
    if (!(h >= 0)) fail(Errc::invalid_argument, "hashrate shares must be non-negative");
    sum += h;
  }
  if (!(sum > 0) || sum > 1.0 + 1e-9) fail(Errc::invalid_argument, "hashrate shares must sum to (0, 1]");
  if (batches < 1) fail(Errc::invalid_argument, "batches must be at least 1");
  if (blocks < static_cast<std::uint64_t>(batches)) fail(Errc::invalid_argument, "fewer blocks than batches");
  if (!(bandwidth_mbps > 0)) fail(Errc::precondition, "bandwidth must be positive");
}

namespace {

const std::vector<LatencyPoint> kEthLatency{{0, 0},       {10, 95.5},  {33, 138}, {50, 180},
                                            {67, 215.5}, {90, 280.5}, {100, 300}};

NetSimConfig preset(std::string chain, double interval, double mean, double sd, std::vector<double> pct) {
  NetSimConfig c;
  c.chain = std::move(chain);
  c.block_interval_min = interval;
  c.block_size_kb_mean = mean;
  c.block_size_kb_std = sd;
  c.latency = kEthLatency;
  for (double p : pct) c.hashrate.push_back(p / 100.0);
  c.bandwidth_mbps = 70;
  return c;
}

}  // namespace

NetSimConfig chain_preset(const std::string& chain) {
  if (chain == "eth") {
    return preset(chain, 0.223, 44.0, 3.0, {24.3, 19.3, 10.4, 5.8, 4.6, 4.3, 3.8, 2.8, 2.6, 2.5});
  }
  if (chain == "btc") {
    return preset(chain, 9.474, 863.8, 25.0, {17.9, 15.5, 11.9, 11.4, 9.9, 8.7, 8.1, 4.3, 2.7, 2.5});
  }
  if (chain == "ltc") {
    return preset(chain, 2.59, 61.1, 33.4, {16.0, 14.4, 14.0, 12.2, 11.4, 10.2, 9.2, 7.4, 1.8, 1.2});
  }
  if (chain == "doge") {
    return preset(chain, 1.07, 15.9, 14.9, {14.9, 13.61, 13.38, 12.58, 11.46, 10.74, 8.68, 7.35, 1.47, 0.73});
  }
  fail(Errc::invalid_argument, "unknown chain '" + chain + "' (eth, btc, ltc, doge)");
}

std::vector<std::string> chain_names() { return {"eth", "btc", "ltc", "doge"}; }

void to_json(json& j, const NetSimConfig& c) {
  json lat = json::array();
  for (const auto& p : c.latency) lat.push_back({p.percentile, p.ms});
  json hr = json::array();
  for (double h : c.hashrate) hr.push_back(std::round(h * 1e6) / 1e4);
  j = json{{"chain", c.chain},
           {"block_interval_min", c.block_interval_min},
           {"block_size_kb", {{"mean", c.block_size_kb_mean}, {"std", c.block_size_kb_std}, {"min", c.min_block_kb}}},
           {"latency_ms", lat},
           {"hashrate_percent", hr},
           {"bandwidth_mbps", c.bandwidth_mbps},
           {"seed", c.seed},
           {"blocks", c.blocks},
           {"batches", c.batches}};
}

void from_json(const json& j, NetSimConfig& c) {
  try {
    c = NetSimConfig{};
    c.chain = j.value("chain", std::string{});
    c.block_interval_min = j.at("block_interval_min").get<double>();
    const json& size = j.at("block_size_kb");
    c.block_size_kb_mean = size.at("mean").get<double>();
    c.block_size_kb_std = size.at("std").get<double>();
    c.min_block_kb = size.value("min", 1.0);
    for (const auto& p : j.at("latency_ms")) c.latency.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& h : j.at("hashrate_percent")) c.hashrate.push_back(h.get<double>() / 100.0);
    c.bandwidth_mbps = j.value("bandwidth_mbps", 70.0);
    c.seed = j.value("seed", std::uint64_t{1});
    c.blocks = j.value("blocks", std::uint64_t{10000});
    c.batches = j.value("batches", 10);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad netsim config: ") + e.what());
  }
}

NetSimConfig read_netsim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, "config '" + path + "' is not JSON: " + e.what());
  }
  return j.get<NetSimConfig>();
}

namespace {

struct Block {
  std::int64_t parent = -1;
  std::uint64_t height = 0;
};

struct Head {
  std::uint64_t height = 0;
  std::int64_t block = 0;
};

struct Delivery {
  double time;
  std::size_t miner;
  std::int64_t block;
  bool operator>(const Delivery& o) const {
    if (time != o.time) return time > o.time;
    if (miner != o.miner) return miner > o.miner;
    return block > o.block;
  }
};

struct BatchOutcome {
  std::uint64_t blocks = 0;
  std::uint64_t stale = 0;
  std::vector<std::uint64_t> wins;
};

BatchOutcome run_batch(const NetSimConfig& c, const LatencyCdf& cdf, std::uint64_t n_blocks, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t miners = c.hashrate.size();
  std::discrete_distribution<std::size_t> pick(c.hashrate.begin(), c.hashrate.end());
  const double interval_s = c.block_interval_min * 60.0;
  const double upload_copies = static_cast<double>(miners > 1 ? miners - 1 : 0);

  std::vector<Block> blocks{{-1, 0}};  // genesis
  std::vector<Head> head(miners);
  std::priority_queue<Delivery, std::vector<Delivery>, std::greater<>> pending;
  BatchOutcome out;
  out.wins.assign(miners, 0);

  double now = 0;
  std::vector<double> latency(miners);
  for (std::uint64_t i = 0; i < n_blocks; ++i) {
    now += rng.exponential(interval_s);
    const std::size_t m = pick(rng.engine());
    double kb = c.block_size_kb_std > 0 ? rng.normal(c.block_size_kb_mean, c.block_size_kb_std) : c.block_size_kb_mean;
    if (kb < c.min_block_kb) kb = c.min_block_kb;
    for (auto& l : latency) l = cdf.quantile(rng.uniform(0.0, 100.0)) / 1000.0;

    while (!pending.empty() && pending.top().time <= now) {
      const Delivery d = pending.top();
      pending.pop();
      if (blocks[d.block].height > head[d.miner].height) head[d.miner] = {blocks[d.block].height, d.block};
    }
    const auto id = static_cast<std::int64_t>(blocks.size());
    blocks.push_back({head[m].block, head[m].height + 1});
    head[m] = {head[m].height + 1, id};
    ++out.wins[m];

    const double transfer = upload_copies * kb * 8.0 / 1000.0 / c.bandwidth_mbps;
    for (std::size_t r = 0; r < miners; ++r) {
      if (r != m) pending.push({now + transfer + latency[r], r, id});
    }
  }
  // Deepest block wins; the earliest produced on a tie.
  std::int64_t tip = 0;
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    if (blocks[b].height > blocks[tip].height) tip = static_cast<std::int64_t>(b);
  }
  out.blocks = n_blocks;
  out.stale = n_blocks - blocks[tip].height;
  return out;
}

}  // namespace

SimResult simulate(const NetSimConfig& config) {
  config.validate();
  const LatencyCdf cdf(config.latency);
  SimResult r;
  r.wins.assign(config.hashrate.size(), 0);
  std::vector<double> rates;
  const auto batches = static_cast<std::uint64_t>(config.batches);
  for (std::uint64_t b = 0; b < batches; ++b) {
    const std::uint64_t n = config.blocks / batches + (b < config.blocks % batches ? 1 : 0);
    BatchOutcome o = run_batch(config, cdf, n, derive_seed(config.seed, b));
    r.blocks += o.blocks;
    r.stale += o.stale;
    for (std::size_t m = 0; m < o.wins.size(); ++m) r.wins[m] += o.wins[m];
    rates.push_back(static_cast<double>(o.stale) / static_cast<double>(o.blocks));
  }
  r.stale_rate = static_cast<double>(r.stale) / static_cast<double>(r.blocks);
  if (rates.size() > 1) {
    const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / rates.size();
    double ss = 0;
    for (double x : rates) ss += (x - mean) * (x - mean);
    r.stderr_ = std::sqrt(ss / (rates.size() - 1) / rates.size());
  }
  return r;
}

StaleRateCurve fit_quadratic(std::vector<CurvePoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.bandwidth_mbps);
  if (distinct.size() < 3) fail(Errc::precondition, "quadratic fit needs at least three distinct bandwidths");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bw = points[static_cast<std::size_t>(i)].bandwidth_mbps;
    a(i, 0) = bw * bw;
    a(i, 1) = bw;
    a(i, 2) = 1.0;
    y(i) = 100.0 * points[static_cast<std::size_t>(i)].stale_rate;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3) fail(Errc::precondition, "degenerate quadratic fit");
  const Eigen::Vector3d coef = qr.solve(y);
  StaleRateCurve curve;
  curve.points = std::move(points);
  curve.a = coef(0);
  curve.b = coef(1);
  curve.c = coef(2);
  return curve;
}

StaleRateCurve sweep_and_fit(const NetSimConfig& config, const std::vector<double>& bandwidths, int jobs) {
  if (bandwidths.size() < 3) fail(Errc::precondition, "sweep needs at least three bandwidths");
  for (double bw : bandwidths) {
    NetSimConfig c = config;
    c.bandwidth_mbps = bw;
    c.validate();
  }
  std::vector<CurvePoint> points(bandwidths.size());
  auto run = [&](std::size_t i) {
    NetSimConfig c = config;
    c.bandwidth_mbps = bandwidths[i];
    SimResult r = simulate(c);
    points[i] = {bandwidths[i], r.stale_rate, r.stderr_};
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs > 0 ? static_cast<std::size_t>(jobs) : 1, 1, bandwidths.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < bandwidths.size(); ++i) run(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < bandwidths.size(); i += workers) run(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return fit_quadratic(std::move(points));
}

double flooding_degradation(double base_mbps, double overhead_megabits, double interval_s, double amplification,
                            double min_mbps) {
  if (!(base_mbps > 0) || !(overhead_megabits > 0) || !(interval_s > 0)) {
    fail(Errc::precondition, "bandwidth, overhead and interval must be positive");
  }
  if (!(amplification >= 0)) fail(Errc::precondition, "amplification must be non-negative");
  const double effective = base_mbps - overhead_megabits / interval_s * amplification;
  if (!(effective > 0)) fail(Errc::saturation, "flooding saturates the link");
  return std::max(effective, min_mbps);
}

json to_json(const StaleRateCurve& curve) {
  json pts = json::array();
  for (const auto& p : curve.points) {
    pts.push_back({{"bandwidth_mbps", p.bandwidth_mbps}, {"stale_rate", p.stale_rate}, {"stderr", p.stderr_}});
  }
  return json{{"fit_percent", {{"a", curve.a}, {"b", curve.b}, {"c", curve.c}}}, {"points", pts}};
}

std::string curve_csv(const StaleRateCurve& curve) {
  std::ostringstream os;
  os.precision(10);
  os << "bandwidth,stale_rate,stderr\n";
  for (const auto& p : curve.points) os << p.bandwidth_mbps << ',' << p.stale_rate << ',' << p.stderr_ << '\n';
  return os.str();
}

}  // namespace ammlab
