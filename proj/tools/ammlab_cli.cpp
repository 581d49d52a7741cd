#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ammlab/arbitrage.hpp"
#include "ammlab/engine.hpp"
#include "ammlab/error.hpp"
#include "ammlab/fixtures.hpp"
#include "ammlab/netsim.hpp"
#include "ammlab/oracle.hpp"
#include "ammlab/routing.hpp"
#include "ammlab/serialize.hpp"
#include "ammlab/trace.hpp"

using namespace ammlab;

namespace {

constexpr std::uint64_t kDefaultSeed = 7;
constexpr double kDefaultTolerance = 5e-4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string format;
  int jobs = 1;
  double tolerance = kDefaultTolerance;
  std::string out;
};

std::uint64_t env_seed() {
  if (const char* s = std::getenv("AMMLAB_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw UsageError(std::string("AMMLAB_SEED is not an integer: ") + s);
    }
  }
  return kDefaultSeed;
}

double env_tolerance() {
  if (const char* s = std::getenv("AMMLAB_TOLERANCE")) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw UsageError(std::string("AMMLAB_TOLERANCE is not a number: ") + s);
    }
  }
  return kDefaultTolerance;
}

Amount amount_arg(const std::string& flag, const std::string& text) {
  try {
    return Amount::parse(text);
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

Direction direction_arg(const std::string& text) {
  try {
    return parse_direction(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--dir: ") + e.what());
  }
}

PoolState pool_arg(const std::string& flag, const std::string& text, std::string id) {
  try {
    return parse_pool_spec(text, std::move(id));
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, "'" + path + "' is not JSON: " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(Errc::io_error, "write to '" + path + "' failed");
}

// Pools from repeated --pool specs (ids m0, m1, ...) or a JSON file.
std::vector<PoolState> load_pools(const std::vector<std::string>& specs, const std::string& file) {
  if (!specs.empty() && !file.empty()) throw UsageError("use either --pool or --pools, not both");
  if (!file.empty()) return pools_from_json(read_json_file(file));
  if (specs.empty()) throw UsageError("no pools given (--pool x,y[,num,den] or --pools FILE)");
  std::vector<PoolState> pools;
  for (std::size_t i = 0; i < specs.size(); ++i) pools.push_back(pool_arg("--pool", specs[i], "m" + std::to_string(i)));
  return pools;
}

class Output {
 public:
  Output(const Globals& g, std::string fallback, std::set<std::string> allowed) : g_(g) {
    format_ = g.format.empty() ? std::move(fallback) : g.format;
    if (!allowed.count(format_)) throw UsageError("--format " + format_ + " is not supported by this command");
  }
  const std::string& format() const { return format_; }
  std::ostringstream& stream() { return os_; }
  void json_doc(const json& j) { os_ << j.dump(2) << '\n'; }
  void flush() {
    if (g_.out.empty()) {
      std::cout << os_.str();
    } else {
      write_file(g_.out, os_.str());
    }
  }

 private:
  const Globals& g_;
  std::string format_;
  std::ostringstream os_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<double> parse_bandwidths(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  std::vector<double> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == "...") {
      if (out.size() < 2 || i + 1 >= parts.size()) throw UsageError("--bandwidths: '...' needs two values before and one after");
      const double step = out[out.size() - 1] - out[out.size() - 2];
      double end = 0;
      try {
        end = std::stod(parts[i + 1]);
      } catch (const std::exception&) {
        throw UsageError("--bandwidths: bad value '" + parts[i + 1] + "'");
      }
      if (!(step > 0)) throw UsageError("--bandwidths: '...' needs an increasing progression");
      for (double v = out.back() + step; v < end - step * 1e-9; v += step) out.push_back(v);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(parts[i], &used));
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("--bandwidths: bad value '" + parts[i] + "'");
    }
  }
  return out;
}

std::vector<StreamItem> read_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open stream '" + path + "'");
  std::vector<StreamItem> items;
  std::string line;
  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    StreamItem item;
    item.seq = n++;
    try {
      item.record = stream_record_from_json(json::parse(line));
      item.seq = item.record->seq;
    } catch (const json::exception& e) {
      item.error = std::string("malformed record: ") + e.what();
    } catch (const Error& e) {
      item.error = e.what();
    }
    items.push_back(std::move(item));
  }
  return items;
}

// --- subcommands -----------------------------------------------------------

struct SwapArgs {
  std::string x, y, in, min_out = "0", dir = "x_to_y";
  std::uint64_t fee_num = 997, fee_den = 1000;
};

void run_swap(const Globals& g, const SwapArgs& a) {
  Output out(g, "text", {"text", "json", "csv"});
  const PoolState pool = make_pool("m0", amount_arg("--x", a.x).value(), amount_arg("--y", a.y).value(),
                                   FeeRate{a.fee_num, a.fee_den});
  const SwapAction action{"m0", direction_arg(a.dir), amount_arg("--in", a.in), amount_arg("--min-out", a.min_out)};
  const SwapResult r = apply_swap(pool, action);
  if (out.format() == "text") {
    out.stream() << r.amount_out << '\n';
  } else if (out.format() == "csv") {
    out.stream() << "amount_out,x,y\n" << r.amount_out << ',' << r.pool.x << ',' << r.pool.y << '\n';
  } else {
    out.json_doc(json{{"amount_out", r.amount_out}, {"pool", r.pool}});
  }
  out.flush();
}

struct RouteArgs {
  std::vector<std::string> pools;
  std::string pools_file, in, dir = "x_to_y";
};

void run_route(const Globals& g, const RouteArgs& a) {
  Output out(g, "json", {"text", "json", "csv"});
  const auto pools = load_pools(a.pools, a.pools_file);
  const RoutePlan plan = route(pools, direction_arg(a.dir), amount_arg("--in", a.in));
  if (out.format() == "json") {
    out.json_doc(plan);
  } else if (out.format() == "csv") {
    out.stream() << "market_id,amount_in,expected_out\n";
    for (const auto& l : plan.legs) out.stream() << csv_field(l.market_id) << ',' << l.amount_in << ',' << l.expected_out << '\n';
  } else {
    for (const auto& l : plan.legs) out.stream() << l.market_id << ' ' << l.amount_in << " -> " << l.expected_out << '\n';
    out.stream() << "total " << plan.expected_total_out << '\n';
  }
  out.flush();
}

struct ArbArgs {
  std::string pool1, pool2;
  bool n_pool = false;
  std::vector<std::string> pools;
  std::string pools_file, asset = "x";
};

void run_arb(const Globals& g, const ArbArgs& a) {
  Output out(g, "text", {"text", "json"});
  Asset asset = Asset::x;
  if (a.asset == "y") asset = Asset::y;
  else if (a.asset != "x") throw UsageError("--asset must be x or y");

  if (a.n_pool) {
    if (!a.pool1.empty() || !a.pool2.empty()) throw UsageError("--n-pool takes --pool or --pools, not --pool1/--pool2");
    const NPoolResult r = n_pool_arbitrage(load_pools(a.pools, a.pools_file), asset);
    if (out.format() == "json") {
      out.json_doc(r);
    } else {
      out.stream() << "profit " << to_string(r.profit) << ' ' << to_string(r.profit_asset) << '\n'
                   << "swaps " << r.counts.swaps << '\n'
                   << "arbitrage_computations " << r.counts.arbitrage_computations << '\n'
                   << "sync_computations " << r.counts.sync_computations << '\n';
    }
    out.flush();
    return;
  }
  if (a.pool1.empty() || a.pool2.empty()) throw UsageError("arb needs --pool1 and --pool2 (or --n-pool)");
  const PoolState p1 = pool_arg("--pool1", a.pool1, "pool1");
  const PoolState p2 = pool_arg("--pool2", a.pool2, "pool2");
  std::optional<ArbPlan> plan;
  try {
    plan = plan_two_point(p1, p2, asset);
  } catch (const Error& e) {
    if (e.code() != Errc::not_profitable) throw;
  }
  if (out.format() == "json") {
    json j{{"profitable", plan.has_value()}};
    if (plan) {
      j["optimal_input"] = plan->legs.front().amount_in;
      j["plan"] = *plan;
    }
    out.json_doc(j);
  } else if (plan) {
    out.stream() << "optimal_input " << plan->legs.front().amount_in << '\n'
                 << "profit " << to_string(plan->expected_profit) << ' ' << to_string(plan->profit_asset) << '\n';
  } else {
    out.stream() << "not profitable\n";
  }
  out.flush();
}

struct PlanArgs {
  std::vector<std::string> pools;
  std::string pools_file, in, min_out = "0", dir = "x_to_y", sandwich_min;
  bool no_arb = false;
  bool execute = false;
};

EngineOptions engine_options(const std::string& sandwich_min) {
  EngineOptions opt;
  if (!sandwich_min.empty()) {
    const Amount limit = amount_arg("--sandwich-min", sandwich_min);
    opt.sandwichable = [limit](const A2mmRequest& r, const std::vector<PoolState>&) { return r.amount_in >= limit; };
  }
  return opt;
}

void run_plan(const Globals& g, const PlanArgs& a) {
  Output out(g, "json", {"text", "json"});
  const auto pools = load_pools(a.pools, a.pools_file);
  A2mmRequest req{direction_arg(a.dir), amount_arg("--in", a.in), amount_arg("--min-out", a.min_out), !a.no_arb};
  const BatchPlan p = plan(req, pools, engine_options(a.sandwich_min));
  std::optional<ExecutionReport> report;
  if (a.execute) report = execute(p, pools).second;
  if (out.format() == "json") {
    json j{{"plan", p}};
    if (report) j["execution"] = *report;
    out.json_doc(j);
  } else {
    out.stream() << "leaf " << to_string(p.leaf) << '\n'
                 << "expected_out " << p.expected_out << '\n'
                 << "arb_profit " << to_string(p.arb_profit) << ' ' << to_string(p.arb_asset) << '\n'
                 << "cost_units " << p.cost_units << '\n';
    if (report) out.stream() << "amount_out " << report->amount_out << '\n';
  }
  out.flush();
}

struct ReplayArgs {
  std::vector<std::string> pools;
  std::string pools_file, stream, mode = "a2mm", final_pools, sandwich_min;
};

void run_replay(const Globals& g, const ReplayArgs& a) {
  Output out(g, "json", {"json", "csv"});
  ReplayMode mode{};
  try {
    mode = parse_replay_mode(a.mode);
  } catch (const Error& e) {
    throw UsageError(std::string("--mode: ") + e.what());
  }
  std::vector<PoolState> final_state;
  const auto entries = replay(read_stream(a.stream), load_pools(a.pools, a.pools_file), mode,
                              engine_options(a.sandwich_min), &final_state);
  if (out.format() == "json") {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back(e);
    out.json_doc(arr);
  } else {
    out.stream() << "seq,ok,leaf,amount_out,amm_out,routing_gain,arb_profit,arb_asset,legs_executed,cost_units,error\n";
    for (const auto& e : entries) {
      out.stream() << e.seq << ',' << (e.ok ? 1 : 0) << ',' << (e.ok ? to_string(e.leaf) : "") << ',' << e.amount_out
                   << ',' << e.amm_out << ',' << to_string(e.routing_gain) << ',' << to_string(e.arb_profit) << ','
                   << to_string(e.arb_asset) << ',' << e.legs_executed << ',' << e.cost_units << ','
                   << csv_field(e.error) << '\n';
    }
  }
  if (!a.final_pools.empty()) {
    json arr = json::array();
    for (const auto& p : final_state) arr.push_back(p);
    write_file(a.final_pools, arr.dump(2) + "\n");
  }
  out.flush();
}

struct OracleArgs {
  std::string kind, out_dir, check;
  int count = 100;
};

void run_oracle(const Globals& g, const OracleArgs& a) {
  Output out(g, "json", {"json"});
  if (!a.check.empty()) {
    const FixtureCheck c = check_fixtures(read_json_file(a.check), g.tolerance);
    out.json_doc(json{{"kind", c.kind},
                      {"count", c.count},
                      {"failures", c.failures},
                      {"max_rel_error", c.max_rel_error},
                      {"tolerance", g.tolerance},
                      {"messages", c.messages}});
    out.flush();
    if (c.failures > 0) fail(Errc::precondition, std::to_string(c.failures) + " fixture(s) outside tolerance");
    return;
  }
  if (a.kind.empty()) throw UsageError("oracle needs --kind (or --check FILE)");
  if (a.count < 0) throw UsageError("--count must be non-negative");
  if (a.kind == "all") {
    if (a.out_dir.empty()) throw UsageError("--kind all needs --out-dir");
    std::filesystem::create_directories(a.out_dir);
    json summary = json::object();
    for (const auto& k : fixture_kinds()) {
      const json items = generate_fixtures(k, a.count, g.seed, g.jobs);
      write_file((std::filesystem::path(a.out_dir) / (k + ".json")).string(), items.dump(2) + "\n");
      summary[k] = items.size();
    }
    out.json_doc(summary);
  } else {
    out.json_doc(generate_fixtures(a.kind, a.count, g.seed, g.jobs));
  }
  out.flush();
}

struct AnalyzeArgs {
  std::string trace, key;
};

json compare_with_key(const OverheadReport& r, const AnswerKey& key) {
  auto ids = [](const auto& v) {
    std::set<std::string> s;
    for (const auto& e : v) s.insert(e.tx_id);
    return s;
  };
  auto score = [](const std::set<std::string>& found, const std::set<std::string>& truth) {
    std::size_t hit = 0;
    for (const auto& id : truth) hit += found.count(id);
    const std::size_t fp = found.size() - hit;
    return json{{"expected", truth.size()},
                {"found", found.size()},
                {"recall", truth.empty() ? 1.0 : static_cast<double>(hit) / truth.size()},
                {"false_positives", fp}};
  };
  std::set<std::string> arbs(r.arbitrages.begin(), r.arbitrages.end());
  std::set<std::string> key_arbs(key.arbitrages.begin(), key.arbitrages.end());
  std::size_t mislabeled = 0;
  for (const auto& k : key.blockspace) {
    for (const auto& o : r.blockspace) {
      if (o.tx_id == k.tx_id && (o.label != k.label || o.distance != k.distance)) ++mislabeled;
    }
  }
  return json{{"arbitrages", score(arbs, key_arbs)},
              {"blockspace", score(ids(r.blockspace), ids(key.blockspace))},
              {"network", score(ids(r.network), ids(key.network))},
              {"blockspace_mislabeled", mislabeled},
              {"histogram_match", r.front_distance == key.front_distance && r.back_distance == key.back_distance}};
}

void run_analyze(const Globals& g, const AnalyzeArgs& a) {
  Output out(g, "json", {"json", "csv"});
  TraceIndex index(read_trace_file(a.trace));
  for (const auto& w : index.trace().warnings) std::cerr << "warning: " << w << '\n';
  const OverheadReport r = analyze(index);
  if (out.format() == "csv") {
    out.stream() << histogram_csv(r);
  } else {
    json j = to_json(r);
    if (!a.key.empty()) j["key_comparison"] = compare_with_key(r, answer_key_from_json(read_json_file(a.key)));
    out.json_doc(j);
  }
  out.flush();
}

struct GenTraceArgs {
  std::string out, key;
  CorpusConfig cfg;
};

void run_gen_trace(const Globals& g, GenTraceArgs a) {
  Output out(g, "json", {"json"});
  a.cfg.seed = g.seed;
  const Corpus c = generate_corpus(a.cfg);
  std::ostringstream trace;
  write_trace(trace, c.trace);
  write_file(a.out, trace.str());
  write_file(a.key, to_json(c.key).dump(2) + "\n");
  out.json_doc(json{{"seed", a.cfg.seed},
                    {"blocks", c.trace.blocks.size()},
                    {"transactions", c.trace.txs.size()},
                    {"markets", c.trace.markets.size()},
                    {"arbitrages", c.key.arbitrages.size()},
                    {"blockspace_overheads", c.key.blockspace.size()},
                    {"network_overheads", c.key.network.size()}});
  out.flush();
}

struct NetsimArgs {
  std::string config, chain, bandwidths, fit_out, flood;
  std::optional<double> bandwidth;
  std::optional<std::uint64_t> blocks;
  std::optional<int> batches;
  double min_bandwidth = 0;
  bool dump_config = false;
};

void run_netsim(const Globals& g, const NetsimArgs& a) {
  if (!a.flood.empty()) {
    Output out(g, "json", {"json", "text"});
    std::vector<double> v;
    try {
      std::stringstream ss(a.flood);
      for (std::string item; std::getline(ss, item, ',');) v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--flood expects BASE_MBPS,OVERHEAD_MEGABITS,INTERVAL_S,AMPLIFICATION");
    }
    if (v.size() != 4) throw UsageError("--flood expects BASE_MBPS,OVERHEAD_MEGABITS,INTERVAL_S,AMPLIFICATION");
    const double eff = flooding_degradation(v[0], v[1], v[2], v[3], a.min_bandwidth);
    if (out.format() == "text") out.stream() << eff << '\n';
    else out.json_doc(json{{"effective_bandwidth_mbps", eff}});
    out.flush();
    return;
  }
  if (a.config.empty() == a.chain.empty()) throw UsageError("netsim needs exactly one of --config or --chain");
  NetSimConfig cfg = a.config.empty() ? chain_preset(a.chain) : read_netsim_config(a.config);
  if (g.seed_given) cfg.seed = g.seed;
  if (a.blocks) cfg.blocks = *a.blocks;
  if (a.batches) cfg.batches = *a.batches;
  if (a.dump_config) {
    Output out(g, "json", {"json"});
    out.json_doc(cfg);
    out.flush();
    return;
  }
  if (!a.bandwidths.empty()) {
    Output out(g, "csv", {"csv", "json"});
    const StaleRateCurve curve = sweep_and_fit(cfg, parse_bandwidths(a.bandwidths), g.jobs);
    const json fit = to_json(curve)["fit_percent"];
    if (out.format() == "json") {
      out.json_doc(to_json(curve));
    } else {
      out.stream() << curve_csv(curve);
      if (a.fit_out.empty()) std::cerr << fit.dump() << '\n';
    }
    if (!a.fit_out.empty()) write_file(a.fit_out, fit.dump(2) + "\n");
    out.flush();
    return;
  }
  Output out(g, "json", {"json", "csv"});
  if (a.bandwidth) cfg.bandwidth_mbps = *a.bandwidth;
  const SimResult r = simulate(cfg);
  if (out.format() == "csv") {
    out.stream() << "bandwidth,stale_rate,stderr\n" << cfg.bandwidth_mbps << ',' << r.stale_rate << ',' << r.stderr_ << '\n';
  } else {
    out.json_doc(json{{"chain", cfg.chain},
                      {"bandwidth_mbps", cfg.bandwidth_mbps},
                      {"blocks", r.blocks},
                      {"stale", r.stale},
                      {"stale_rate", r.stale_rate},
                      {"stderr", r.stderr_},
                      {"wins", r.wins}});
  }
  out.flush();
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ammlab: AMM routing, arbitrage, trace forensics and propagation simulation.\n"
               "Amounts are decimal integers in base units of the asset. Pools are given as\n"
               "X,Y[,FEE_NUM,FEE_DEN] reserves (fee defaults to 997/1000 of the input kept)."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;

  app.add_option("--seed", g.seed, "RNG seed (default 7, or $AMMLAB_SEED)");
  app.add_option("--format", g.format, "Output format: text, json or csv (default depends on command)")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--jobs", g.jobs, "Worker threads for parallel sweeps and fixture generation")
      ->check(CLI::PositiveNumber);
  app.add_option("--tolerance", g.tolerance, "Relative tolerance for fixture checks (default 5e-4, or $AMMLAB_TOLERANCE)");
  app.add_option("--out", g.out, "Write the main output to this file instead of stdout");

  SwapArgs swap;
  auto* sw = app.add_subcommand("swap", "Quote and apply one swap on a constant-product pool");
  sw->add_option("--x", swap.x, "X reserve (base units)")->required();
  sw->add_option("--y", swap.y, "Y reserve (base units)")->required();
  sw->add_option("--in", swap.in, "Input amount (base units)")->required();
  sw->add_option("--min-out", swap.min_out, "Revert when the output is below this (base units)");
  sw->add_option("--dir", swap.dir, "x_to_y or y_to_x");
  sw->add_option("--fee-num", swap.fee_num, "Fee numerator: share of input kept, over --fee-den");
  sw->add_option("--fee-den", swap.fee_den, "Fee denominator");

  RouteArgs rt;
  auto* ro = app.add_subcommand("route", "Split one swap across pools of the same pair");
  ro->add_option("--pool", rt.pools, "Pool X,Y[,FEE_NUM,FEE_DEN] in base units; repeat per pool (ids m0, m1, ...)");
  ro->add_option("--pools", rt.pools_file, "JSON file with an array of pools");
  ro->add_option("--in", rt.in, "Total input (base units)")->required();
  ro->add_option("--dir", rt.dir, "x_to_y or y_to_x");

  ArbArgs arb;
  auto* ar = app.add_subcommand("arb", "Optimal two-point arbitrage, or the n-pool narrowing arbitrage");
  ar->add_option("--pool1", arb.pool1, "First pool X,Y[,FEE_NUM,FEE_DEN] (base units)");
  ar->add_option("--pool2", arb.pool2, "Second pool X,Y[,FEE_NUM,FEE_DEN] (base units)");
  ar->add_flag("--n-pool", arb.n_pool, "Run the n-pool arbitrage over --pool/--pools");
  ar->add_option("--pool", arb.pools, "Pool for --n-pool; repeat per pool");
  ar->add_option("--pools", arb.pools_file, "JSON pool file for --n-pool");
  ar->add_option("--asset", arb.asset, "Asset the profit is taken in: x or y");

  PlanArgs pl;
  auto* pn = app.add_subcommand("plan", "Plan (and optionally execute) a routed swap with arbitrage");
  pn->add_option("--pool", pl.pools, "Pool X,Y[,FEE_NUM,FEE_DEN] (base units); repeat per pool");
  pn->add_option("--pools", pl.pools_file, "JSON pool file");
  pn->add_option("--in", pl.in, "Input amount (base units)")->required();
  pn->add_option("--min-out", pl.min_out, "Minimum acceptable output (base units)");
  pn->add_option("--dir", pl.dir, "x_to_y or y_to_x");
  pn->add_flag("--no-arb", pl.no_arb, "Disable the arbitrage step");
  pn->add_option("--sandwich-min", pl.sandwich_min, "Treat inputs at or above this (base units) as sandwich-exposed");
  pn->add_flag("--execute", pl.execute, "Also execute the compressed plan and report the result");

  ReplayArgs rp;
  auto* re = app.add_subcommand("replay", "Replay a JSON-lines swap stream against pools");
  re->add_option("--pool", rp.pools, "Pool X,Y[,FEE_NUM,FEE_DEN] (base units); repeat per pool");
  re->add_option("--pools", rp.pools_file, "JSON pool file");
  re->add_option("--stream", rp.stream, "JSON-lines requests: {seq, market_hint, direction, amount_in, min_amount_out}")
      ->required();
  re->add_option("--mode", rp.mode, "amm (hinted pool only) or a2mm (routing and arbitrage)");
  re->add_option("--final-pools", rp.final_pools, "Write the final pool states to this JSON file");
  re->add_option("--sandwich-min", rp.sandwich_min, "Treat inputs at or above this (base units) as sandwich-exposed");

  OracleArgs orc;
  auto* oc = app.add_subcommand("oracle", "Generate brute-force oracle fixtures or check closed forms against them (amounts in base units)");
  oc->add_option("--kind", orc.kind, "swap, arb, route2, route3, sync or all");
  oc->add_option("--count", orc.count, "Instances per kind");
  oc->add_option("--out-dir", orc.out_dir, "Directory for --kind all (one KIND.json per kind)");
  oc->add_option("--check", orc.check, "Fixture file to check against the closed forms (uses --tolerance)");

  AnalyzeArgs an;
  auto* az = app.add_subcommand("analyze", "Detect arbitrages and classify overhead transactions in a trace");
  az->add_option("--trace", an.trace, "JSON-lines trace (times in ms)")->required();
  az->add_option("--key", an.key, "Answer key to score the result against");

  GenTraceArgs gt;
  auto* gn = app.add_subcommand("gen-trace", "Generate a synthetic trace with planted overhead and its answer key (amounts in base units, times in ms)");
  gn->add_option("--trace-out", gt.out, "Trace output path (JSON lines)")->required();
  gn->add_option("--key", gt.key, "Answer key output path (JSON)")->required();
  gn->add_option("--arbitrages", gt.cfg.arbitrages, "Planted successful arbitrages");
  gn->add_option("--blockspace", gt.cfg.blockspace_overheads, "Planted block-space overhead transactions");
  gn->add_option("--network", gt.cfg.network_overheads, "Planted network overhead transactions");
  gn->add_option("--decoys", gt.cfg.decoys, "Decoy transactions");

  NetsimArgs ns;
  auto* nt = app.add_subcommand("netsim", "Stale-block simulation (bandwidth in Mbit/s, latency in ms, sizes in kB)");
  nt->add_option("--config", ns.config, "Config JSON file");
  nt->add_option("--chain", ns.chain, "Built-in config: eth, btc, ltc or doge");
  nt->add_option("--bandwidth", ns.bandwidth, "Single run at this bandwidth (Mbit/s)");
  nt->add_option("--bandwidths", ns.bandwidths, "Sweep, e.g. 10,20,...,100 (Mbit/s); prints CSV and the fit");
  nt->add_option("--fit-out", ns.fit_out, "Write the quadratic fit (percent units) to this JSON file");
  nt->add_option("--blocks", ns.blocks, "Simulated blocks per run");
  nt->add_option("--batches", ns.batches, "Batches for the standard error");
  nt->add_option("--flood", ns.flood, "BASE_MBPS,OVERHEAD_MEGABITS,INTERVAL_S,AMPLIFICATION: effective bandwidth");
  nt->add_option("--min-bandwidth", ns.min_bandwidth, "Floor for --flood (Mbit/s)");
  nt->add_flag("--dump-config", ns.dump_config, "Print the resolved config and exit");

  try {
    g.seed = env_seed();
    g.tolerance = env_tolerance();
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return 2;
  }
  g.seed_given = app.count("--seed") > 0 || std::getenv("AMMLAB_SEED") != nullptr;

  try {
    if (*sw) run_swap(g, swap);
    else if (*ro) run_route(g, rt);
    else if (*ar) run_arb(g, arb);
    else if (*pn) run_plan(g, pl);
    else if (*re) run_replay(g, rp);
    else if (*oc) run_oracle(g, orc);
    else if (*az) run_analyze(g, an);
    else if (*gn) run_gen_trace(g, gt);
    else if (*nt) run_netsim(g, ns);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error("io_error", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
