#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace ammlab::testing {

struct CliRun {
  int status = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout; stderr is captured too when
/// `merge_stderr` is set.
inline CliRun run_shell(const std::string& cmd, bool merge_stderr = false) {
  CliRun r;
  const std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(full.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("ammlab-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

inline void write_stream(const std::filesystem::path& p) {
  std::ofstream out(p);
  const char* dirs[] = {"x_to_y", "y_to_x"};
  for (int i = 0; i < 40; ++i) {
    out << R"({"seq":)" << i << R"(,"market_hint":"m)" << i % 3 << R"(","direction":")" << dirs[i % 2]
        << R"(","amount_in":")" << 1000 + 7919 * i << "\"}\n";
  }
  out << "{broken\n";
}

struct CliCase {
  std::string name;
  std::string args;
  std::vector<std::string> files;  // written by the command, compared too
};

/// One invocation per subcommand, run from inside a scratch directory so
/// that relative paths print identically.
inline std::vector<CliCase> determinism_cases() {
  const std::string pools = "--pool 1000000000,3000000000 --pool 2000000000,5000000000 --pool 700000000,2200000000";
  return {
      {"swap", "swap --x 1000000 --y 1000000 --in 100000", {}},
      {"swap-json", "--format json swap --x 1000000 --y 1000000 --in 100000 --dir y_to_x", {}},
      {"route", "--format json route --pool 1000000,2000000 --pool 1000000,1000000 --in 600000", {}},
      {"arb", "arb --pool1 1000000,2000000 --pool2 1000000,1000000", {}},
      {"arb-n", "--format json arb --n-pool " + pools, {}},
      {"plan", "--format json plan " + pools + " --in 5000 --execute", {}},
      {"replay", "--format json replay " + pools + " --stream stream.jsonl --mode a2mm --final-pools final.json",
       {"final.json"}},
      {"replay-csv", "--format csv replay " + pools + " --stream stream.jsonl --mode amm", {}},
      {"oracle", "--seed 11 --format json oracle --kind arb --count 4", {}},
      {"oracle-all", "--seed 11 oracle --kind all --count 3 --out-dir fx",
       {"fx/swap.json", "fx/arb.json", "fx/route2.json", "fx/route3.json", "fx/sync.json"}},
      {"gen-trace", "--seed 5 gen-trace --trace-out trace.jsonl --key key.json --arbitrages 8 --blockspace 20 "
                    "--network 30 --decoys 10",
       {"trace.jsonl", "key.json"}},
      {"analyze", "--format json analyze --trace trace.jsonl --key key.json", {}},
      {"analyze-csv", "--format csv analyze --trace trace.jsonl", {}},
      {"netsim", "--seed 3 netsim --chain eth --blocks 1000 --bandwidth 40", {}},
      {"netsim-sweep", "--seed 3 --format csv netsim --chain eth --blocks 1000 --bandwidths 10,20,...,50 "
                       "--fit-out fit.json",
       {"fit.json"}},
      {"netsim-flood", "netsim --flood 70,1.92,13,200", {}},
  };
}

}  // namespace ammlab::testing
