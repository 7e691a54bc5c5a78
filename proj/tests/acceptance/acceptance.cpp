// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "circcs/diagnostics/scenarios.hpp"

namespace fs = std::filesystem;
namespace diag = circcs::diagnostics;

namespace {

constexpr std::uint64_t kPrngSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome scenario(const char* name, double time_limit = 0.0) {
  const auto* info = diag::find_scenario(name);
  if (info == nullptr) return {false, std::string("missing scenario ") + name};
  const auto rep = diag::run_scenario(*info, info->default_trials, kPrngSeed);
  std::ostringstream d;
  d << name << " trials=" << rep.trials << " max_err=" << rep.max_valid_error
    << " min_dev=" << rep.min_invalid_deviation << " t=" << rep.seconds << "s";
  bool ok = rep.passed;
  if (!rep.failures.empty()) d << " first failure: " << rep.failures.front();
  if (time_limit > 0.0 && rep.seconds >= time_limit) {
    ok = false;
    d << " (over " << time_limit << " s)";
  }
  return {ok, d.str()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CIRCCS_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Every file-producing command, run into `dir`. Returns false on any
/// nonzero exit.
bool run_pipelines(const fs::path& dir) {
  const auto p = [&](const char* name) { return (dir / name).string(); };
  std::ofstream(p("cfg.json")) << R"({"n": 64, "m": 16, "nodes": 8, "prng_seed": 5, "operation": "filter",
  "filter": {"taps": [0.5, -1.0, 0.25], "convention": "first-col"}, "parallel": true, "order": [3,1,2,8,7,6,5,4]})";
  const std::vector<std::string> steps = {
      "gen-seed --n 128 --prng-seed 7 --out " + p("seed.json"),
      "gen-seed --n 64 --prng-seed 8 --out " + p("seed64.json"),
      "gen-signal --n 128 --prng-seed 9 --out " + p("x.json"),
      "gen-signal --n 32 --prng-seed 10 --out " + p("x32.json"),
      "acquire --seed-file " + p("seed.json") + " --m 32 --signal " + p("x.json") + " --out " + p("y.json"),
      "filter --in " + p("y.json") + " --taps 1,-2,0.5 --convention first-row --out " + p("yf.json"),
      "diff2 --in " + p("y.json") + " --out " + p("yd.json"),
      "acquire --decimated --seed-file " + p("seed64.json") + " --m 16 --signal " + p("x32.json") + " --out " +
          p("ydec.json"),
      "interp2 --in " + p("ydec.json") + " --out " + p("yi.json"),
      "acquire --even-odd --seed-file " + p("seed.json") + " --m 32 --signal " + p("x.json") + " --out " +
          p("ysplit.json"),
      "wavelet53 --even " + p("ysplit.even.json") + " --odd " + p("ysplit.odd.json") + " --out " + p("yw.json"),
      "shift-find --z " + p("y.json") + " --v " + p("y.json") + " --s-max 8 --out " + p("est.json"),
      "register --in " + p("y.json") + " --s 3 --mode same --out " + p("rs.json"),
      "register --in " + p("y.json") + " --s 3 --mode reseed --out " + p("rr.json"),
      "simulate-nodes --config " + p("cfg.json") + " --out " + p("ens.json"),
  };
  for (const auto& s : steps) {
    if (run_cli(s) != 0) {
      std::cerr << "  command failed: " << s << "\n";
      return false;
    }
  }
  return true;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "circcs_acceptance";
  fs::remove_all(root);
  const fs::path a = root / "a";
  const fs::path b = root / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  if (!run_pipelines(a) || !run_pipelines(b)) return {false, "a pipeline command failed"};

  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto other = b / entry.path().filename();
    if (entry.path().filename() == "cfg.json") continue;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, "outputs differ: " + entry.path().filename().string()};
    }
    ++compared;
  }

  for (const char* name : {"theorem1", "commutator", "theorem2", "diff2", "interp2", "shift", "register", "wavelet53"}) {
    if (run_cli(std::string("oracle-check --scenario ") + name) != 0) {
      return {false, std::string("oracle-check --scenario ") + name + " failed"};
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(compared) + " output files byte-identical; oracle-check 1-8 exit 0"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, [] { return scenario("theorem1", 10.0); }},
      {2, [] { return scenario("commutator"); }},
      {3, [] { return scenario("theorem2"); }},
      {4, [] { return scenario("diff2"); }},
      {5, [] { return scenario("interp2"); }},
      {6, [] { return scenario("shift", 5.0); }},
      {7, [] { return scenario("register"); }},
      {8, [] { return scenario("wavelet53"); }},
      {9, [] { return scenario("sensing"); }},
      {10, cli_determinism},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  (" << o.detail << ")\n";
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
