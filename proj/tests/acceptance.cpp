// Copyright 2026 The chainsense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
//
// usage: acceptance <path-to-chainsense-cli> <golden-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chainsense.hpp"
#include "oracles.hpp"

namespace {

using namespace chainsense;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

Model SingleCluster(int n, double threshold,
                    TraceMode mode = TraceMode::kSurvivors) {
  std::vector<SensorSpec> specs;
  for (int id = 1; id <= n; ++id)
    specs.push_back({id, "s" + std::to_string(id), "u", 0.0, 1.0, "A"});
  EngineConfig cfg;
  cfg.threshold = threshold;
  cfg.trace_mode = mode;
  return validate_config(specs, cfg);
}

ReadingFrame RandomFrame(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ReadingFrame f{1, {}};
  for (int id = 1; id <= n; ++id) f.values[id] = u(rng);
  return f;
}

// Thresholds spread across (0, 1): half uniform, half log-uniform down to
// 1e-4 so that survivor sets are not trivially empty.
double RandomThreshold(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double t = 0;
  do {
    t = (rng() & 1) ? u(rng) : std::pow(10.0, -4.0 * u(rng));
  } while (!(t > 0.0 && t < 1.0));
  return t;
}

bool SameSurvivors(const ClusterReport& a, const ClusterReport& b,
                   double tol, std::string& why) {
  if (a.survivor_list.size() != b.survivor_list.size()) {
    why = "survivor counts " + std::to_string(a.survivor_list.size()) + " vs " +
          std::to_string(b.survivor_list.size());
    return false;
  }
  for (std::size_t k = 0; k < a.survivor_list.size(); ++k) {
    if (a.survivor_list[k].sequence != b.survivor_list[k].sequence) {
      why = "survivor sequences differ";
      return false;
    }
    if (std::fabs(a.survivor_list[k].final_value -
                  b.survivor_list[k].final_value) > tol) {
      why = "final values differ beyond tolerance";
      return false;
    }
  }
  return true;
}

// --- criteria --------------------------------------------------------------

Verdict CouplingTableReproduction() {
  Verdict v;
  const CouplingTable t = build_table(8);
  for (int i = 1; i <= 8; ++i)
    for (int j = 1; j <= 8; ++j) {
      // Exact rational k / 8 with k = 8 - |i - j|.
      v.require(t.numerator(i, j) == 8 - std::abs(i - j),
                "numerator mismatch at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      v.require(t(i, j) * 8.0 == static_cast<double>(8 - std::abs(i - j)),
                "real entry is not exactly k/8");
    }
  for (int n = 1; n <= 64; ++n) {
    const CouplingTable m = build_table(n);
    for (int i = 1; i <= n; ++i) {
      v.require(m.numerator(i, i) == n, "diagonal not 1 for n=" +
                                            std::to_string(n));
      for (int j = 1; j <= n; ++j)
        v.require(m.numerator(i, j) == m.numerator(j, i),
                  "asymmetric for n=" + std::to_string(n));
    }
  }
  return v;
}

Verdict OracleEquivalence() {
  Verdict v;
  std::mt19937_64 rng(0xA11CE);
  std::uint64_t survivors = 0;
  for (int n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 200 && v.ok; ++trial) {
      const Model m = SingleCluster(n, RandomThreshold(rng));
      const ReadingFrame f = RandomFrame(rng, n);
      const AlarmReport got = run_cycle(f, m);
      const AlarmReport want = oracle_run_cycle(f, m);
      std::string why;
      v.require(SameSurvivors(got.clusters[0], want.clusters[0], 1e-12, why),
                "n=" + std::to_string(n) + ": " + why);
      v.require(got.alarm == want.alarm, "alarm flags differ");
      survivors += got.clusters[0].survivors;
    }
  }
  v.require(survivors > 0, "no survivors at all: comparison is vacuous");
  if (v.ok) v.detail = std::to_string(survivors) + " surviving sequences matched";
  return v;
}

Verdict Boundedness() {
  Verdict v;
  std::mt19937_64 rng(0xB0B);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<double> x = testing::random_unit_values(rng, n);
    if (trial % 50 == 0) std::fill(x.begin(), x.end(), 1.0);
    if (trial % 50 == 1) std::fill(x.begin(), x.end(), 0.0);
    const std::vector<int> seq = testing::random_permutation(rng, n);
    const EvaluationTrace t =
        evaluate_chain(seq, x, CouplingTable(n), 0.5, Pruning::kDisabled);
    v.require(t.levels.size() == static_cast<std::size_t>(n - 1),
              "incomplete trace");
    for (double e : t.levels) {
      v.require(e >= 0.0 && e <= 1.0, "level value outside [0, 1]");
      ++checked;
    }
  }
  if (v.ok) v.detail = std::to_string(checked) + " level values";
  return v;
}

Verdict Exhaustiveness() {
  Verdict v;
  for (int n = 1; n <= 8; ++n) {
    std::set<std::vector<int>> emitted;
    std::map<int, std::uint64_t> leaders;
    std::uint64_t count = 0;
    SequenceStream s = enumerate_sequences(n);
    while (s.next()) {
      emitted.emplace(s.current().begin(), s.current().end());
      ++leaders[s.current().front()];
      ++count;
    }
    const auto reference = testing::heap_permutations(n);
    const std::set<std::vector<int>> expected(reference.begin(), reference.end());
    v.require(count == factorial(n) && emitted.size() == count,
              "n=" + std::to_string(n) + ": not exactly n! distinct");
    v.require(emitted == expected, "n=" + std::to_string(n) + ": set mismatch");
    for (const auto& [id, c] : leaders)
      v.require(c == factorial(n - 1), "uneven leaders for n=" +
                                           std::to_string(n));
  }
  std::mt19937_64 rng(8);
  const Model m = SingleCluster(8, 0.001);
  const auto start = std::chrono::steady_clock::now();
  const AlarmReport r = run_cycle(RandomFrame(rng, 8), m);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  v.require(r.clusters[0].evaluated == 40320, "n=8 did not evaluate 8!");
  v.require(secs < 10.0, "n=8 evaluation took " + std::to_string(secs) + " s");
  if (v.ok) {
    std::ostringstream os;
    os << "n=8 run_cycle " << secs * 1e3 << " ms";
    v.detail = os.str();
  }
  return v;
}

Verdict PruningSoundness() {
  Verdict v;
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 5;
    const Model m = SingleCluster(n, RandomThreshold(rng));
    const ReadingFrame f = RandomFrame(rng, n);
    RunOptions off;
    off.pruning = Pruning::kDisabled;
    const AlarmReport pruned = run_cycle(f, m);
    const AlarmReport full = run_cycle(f, m, off);
    std::string why;
    v.require(SameSurvivors(pruned.clusters[0], full.clusters[0], 1e-12, why),
              why);
    v.require(pruned.clusters[0].survivors == full.clusters[0].survivors,
              "survivor counts differ");
  }
  return v;
}

Verdict ThresholdMonotonicity() {
  Verdict v;
  std::mt19937_64 rng(0x7E57);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    double lo = RandomThreshold(rng), hi = RandomThreshold(rng);
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) continue;
    const ReadingFrame f = RandomFrame(rng, n);
    const AlarmReport rl = run_cycle(f, SingleCluster(n, lo));
    const AlarmReport rh = run_cycle(f, SingleCluster(n, hi));
    std::set<std::vector<int>> low;
    for (const auto& s : rl.clusters[0].survivor_list) low.insert(s.sequence);
    for (const auto& s : rh.clusters[0].survivor_list)
      v.require(low.count(s.sequence) == 1,
                "survivor at higher threshold missing at lower threshold");
  }
  return v;
}

Verdict NormalizationProperties() {
  Verdict v;
  std::mt19937_64 rng(0x40A1);
  std::uniform_real_distribution<double> loc(-50.0, 50.0);
  std::uniform_real_distribution<double> width(1.0, 200.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.5, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double lo = loc(rng);
    const SensorSpec s{1, "s", "u", lo, lo + width(rng), "A"};
    v.require(normalize_value(s, s.x_min) == 0.0, "x_min does not map to 0");
    v.require(normalize_value(s, s.x_max) == 1.0, "x_max does not map to 1");

    double xa = std::min(s.x_min + unit(rng) * (s.x_max - s.x_min), s.x_max);
    double xb = std::min(s.x_min + unit(rng) * (s.x_max - s.x_min), s.x_max);
    if (xa > xb) std::swap(xa, xb);
    if (xa < xb)
      v.require(normalize_value(s, xa) < normalize_value(s, xb),
                "not strictly monotone");

    const double alpha = scale(rng), beta = loc(rng);
    const SensorSpec t{1, "s", "u", alpha * s.x_min + beta,
                       alpha * s.x_max + beta, "A"};
    const double moved = std::clamp(alpha * xa + beta, t.x_min, t.x_max);
    v.require(std::fabs(normalize_value(t, moved) - normalize_value(s, xa)) <=
                  1e-12,
              "affine invariance violated");
  }
  return v;
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult RunCli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Verdict Determinism(const std::string& cli) {
  Verdict v;
  const std::string args =
      "--layout 6,5 --cycles 4 --seed 31 --anomaly 3:2 --anomaly 9:4:0.8 "
      "--trace-mode full";
  const CliResult a = RunCli(cli, args + " --workers 1");
  const CliResult b = RunCli(cli, args + " --workers 1");
  const CliResult c = RunCli(cli, args + " --workers 4");
  v.require(!a.out.empty(), "empty report");
  v.require(a.out == b.out, "two runs with one worker differ");
  v.require(a.out == c.out, "one worker and four workers differ");
  v.require(a.code == b.code && a.code == c.code, "exit codes differ");
  if (v.ok) v.detail = std::to_string(a.out.size()) + " identical bytes x3";
  return v;
}

Verdict CliGolden(const std::string& cli, const std::filesystem::path& golden) {
  Verdict v;
  const std::string base = "--layout 4,3 --cycles 5 --seed 2026";
  const CliResult anomalous = RunCli(cli, base + " --anomaly 2:3:1.0");
  const CliResult baseline = RunCli(cli, base);

  std::ifstream in(golden / "synthetic_4_3_anomaly.json", std::ios::binary);
  const std::string expected((std::istreambuf_iterator<char>(in)), {});
  v.require(!expected.empty(), "golden file missing");
  v.require(anomalous.out == expected, "report differs from golden file");
  v.require(anomalous.code == kExitAlarm,
            "anomalous run exit code " + std::to_string(anomalous.code));
  v.require(baseline.code == kExitOk,
            "baseline run exit code " + std::to_string(baseline.code));
  if (!v.ok) return v;

  const auto doc = nlohmann::json::parse(anomalous.out);
  const auto quiet = nlohmann::json::parse(baseline.out);
  for (std::size_t k = 0; k < doc["cycles"].size(); ++k) {
    const auto& cycle = doc["cycles"][k];
    const bool injected = cycle["timestamp"] == 3;
    v.require(cycle["alarm"].get<bool>() == injected,
              "alarm flag wrong at cycle " + std::to_string(k + 1));
    const auto& clusters = cycle["clusters"];
    // Sensor 2 belongs to the first cluster.
    v.require(!clusters[0]["survivor_sequences"].empty() == injected,
              "injected cluster survivors wrong at cycle " +
                  std::to_string(k + 1));
    v.require(clusters[1]["survivor_sequences"].empty(),
              "survivors in the non-injected cluster");
    if (!injected)
      v.require(cycle == quiet["cycles"][k],
                "baseline cycle differs from the anomaly-free run");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <chainsense-cli> <golden-dir>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const std::filesystem::path golden = argv[2];

  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1 coupling table n=8 exact, symmetry n<=64", 1.0,
       CouplingTableReproduction},
      {"AC2 oracle equivalence n=2..7 x 200 frames (1e-12)", 60.0,
       OracleEquivalence},
      {"AC3 boundedness of level values, 1e4 chains", 10.0, Boundedness},
      {"AC4 exhaustive n! enumeration, n=8 under 10 s", 60.0, Exhaustiveness},
      {"AC5 pruning soundness, 500 instances (1e-12)", 60.0, PruningSoundness},
      {"AC6 threshold monotonicity, 100 instances", 60.0,
       ThresholdMonotonicity},
      {"AC7 normalization endpoints/monotone/affine (1e-12)", 60.0,
       NormalizationProperties},
      {"AC8 byte-identical reports across runs and workers {1,4}", 60.0,
       [&] { return Determinism(cli); }},
      {"AC9 CLI golden run, 2 clusters 4+3, one anomaly", 60.0,
       [&] { return CliGolden(cli, golden); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (v.ok && secs >= c.budget_s) {
      v.ok = false;
      v.detail = "over time budget";
    }
    if (!v.ok) ++failures;
    std::printf("[%s] %-58s %9.1f ms  %s\n", v.ok ? "PASS" : "FAIL", c.name,
                secs * 1e3, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
