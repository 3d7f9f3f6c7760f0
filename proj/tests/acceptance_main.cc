// Copyright 2026 The Seedforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion, each with the measured
// values behind the verdict. Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seedforge/common.h"
#include "seedforge/config.h"
#include "seedforge/corpus_selector.h"
#include "seedforge/experimenter.h"
#include "seedforge/grey_fuzzer.h"
#include "seedforge/input_model.h"
#include "seedforge/llm_gateway.h"
#include "seedforge/rng.h"
#include "seedforge/seed_synthesis.h"
#include "seedforge/target_zoo.h"
#include "./artifact_gen.h"
#include "./mw_oracle.h"
#include "./test_util.h"

namespace seedforge {
namespace {

namespace fs = std::filesystem;
using testing::ScopedTempDir;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(const char *fmt, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Published (baseline time, subject time, printed ratio) triples; rows with
// a timeout on either side carry no ratio and are absent.
struct RatioRow {
  const char *label;
  double baseline;
  double subject;
  double printed;
};

constexpr RatioRow kTimeRows[] = {
    {"PNG003/AFLGo", 14, 12, 1.17},        {"PNG003/AFL", 15, 12, 1.25},
    {"PNG003/Fairfuzz", 3, 12, 0.25},      {"PNG003/Entropic", 4, 12, 0.33},
    {"PNG007/AFLGo", 28975, 7070, 4.10},   {"PNG007/Fairfuzz", 7007, 7070, 0.99},
    {"PNG007/Entropic", 9967, 7070, 1.41}, {"TIF007/AFLGo", 3761, 585, 6.43},
    {"TIF007/AFL", 6812, 585, 11.64},      {"TIF007/Fairfuzz", 98, 585, 0.17},
    {"TIF007/Entropic", 835, 585, 1.43},   {"TIF012/AFLGo", 38764, 3856, 10.05},
    {"TIF012/AFL", 14058, 3856, 3.65},     {"TIF012/Fairfuzz", 845, 3856, 0.22},
    {"TIF014/AFLGo", 38480, 6897, 5.58},   {"TIF014/AFL", 18505, 6897, 2.68},
    {"TIF014/Fairfuzz", 62319, 6897, 9.04}, {"XML017/AFLGo", 16, 15, 1.07},
    {"XML017/AFL", 18, 15, 1.2},           {"XML017/Fairfuzz", 20, 15, 1.33},
    {"XML017/Entropic", 14, 15, 0.93},     {"PDF010/AFLGo", 37895, 175, 216.54},
    {"PDF010/AFL", 6794, 175, 38.82},      {"PDF010/Fairfuzz", 37932, 175, 216.75},
    {"PDF010/Entropic", 18790, 175, 107.37}, {"PDF016/AFLGo", 187, 32, 5.84},
    {"PDF016/AFL", 265, 32, 8.28},         {"PDF016/Fairfuzz", 13856, 32, 433},
    {"PDF016/Entropic", 39, 32, 1.22},
};

constexpr RatioRow kReachRows[] = {
    {"PNG001/AFLGo", 109712322, 279868596, 0.39}, {"PNG001/AFL", 28333100, 279868596, 0.10},
    {"PNG001/Fairfuzz", 138522498, 279868596, 0.49}, {"PNG001/Entropic", 303421286, 279868596, 1.08},
    {"PNG003/AFLGo", 30901, 10, 3090.1},   {"PNG003/AFL", 58190, 10, 5819},
    {"PNG003/Fairfuzz", 8648, 10, 864.8},  {"PNG003/Entropic", 20637, 10, 2063.7},
    {"PNG007/AFLGo", 16452364, 731047, 22.51}, {"PNG007/AFL", 10951093, 731047, 14.98},
    {"PNG007/Fairfuzz", 6335404, 731047, 8.67}, {"PNG007/Entropic", 1045254, 731047, 1.43},
    {"TIF007/AFLGo", 2582, 2, 1291},       {"TIF007/AFL", 1880, 2, 940},
    {"TIF007/Fairfuzz", 401, 2, 200.5},    {"TIF007/Entropic", 4000, 2, 2000},
    {"TIF012/AFLGo", 32891737, 603697, 54.48}, {"TIF012/AFL", 28300878, 603697, 46.88},
    {"TIF012/Fairfuzz", 2730622, 603697, 4.52}, {"TIF012/Entropic", 3903720, 603697, 6.47},
    {"TIF014/AFLGo", 514837, 203452, 2.53}, {"TIF014/AFL", 363487, 203452, 1.77},
    {"TIF014/Fairfuzz", 2141687, 203452, 10.53}, {"TIF014/Entropic", 121037, 203452, 0.59},
    {"XML017/AFLGo", 2339, 84, 27.85},     {"XML017/AFL", 2503, 84, 29.80},
    {"XML017/Fairfuzz", 2501, 84, 29.77},  {"XML017/Entropic", 517, 84, 6.15},
    {"PDF010/AFLGo", 37895, 7027, 5.39},   {"PDF010/AFL", 147850, 7027, 21.04},
    {"PDF010/Fairfuzz", 1050, 7027, 0.15}, {"PDF010/Entropic", 3655, 7027, 0.52},
    {"PDF016/AFLGo", 234893, 2010, 116.86}, {"PDF016/AFL", 143734, 2010, 71.51},
    {"PDF016/Fairfuzz", 10869658, 2010, 5407.79}, {"PDF016/Entropic", 32252, 2010, 16.05},
};

// The printed 1.77x cannot come from the printed counts under any rounding
// (363487 / 203452 = 1.7866).
constexpr const char *kInconsistentReachRow = "TIF014/AFL";

Verdict TimeRatios() {
  double worst = 0;
  std::string worst_row;
  int ok = 0, total = 0;
  for (const auto &r : kTimeRows) {
    double err = std::fabs(SpeedupRatio(r.baseline, r.subject) - r.printed);
    ++total;
    if (err <= 0.01) ++ok;
    if (err > worst) {
      worst = err;
      worst_row = r.label;
    }
  }
  return {ok == total, Format("%d/%d finite time ratios within +-0.01 (largest error %.4f at %s); "
                              "28975/7070=%.2f 38764/3856=%.2f 37895/175=%.2f",
                              ok, total, worst, worst_row.c_str(), SpeedupRatio(28975, 7070),
                              SpeedupRatio(38764, 3856), SpeedupRatio(37895, 175))};
}

Verdict ReachRatios() {
  int ok = 0, total = 0;
  std::string mismatches;
  bool only_known = true;
  for (const auto &r : kReachRows) {
    double got = ReachRatio(r.baseline, r.subject);
    ++total;
    // Printed ratios carry at most two decimals.
    if (std::fabs(std::round(got * 100) / 100 - r.printed) < 1e-9) {
      ++ok;
      continue;
    }
    mismatches += Format(" %s printed %.2f computed %.4f;", r.label, r.printed, got);
    only_known = only_known && std::string(r.label) == kInconsistentReachRow;
  }
  bool exact = ReachRatio(58190, 10) == 5819.0 && ReachRatio(2582, 2) == 1291.0 &&
               ReachRatio(30901, 10) == 3090.1;
  return {exact && only_known && ok >= total - 1,
          Format("%d/%d reach ratios equal the printed value at printed precision; "
                 "58190/10=%.1f 2582/2=%.1f 30901/10=%.1f; mismatches:%s%s",
                 ok, total, ReachRatio(58190, 10), ReachRatio(2582, 2), ReachRatio(30901, 10),
                 mismatches.empty() ? " none" : mismatches.c_str(),
                 mismatches.empty() ? "" : " (printed inputs do not yield the printed ratio)")};
}

Verdict ExactTest() {
  Rng rng(20261016);
  double worst = 0;
  int u_mismatch = 0;
  for (int i = 0; i < 200; ++i) {
    size_t n = 1 + rng.Below(8);
    size_t m = 1 + rng.Below(10 - n);
    std::vector<double> a(n), b(m);
    const uint64_t spread = 2 + rng.Below(12);  // small spreads force ties
    for (auto &x : a) x = static_cast<double>(rng.Below(spread));
    for (auto &x : b) x = static_cast<double>(rng.Below(spread));
    MannWhitneyResult got = MannWhitneyExact(a, b);
    testing::BruteForceMw want = testing::MannWhitneyBruteForce(a, b);
    if (got.u != want.u) ++u_mismatch;
    worst = std::max({worst, std::fabs(got.p_two_sided - want.p_two_sided),
                      std::fabs(got.p_less - want.p_less),
                      std::fabs(got.p_greater - want.p_greater)});
  }
  MannWhitneyResult sep = MannWhitneyExact({1, 2}, {3, 4});
  bool sep_ok = sep.u == 0 && std::fabs(sep.p_less - 1.0 / 6.0) < 1e-15 &&
                std::fabs(sep.p_two_sided - 1.0 / 3.0) < 1e-15;
  return {worst <= 1e-12 && u_mismatch == 0 && sep_ok,
          Format("200 random pairs (n+m<=10, with ties): max |p - brute force| = %.3g, U "
                 "mismatches %d; {1,2} vs {3,4}: U=%g one-sided p=%.17g two-sided p=%.17g",
                 worst, u_mismatch, sep.u, sep.p_less, sep.p_two_sided)};
}

struct CampaignRun {
  CampaignReport report;
  fs::path dir;
  double wall_secs = 0;
};

Config CampaignConfig() {
  Config cfg;
  cfg.MergeFile(testing::FixtureDir() / "campaign.json");
  return cfg;
}

CampaignRun RunDocCampaign(const fs::path &dir) {
  Config cfg = CampaignConfig();
  MockBackend mock(testing::FixtureScriptbook());
  CampaignTarget t{LoadBundle(testing::BundleDir("mini-doc")), &GetTarget("mini-doc-reader")};
  auto start = std::chrono::steady_clock::now();
  CampaignRun run;
  run.report = RunCampaign({t}, ParseStrategies(cfg.List("campaign.strategies")), cfg, mock, dir);
  run.wall_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteReportFiles(run.report, dir, false);
  run.dir = dir;
  return run;
}

Verdict Directional(const CampaignRun &run) {
  const CampaignReport &r = run.report;
  const StrategyAggregate *isc = r.Aggregate("mini-doc-reader", "isc4dgf");
  const StrategyAggregate *rnd = r.Aggregate("mini-doc-reader", "random_llm");
  const PairComparison *cmp = r.Comparison("mini-doc-reader", "random_llm");
  if (!isc || !rnd || !cmp) return {false, "campaign lacks isc4dgf or random_llm"};
  auto num = [](const std::optional<double> &v) { return v ? *v : NAN; };
  double rbt_ratio = cmp->reach_ratio.value_or(0);
  double time_ratio = cmp->speedup.value_or(0);
  double p = cmp->mann_whitney ? cmp->mann_whitney->p_two_sided : 1.0;
  bool exact = cmp->mann_whitney && cmp->mann_whitney->exact;
  bool pass = rbt_ratio >= 5 && time_ratio >= 2 && p < 0.05 && !r.AnyFailed();
  return {pass,
          Format("mini-doc, %d trials, exec budget %llu: isc4dgf %d/%d triggered, mean "
                 "reaches-before-trigger %.1f, mean time %.4fs; random_llm %d/%d, %.1f, %.4fs; "
                 "(a) reach ratio %.2fx >= 5, (b) time ratio %.2fx >= 2, (c) two-sided p = %.3g "
                 "(%s) < 0.05; campaign wall %.0fs",
                 r.trials, static_cast<unsigned long long>(CampaignConfig().UInt("fuzz.exec_budget")),
                 isc->triggered_trials, isc->ok_trials, num(isc->mean_reaches_before_trigger),
                 num(isc->mean_time_to_trigger), rnd->triggered_trials, rnd->ok_trials,
                 num(rnd->mean_reaches_before_trigger), num(rnd->mean_time_to_trigger), rbt_ratio,
                 time_ratio, p, exact ? "exact" : "normal approx.", run.wall_secs)};
}

Verdict CoverageVsReach(const CampaignRun &run) {
  std::vector<CoverageReachRow> rows;
  try {
    rows = CoverageVsReachTable(run.report, "provided", "isc4dgf");
  } catch (const Error &e) {
    return {false, e.what()};
  }
  if (rows.size() != 1) return {false, "expected one coverage-vs-reach row"};
  const auto &row = rows[0];
  std::string csv = ReadTextFile(run.dir / "coverage_reach.csv");
  bool printed = csv.find("coverage_delta_pct") != std::string::npos &&
                 csv.find("reach_delta") != std::string::npos;
  bool pass = row.subject_coverage < row.baseline_coverage &&
              row.subject_reaches > row.baseline_reaches && printed;
  return {pass, Format("isc4dgf vs provided: mean coverage %.4f vs %.4f (delta %s%%), mean total "
                       "reaches %.1f vs %.1f (delta %+.1f, multiplier %s); both deltas in "
                       "coverage_reach.csv: %s",
                       row.subject_coverage, row.baseline_coverage,
                       row.coverage_delta_pct ? Format("%+.2f", *row.coverage_delta_pct).c_str() : "N.A",
                       row.subject_reaches, row.baseline_reaches, row.reach_delta,
                       FormatRatio(row.reach_multiplier).c_str(), printed ? "yes" : "no")};
}

Verdict SelectionSoundness() {
  Rng rng(6);
  constexpr size_t kCap = 64;
  int violations = 0, unstable = 0, empty = 0;
  size_t emitted = 0;
  std::string first;
  for (int round = 0; round < 1000; ++round) {
    auto in = testing::RandomArtifactSet(rng, kCap);
    size_t corpus_size = 1 + rng.Below(12);
    auto run = [&](std::vector<SeedArtifact> v) {
      try {
        return Select(std::move(v), "mini-doc", corpus_size, kCap);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kEmptyCorpus) throw;
        return std::vector<SeedArtifact>{};
      }
    };
    auto out = run(in);
    if (out.empty()) ++empty;
    emitted += out.size();
    std::string why = testing::CheckSelection(in, out, corpus_size, kCap);
    if (!why.empty()) {
      ++violations;
      if (first.empty()) first = why;
    }
    std::vector<SeedArtifact> shuffled = in;
    for (size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.Below(i)]);
    for (const auto &again : {run(in), run(shuffled)}) {
      bool same = again.size() == out.size();
      for (size_t i = 0; same && i < out.size(); ++i)
        same = again[i].bytes == out[i].bytes && MakeRankKey(again[i]) == MakeRankKey(out[i]);
      if (!same) ++unstable;
    }
  }
  return {violations == 0 && unstable == 0,
          Format("1000 random artifact sets (%zu seeds emitted, %d sets with nothing admissible): "
                 "%d soundness violations%s%s, %d rank-order differences across reruns and "
                 "shuffled input",
                 emitted, empty, violations, first.empty() ? "" : " first: ", first.c_str(),
                 unstable)};
}

Verdict Determinism(const CampaignRun &first, const fs::path &dir) {
  CampaignRun second = RunDocCampaign(dir);
  std::string a = ReadTextFile(first.dir / "report.json");
  std::string b = ReadTextFile(second.dir / "report.json");

  // Schedule independence on a smaller campaign.
  Config cfg = CampaignConfig();
  cfg.Set("campaign.trials", "3");
  cfg.Set("fuzz.exec_budget", "50000");
  MockBackend mock(testing::FixtureScriptbook());
  CampaignTarget t{LoadBundle(testing::BundleDir("mini-doc")), &GetTarget("mini-doc-reader")};
  auto strategies = ParseStrategies(cfg.List("campaign.strategies"));
  cfg.Set("campaign.max_parallel", "1");
  CampaignReport serial = RunCampaign({t}, strategies, cfg, mock, std::nullopt);
  cfg.Set("campaign.max_parallel", "4");
  CampaignReport parallel = RunCampaign({t}, strategies, cfg, mock, std::nullopt);
  bool schedule_ok = serial.records == parallel.records;

  const TargetProgram &doc = GetTarget("mini-doc-reader");
  FuzzConfig fc = FuzzConfigFrom(CampaignConfig(), 424242);
  fc.exec_budget = 100'000;
  auto corpus = LoadCorpusSeeds(first.dir / "runs" / "mini-doc-reader" / "random_llm" / "trial-0" /
                                "pipeline" / "corpus");
  std::string s1 = StatsToJson(Fuzz(doc, corpus, fc).stats).dump(2);
  std::string s2 = StatsToJson(Fuzz(doc, corpus, fc).stats).dump(2);
  return {a == b && schedule_ok && s1 == s2,
          Format("full campaign run twice: report.json %zu vs %zu bytes, %s; serial vs 4 "
                 "workers: trial records %s; single trial rerun: stats.json %s",
                 a.size(), b.size(), a == b ? "byte-identical" : "DIFFERENT",
                 schedule_ok ? "identical" : "DIFFERENT", s1 == s2 ? "byte-identical" : "DIFFERENT")};
}

Verdict Accounting(const CampaignRun &run) {
  const TargetProgram &doc = GetTarget("mini-doc-reader");
  const fs::path runs = run.dir / "runs" / "mini-doc-reader";
  std::string detail;
  bool pass = true;
  ScopedTempDir tmp;
  for (const char *strategy : {"random_llm", "isc4dgf"}) {
    auto corpus = LoadCorpusSeeds(runs / strategy / "trial-0" / "pipeline" / "corpus");
    FuzzConfig fc = FuzzConfigFrom(CampaignConfig(), 77);
    fc.exec_budget = 10'000;
    fc.audit_log = true;
    FuzzResult r = Fuzz(doc, corpus, fc);
    fs::path dir = tmp.path() / strategy;
    WriteTrialArtifacts(r, dir);
    auto log = LoadAuditLog(dir / "audit.jsonl");
    uint64_t logged = 0, replayed = 0;
    for (const auto &a : log) {
      logged += a.reached;
      replayed += Replay(doc, a.input).reached[0];
    }
    bool ok = log.size() == r.stats.total_execs && logged == r.stats.total_reaches &&
              replayed == r.stats.total_reaches;
    std::string trig = "not triggered";
    if (r.stats.triggered) {
      ExecutionTrace tr = Replay(doc, ReadBinaryFile(dir / "trigger.bin"));
      bool fault = tr.outcome == Outcome::kFault && tr.fault_bug == r.stats.bug_id;
      ok = ok && fault;
      trig = Format("trigger.bin replay -> %s(%s)", std::string(OutcomeName(tr.outcome)).c_str(),
                    tr.fault_bug.value_or("-").c_str());
    }
    pass = pass && ok;
    detail += Format("%s%s corpus: %llu execs, reported reaches %llu, from log %llu, by replay "
                     "%llu, %s",
                     detail.empty() ? "" : "; ", strategy,
                     static_cast<unsigned long long>(r.stats.total_execs),
                     static_cast<unsigned long long>(r.stats.total_reaches),
                     static_cast<unsigned long long>(logged),
                     static_cast<unsigned long long>(replayed), trig.c_str());
  }
  // Every triggering campaign trial's saved input must fault on replay.
  int triggered = 0, replay_ok = 0;
  for (const auto &rec : run.report.records) {
    if (!rec.ok || !rec.stats.triggered) continue;
    ++triggered;
    fs::path bin = runs / rec.strategy / ("trial-" + std::to_string(rec.trial)) / "trigger.bin";
    ExecutionTrace tr = Replay(doc, ReadBinaryFile(bin));
    replay_ok += tr.outcome == Outcome::kFault && tr.fault_bug == rec.stats.bug_id;
  }
  pass = pass && triggered == replay_ok && triggered > 0;
  detail += Format("; campaign trigger.bin replays faulting: %d/%d", replay_ok, triggered);
  return {pass, detail};
}

Verdict SandboxSafety() {
  ScopedTempDir tmp;
  auto script = [](const char *name) {
    GeneratorScript s;
    s.source_text = ReadTextFile(testing::SandboxScript(name));
    s.bundle_id = "fixture";
    return s;
  };
  SandboxLimits limits;
  limits.timeout = std::chrono::milliseconds(2000);
  limits.work_root = tmp.path();
  auto start = std::chrono::steady_clock::now();
  SandboxOutcome loop = ExecuteSandboxed(script("infinite_loop.py"), limits);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool loop_ok = loop.status == SandboxStatus::kTimeout && std::fabs(secs - 2.0) <= 1.0;

  std::vector<GeneratorScript> scripts = {script("write_10mib.py")};
  std::vector<SandboxOutcome> outcomes = {ExecuteSandboxed(scripts[0], limits)};
  const SandboxStatus big_status = outcomes[0].status;
  auto artifacts = CollectArtifacts(scripts, outcomes);
  size_t admitted = 0;
  for (const auto &a : artifacts) admitted += Judge(a, "mini-doc", 1 << 20).admitted();
  bool empty_corpus = false;
  try {
    Select(artifacts, "mini-doc", 10, 1 << 20);
  } catch (const Error &e) {
    empty_corpus = e.code() == ErrorCode::kEmptyCorpus;
  }
  bool big_ok = big_status == SandboxStatus::kOversize && admitted == 0 && empty_corpus;
  bool clean = fs::directory_iterator(tmp.path()) == fs::directory_iterator();
  return {loop_ok && big_ok && clean,
          Format("infinite loop with 2 s limit: %s after %.2fs; 10 MiB writer: %s, %zu admitted "
                 "seed(s), selection %s; scratch dirs left behind: %s",
                 std::string(SandboxStatusName(loop.status)).c_str(), secs,
                 std::string(SandboxStatusName(big_status)).c_str(), admitted,
                 empty_corpus ? "EmptyCorpus" : "non-empty", clean ? "none" : "some")};
}

int Main() {
  int failures = 0;
  auto report = [&](int id, const char *name, const std::function<Verdict()> &check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("criterion %d %s: %s: %s\n", id, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "trigger-time ratio formula", TimeRatios);
  report(2, "reach ratio formula", ReachRatios);
  report(3, "exact Mann-Whitney vs brute force", ExactTest);

  ScopedTempDir tmp;
  std::optional<CampaignRun> run;
  std::string campaign_error;
  try {
    run = RunDocCampaign(tmp.path() / "first");
  } catch (const std::exception &e) {
    campaign_error = e.what();
  }
  auto needs_run = [&](const std::function<Verdict(const CampaignRun &)> &f) {
    return [&, f]() -> Verdict {
      if (!run) return {false, "campaign failed: " + campaign_error};
      return f(*run);
    };
  };
  report(4, "directional reproduction on mini-doc", needs_run(Directional));
  report(5, "coverage vs reach tradeoff", needs_run(CoverageVsReach));
  report(6, "selection soundness", SelectionSoundness);
  report(7, "determinism",
         needs_run([&](const CampaignRun &r) { return Determinism(r, tmp.path() / "second"); }));
  report(8, "reach and trigger accounting", needs_run(Accounting));
  report(9, "sandbox safety", SandboxSafety);

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace seedforge

int main() { return seedforge::Main(); }
