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

// Multi-strategy, multi-trial campaigns and the comparison statistics
// reported for them.

#ifndef SEEDFORGE_EXPERIMENTER_H_
#define SEEDFORGE_EXPERIMENTER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedforge/common.h"
#include "seedforge/config.h"
#include "seedforge/grey_fuzzer.h"
#include "seedforge/input_model.h"
#include "seedforge/llm_gateway.h"
#include "seedforge/target_zoo.h"

namespace seedforge {

// ---------------------------------------------------------------------------
// Statistics

// Samples with at most this many values in total get the exact null
// distribution; larger ones use the tie-corrected normal approximation.
inline constexpr size_t kExactLimit = 24;

struct MannWhitneyResult {
  double u = 0;            // #{(x, y) : x > y} + ties / 2, x from the first sample
  double p_two_sided = 1;  // P(|U - nm/2| >= |u - nm/2|)
  double p_less = 1;       // P(U <= u): first sample tends to be smaller
  double p_greater = 1;    // P(U >= u)
  bool exact = true;
};

// Midranks for ties. Throws Error(kInvalidArgument) on an empty sample.
MannWhitneyResult MannWhitneyExact(const std::vector<double> &a, const std::vector<double> &b);

// baseline / subject. Throws Error(kInvalidArgument) unless subject > 0.
double SpeedupRatio(double baseline_time, double subject_time);
double ReachRatio(double baseline_reaches, double subject_reaches);

// Fixed two decimals, or "N.A" when absent.
std::string FormatRatio(std::optional<double> ratio);

// ---------------------------------------------------------------------------
// Strategies

enum class Strategy { kIsc4dgf, kRandomLlm, kProvided, kEmptyLike };

std::string_view StrategyName(Strategy s);
// Throws Error(kConfig) for unknown names.
Strategy ParseStrategy(std::string_view name);
std::vector<Strategy> ParseStrategies(const std::vector<std::string> &names);
// Strategies whose corpus depends on sampled completions.
inline bool IsRandomized(Strategy s) { return s == Strategy::kIsc4dgf || s == Strategy::kRandomLlm; }

std::string RandomSeedPrompt(std::string_view format);

struct CorpusBuild {
  std::vector<Bytes> seeds;
  bool fallback_used = false;
  std::vector<std::string> notes;
  size_t candidates = 0;
  size_t scripts = 0;
  size_t produced = 0;  // sandbox outcomes with status Produced
  size_t admitted = 0;
};

// Refine, synthesize, execute and select. With `work_dir`, writes
// prompts/, scripts/, seeds/raw/ and corpus/ below it. Throws
// Error(kEmptyCorpus) when nothing is admitted.
CorpusBuild BuildIsc4dgfCorpus(const UserInputBundle &bundle, const TargetProgram &target,
                               LlmBackend &gateway, const Config &cfg, uint64_t seed,
                               const std::optional<std::filesystem::path> &work_dir);

// Asks for random test cases in the target's format, no context.
CorpusBuild BuildRandomLlmCorpus(const TargetProgram &target, LlmBackend &gateway,
                                 const Config &cfg, uint64_t seed,
                                 const std::optional<std::filesystem::path> &work_dir);

// Dispatches by strategy and applies select.fallback when an LLM strategy
// yields no seeds.
CorpusBuild BuildStrategyCorpus(Strategy s, const UserInputBundle &bundle,
                                const TargetProgram &target, LlmBackend &gateway,
                                const Config &cfg, uint64_t seed,
                                const std::optional<std::filesystem::path> &work_dir);

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignTarget {
  UserInputBundle bundle;
  const TargetProgram *target = nullptr;
};

struct TrialRecord {
  std::string target_id;
  std::string strategy;
  int trial = 0;
  bool ok = false;
  std::string error;  // corpus or fuzzing failure when !ok
  bool fallback_used = false;
  size_t corpus_size = 0;
  FuzzTrialStats stats;
  double wall_secs = 0;  // kept out of report.json

  bool operator==(const TrialRecord &o) const;
};

struct StrategyAggregate {
  std::string target_id;
  std::string strategy;
  int trials = 0;
  int ok_trials = 0;
  int triggered_trials = 0;
  double trigger_rate = 0;  // over ok trials
  std::optional<double> mean_time_to_trigger;        // triggering trials only
  std::optional<double> mean_execs_to_trigger;       // triggering trials only
  std::optional<double> mean_reaches_before_trigger; // triggering trials only
  uint64_t sum_total_reaches = 0;
  double mean_total_reaches = 0;  // sum_total_reaches / ok_trials
  uint64_t sum_total_execs = 0;
  double mean_coverage = 0;
};

struct PairComparison {
  std::string target_id;
  std::string reference;  // subject of the ratios
  std::string baseline;
  std::optional<double> speedup;      // baseline time / reference time
  std::optional<double> reach_ratio;  // baseline reaches / reference reaches
  std::optional<MannWhitneyResult> mann_whitney;  // on censored trigger times
};

struct CoverageReachRow {
  std::string target_id;
  std::string baseline;
  std::string subject;
  double baseline_coverage = 0;
  double subject_coverage = 0;
  std::optional<double> coverage_delta_pct;  // (subject - baseline) / baseline * 100
  double baseline_reaches = 0;               // mean total reaches
  double subject_reaches = 0;
  double reach_delta = 0;                  // subject - baseline
  std::optional<double> reach_multiplier;  // subject / baseline
};

struct CampaignReport {
  uint64_t master_seed = 0;
  int trials = 0;
  std::vector<std::string> strategies;
  std::vector<std::string> targets;
  std::string reference;
  std::string coverage_baseline;
  double censor_time = 0;  // value used for non-triggering trials in the U test
  nlohmann::json config;
  std::vector<TrialRecord> records;
  std::vector<StrategyAggregate> aggregates;
  std::vector<PairComparison> comparisons;
  std::vector<std::string> footnotes;

  const StrategyAggregate *Aggregate(std::string_view target, std::string_view strategy) const;
  const PairComparison *Comparison(std::string_view target, std::string_view baseline) const;
  bool AnyFailed() const;
};

// Runs trials x strategies x targets and assembles the report. With
// `out_dir`, per-trial artifacts go to out_dir/runs/<target>/<strategy>/trial-<n>/.
CampaignReport RunCampaign(const std::vector<CampaignTarget> &targets,
                           const std::vector<Strategy> &strategies, const Config &cfg,
                           LlmBackend &gateway, const std::optional<std::filesystem::path> &out_dir);

// Computes aggregates, comparisons and footnotes from trial records.
void AssembleReport(CampaignReport &report);

// Throws Error(kMissingStrategy) naming the absent strategy.
std::vector<CoverageReachRow> CoverageVsReachTable(const CampaignReport &report,
                                                   std::string_view baseline,
                                                   std::string_view subject = "isc4dgf");

nlohmann::json ReportToJson(const CampaignReport &report);
// Reloads records and metadata, then re-assembles.
CampaignReport ReportFromJson(const nlohmann::json &j);

std::string ReportCsv(const CampaignReport &report);
std::string CoverageReachCsv(const std::vector<CoverageReachRow> &rows);
// Human-readable summary tables.
std::string RenderReport(const CampaignReport &report);

// report.json, timing.json and, unless json_only, report.csv and
// coverage_reach.csv.
void WriteReportFiles(const CampaignReport &report, const std::filesystem::path &dir, bool json_only);

}  // namespace seedforge

#endif  // SEEDFORGE_EXPERIMENTER_H_
