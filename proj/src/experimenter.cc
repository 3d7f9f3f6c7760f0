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

#include "seedforge/experimenter.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "seedforge/corpus_selector.h"
#include "seedforge/prompt_refinery.h"
#include "seedforge/seed_synthesis.h"

namespace seedforge {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Statistics

MannWhitneyResult MannWhitneyExact(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::kInvalidArgument, "Mann-Whitney needs two non-empty samples");
  const size_t n = a.size(), m = b.size(), total = n + m;

  // Doubled midranks keep every rank sum an integer.
  std::vector<std::pair<double, bool>> pooled;
  for (double x : a) pooled.emplace_back(x, true);
  for (double y : b) pooled.emplace_back(y, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto &l, const auto &r) { return l.first < r.first; });
  std::vector<int64_t> rank2(total);
  double tie_term = 0;
  for (size_t i = 0; i < total;) {
    size_t j = i;
    while (j + 1 < total && pooled[j + 1].first == pooled[i].first) ++j;
    for (size_t k = i; k <= j; ++k) rank2[k] = static_cast<int64_t>(i + j + 2);
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  int64_t observed = 0;
  for (size_t i = 0; i < total; ++i)
    if (pooled[i].second) observed += rank2[i];

  const int64_t offset = static_cast<int64_t>(n * (n + 1));  // 2U = S - n(n+1)
  const int64_t center = static_cast<int64_t>(n * m);        // E[2U]
  MannWhitneyResult r;
  r.u = static_cast<double>(observed - offset) / 2.0;

  if (total <= kExactLimit) {
    const int64_t max_sum = static_cast<int64_t>(total * (total + 1));
    // count[k][s]: subsets of size k whose doubled rank sum is s.
    std::vector<std::vector<double>> count(n + 1, std::vector<double>(max_sum + 1, 0.0));
    count[0][0] = 1;
    for (size_t i = 0; i < total; ++i) {
      const int64_t rk = rank2[i];
      for (size_t k = std::min(n, i + 1); k >= 1; --k)
        for (int64_t s = max_sum - rk; s >= 0; --s)
          if (count[k - 1][s] != 0) count[k][s + rk] += count[k - 1][s];
    }
    double all = 0, two = 0, less = 0, greater = 0;
    const int64_t dev = std::llabs(observed - offset - center);
    for (int64_t s = 0; s <= max_sum; ++s) {
      const double c = count[n][s];
      if (c == 0) continue;
      all += c;
      if (std::llabs(s - offset - center) >= dev) two += c;
      if (s <= observed) less += c;
      if (s >= observed) greater += c;
    }
    r.p_two_sided = two / all;
    r.p_less = less / all;
    r.p_greater = greater / all;
    r.exact = true;
    return r;
  }

  const double nm = static_cast<double>(n * m);
  const double big_n = static_cast<double>(total);
  const double var = nm / 12.0 * ((big_n + 1) - tie_term / (big_n * (big_n - 1)));
  r.exact = false;
  if (var <= 0) return r;
  const double sd = std::sqrt(var), mu = nm / 2.0;
  const double z_two = std::max(0.0, std::fabs(r.u - mu) - 0.5) / sd;
  r.p_two_sided = std::min(1.0, std::erfc(z_two / std::sqrt(2.0)));
  r.p_less = std::min(1.0, 0.5 * std::erfc(-((r.u - mu + 0.5) / sd) / std::sqrt(2.0)));
  r.p_greater = std::min(1.0, 0.5 * std::erfc(((r.u - mu - 0.5) / sd) / std::sqrt(2.0)));
  return r;
}

double SpeedupRatio(double baseline_time, double subject_time) {
  if (!(subject_time > 0))
    throw Error(ErrorCode::kInvalidArgument, "speedup ratio needs a positive subject time");
  return baseline_time / subject_time;
}

double ReachRatio(double baseline_reaches, double subject_reaches) {
  if (!(subject_reaches >= 1))
    throw Error(ErrorCode::kInvalidArgument, "reach ratio needs at least one subject reach");
  return baseline_reaches / subject_reaches;
}

namespace {

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

std::string FormatRatio(std::optional<double> ratio) {
  return ratio ? Fixed(*ratio, 2) : std::string("N.A");
}

// ---------------------------------------------------------------------------
// Strategies

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kIsc4dgf: return "isc4dgf";
    case Strategy::kRandomLlm: return "random_llm";
    case Strategy::kProvided: return "provided";
    case Strategy::kEmptyLike: return "empty_like";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kIsc4dgf, Strategy::kRandomLlm, Strategy::kProvided,
                     Strategy::kEmptyLike})
    if (StrategyName(s) == name) return s;
  throw Error(ErrorCode::kConfig, "unknown strategy '" + std::string(name) +
                                      "' (expected isc4dgf, random_llm, provided, empty_like)");
}

std::vector<Strategy> ParseStrategies(const std::vector<std::string> &names) {
  std::vector<Strategy> out;
  for (const auto &n : names) {
    Strategy s = ParseStrategy(n);
    if (std::find(out.begin(), out.end(), s) != out.end())
      throw Error(ErrorCode::kConfig, "strategy '" + n + "' listed twice");
    out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::kConfig, "no strategies selected");
  return out;
}

std::string RandomSeedPrompt(std::string_view format) {
  return "Please generate a random " + std::string(format) + " test case";
}

CorpusBuild BuildIsc4dgfCorpus(const UserInputBundle &bundle, const TargetProgram &target,
                               LlmBackend &gateway, const Config &cfg, uint64_t seed,
                               const std::optional<fs::path> &work_dir) {
  CorpusBuild cb;
  std::vector<CandidatePrompt> cands;
  try {
    cands = Refine(bundle, gateway, RefineOptionsFrom(cfg, seed));
  } catch (const DistinctnessExhausted &e) {
    if (e.candidates().empty()) throw;
    cands = e.candidates();
    cb.notes.push_back(std::string(e.what()) + "; continuing with the distinct ones");
  }
  cb.candidates = cands.size();
  if (work_dir) WriteCandidates(cands, *work_dir / "prompts");

  SynthesisResult synth = Synthesize(cands, target.format(), bundle.cve.id, target.put_name(),
                                     gateway, SynthesisOptionsFrom(cfg, seed));
  for (const auto &l : synth.log)
    cb.notes.push_back("draw " + std::to_string(l.candidate) + "-" + std::to_string(l.draw) +
                       ": " + l.message);
  cb.scripts = synth.scripts.size();
  if (work_dir) PersistScripts(synth.scripts, *work_dir / "scripts");

  std::vector<SandboxOutcome> outcomes = ExecuteAll(
      synth.scripts, SandboxLimitsFrom(cfg), WorkerCount(cfg.Int("synth.max_parallel")));
  for (const auto &o : outcomes) cb.produced += o.status == SandboxStatus::kProduced;
  std::vector<SeedArtifact> artifacts = CollectArtifacts(synth.scripts, std::move(outcomes));
  if (work_dir) PersistRawSeeds(artifacts, *work_dir / "seeds" / "raw");

  const size_t max_bytes = cfg.UInt("select.max_bytes");
  for (const auto &a : artifacts) cb.admitted += Judge(a, target.format(), max_bytes).admitted();
  std::vector<SeedArtifact> corpus =
      Select(std::move(artifacts), target.format(), cfg.UInt("select.corpus_size"), max_bytes);
  if (work_dir) WriteCorpus(corpus, *work_dir / "corpus");
  for (auto &a : corpus) cb.seeds.push_back(std::move(a.bytes));
  return cb;
}

CorpusBuild BuildRandomLlmCorpus(const TargetProgram &target, LlmBackend &gateway,
                                 const Config &cfg, uint64_t seed,
                                 const std::optional<fs::path> &work_dir) {
  CorpusBuild cb;
  const std::string prompt = RandomSeedPrompt(target.format());
  const size_t want = cfg.UInt("select.corpus_size");
  const size_t budget = want * std::max<int64_t>(1, cfg.Int("refine.retry_factor"));
  const size_t max_bytes = cfg.UInt("select.max_bytes");
  const SandboxLimits limits = SandboxLimitsFrom(cfg);
  const int workers = WorkerCount(cfg.Int("synth.max_parallel"));

  size_t draw = 0;
  while (cb.seeds.size() < want && draw < budget) {
    const size_t batch = std::min(want - cb.seeds.size(), budget - draw);
    // Per draw: a script to run, a literal test case, or nothing.
    std::vector<std::optional<GeneratorScript>> scripts(batch);
    std::vector<std::optional<Bytes>> literal(batch);
    for (size_t i = 0; i < batch; ++i) {
      CompletionRequest req;
      req.prompt = prompt;
      req.temperature = cfg.Real("synth.temperature");
      req.max_tokens = static_cast<int>(cfg.Int("llm.max_tokens"));
      req.seed = seed;
      req.draw_index = static_cast<uint32_t>(draw + i);
      std::string text;
      try {
        text = gateway.Complete(req).text;
      } catch (const Error &e) {
        cb.notes.push_back("draw " + std::to_string(draw + i) + ": " + e.what());
        continue;
      }
      if (text.find("```") != std::string::npos) {
        std::string code = ExtractCode(text);
        if (!code.empty())
          scripts[i] = GeneratorScript{std::move(code), 0, static_cast<uint32_t>(draw + i), "", {}};
      } else if (!text.empty()) {
        literal[i] = ToBytes(text);
      }
    }
    std::vector<GeneratorScript> to_run;
    for (auto &s : scripts)
      if (s) to_run.push_back(*s);
    cb.scripts += to_run.size();
    if (work_dir) PersistScripts(to_run, *work_dir / "scripts");
    std::vector<SandboxOutcome> outcomes = ExecuteAll(to_run, limits, workers);
    size_t next_outcome = 0;
    for (size_t i = 0; i < batch; ++i) {
      std::optional<Bytes> got = std::move(literal[i]);
      if (scripts[i]) {
        SandboxOutcome &o = outcomes[next_outcome++];
        if (o.status == SandboxStatus::kProduced) {
          ++cb.produced;
          got = std::move(o.output);
        }
      }
      if (got && !got->empty() && got->size() <= max_bytes && cb.seeds.size() < want) {
        if (work_dir) WriteFile(*work_dir / "seeds" / "raw" / ("0-" + std::to_string(draw + i) + ".bin"), *got);
        cb.seeds.push_back(std::move(*got));
      }
    }
    draw += batch;
  }
  cb.admitted = cb.seeds.size();
  if (cb.seeds.empty())
    throw Error(ErrorCode::kEmptyCorpus, "no usable random test case in " + std::to_string(draw) + " draws");
  if (work_dir)
    for (size_t i = 0; i < cb.seeds.size(); ++i)
      WriteFile(*work_dir / "corpus" / ("seed-" + std::to_string(i) + ".bin"), cb.seeds[i]);
  return cb;
}

CorpusBuild BuildStrategyCorpus(Strategy s, const UserInputBundle &bundle,
                                const TargetProgram &target, LlmBackend &gateway,
                                const Config &cfg, uint64_t seed,
                                const std::optional<fs::path> &work_dir) {
  auto fixed = [&](Strategy which) {
    CorpusBuild cb;
    if (which == Strategy::kProvided) cb.seeds = target.provided_corpus();
    else cb.seeds = {target.minimal_input()};
    cb.admitted = cb.seeds.size();
    return cb;
  };
  if (!IsRandomized(s)) return fixed(s);
  try {
    return s == Strategy::kIsc4dgf ? BuildIsc4dgfCorpus(bundle, target, gateway, cfg, seed, work_dir)
                                   : BuildRandomLlmCorpus(target, gateway, cfg, seed, work_dir);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kEmptyCorpus) throw;
    const std::string fallback = cfg.Str("select.fallback");
    if (fallback == "none") throw;
    CorpusBuild cb = fixed(ParseStrategy(fallback));
    cb.fallback_used = true;
    cb.notes.push_back(std::string(e.what()) + "; fell back to " + fallback);
    return cb;
  }
}

// ---------------------------------------------------------------------------
// Campaigns

bool TrialRecord::operator==(const TrialRecord &o) const {
  return target_id == o.target_id && strategy == o.strategy && trial == o.trial && ok == o.ok &&
         error == o.error && fallback_used == o.fallback_used && corpus_size == o.corpus_size &&
         stats == o.stats;
}

const StrategyAggregate *CampaignReport::Aggregate(std::string_view target,
                                                   std::string_view strategy) const {
  for (const auto &a : aggregates)
    if (a.target_id == target && a.strategy == strategy) return &a;
  return nullptr;
}

const PairComparison *CampaignReport::Comparison(std::string_view target,
                                                 std::string_view baseline) const {
  for (const auto &c : comparisons)
    if (c.target_id == target && c.baseline == baseline) return &c;
  return nullptr;
}

bool CampaignReport::AnyFailed() const {
  return std::any_of(records.begin(), records.end(), [](const TrialRecord &r) { return !r.ok; });
}

void AssembleReport(CampaignReport &report) {
  report.aggregates.clear();
  report.comparisons.clear();
  report.footnotes.clear();
  if (report.reference.empty() && !report.strategies.empty())
    report.reference = std::find(report.strategies.begin(), report.strategies.end(), "isc4dgf") !=
                               report.strategies.end()
                           ? "isc4dgf"
                           : report.strategies.front();

  std::map<std::pair<std::string, std::string>, std::vector<double>> censored;
  for (const auto &target : report.targets) {
    for (const auto &strategy : report.strategies) {
      StrategyAggregate agg;
      agg.target_id = target;
      agg.strategy = strategy;
      double time_sum = 0, execs_sum = 0, reach_sum = 0, cov_sum = 0;
      std::vector<double> &times = censored[{target, strategy}];
      for (const auto &r : report.records) {
        if (r.target_id != target || r.strategy != strategy) continue;
        ++agg.trials;
        if (!r.ok) continue;
        ++agg.ok_trials;
        agg.sum_total_reaches += r.stats.total_reaches;
        agg.sum_total_execs += r.stats.total_execs;
        cov_sum += r.stats.coverage_fraction;
        if (r.stats.triggered) {
          ++agg.triggered_trials;
          time_sum += *r.stats.time_to_trigger;
          execs_sum += static_cast<double>(*r.stats.execs_to_trigger);
          reach_sum += static_cast<double>(r.stats.reaches_before_trigger);
          times.push_back(*r.stats.time_to_trigger);
        } else {
          times.push_back(report.censor_time);
        }
      }
      if (agg.ok_trials > 0) {
        agg.trigger_rate = static_cast<double>(agg.triggered_trials) / agg.ok_trials;
        agg.mean_total_reaches = static_cast<double>(agg.sum_total_reaches) / agg.ok_trials;
        agg.mean_coverage = cov_sum / agg.ok_trials;
      }
      if (agg.triggered_trials > 0) {
        agg.mean_time_to_trigger = time_sum / agg.triggered_trials;
        agg.mean_execs_to_trigger = execs_sum / agg.triggered_trials;
        agg.mean_reaches_before_trigger = reach_sum / agg.triggered_trials;
      }
      report.aggregates.push_back(agg);
    }
  }

  bool approximate = false;
  for (const auto &target : report.targets) {
    const StrategyAggregate *ref = report.Aggregate(target, report.reference);
    for (const auto &strategy : report.strategies) {
      if (strategy == report.reference) continue;
      const StrategyAggregate *base = report.Aggregate(target, strategy);
      PairComparison c;
      c.target_id = target;
      c.reference = report.reference;
      c.baseline = strategy;
      if (ref->mean_time_to_trigger && base->mean_time_to_trigger && *ref->mean_time_to_trigger > 0)
        c.speedup = SpeedupRatio(*base->mean_time_to_trigger, *ref->mean_time_to_trigger);
      if (ref->mean_reaches_before_trigger && base->mean_reaches_before_trigger &&
          *ref->mean_reaches_before_trigger >= 1)
        c.reach_ratio =
            ReachRatio(*base->mean_reaches_before_trigger, *ref->mean_reaches_before_trigger);
      const auto &a = censored[{target, report.reference}];
      const auto &b = censored[{target, strategy}];
      if (!a.empty() && !b.empty()) {
        c.mann_whitney = MannWhitneyExact(a, b);
        approximate = approximate || !c.mann_whitney->exact;
      }
      report.comparisons.push_back(c);
    }
  }

  auto &notes = report.footnotes;
  notes.push_back("Times are virtual seconds charged per execution (fuzz.exec_cost_us) and per input byte (fuzz.byte_cost_ns).");
  notes.push_back("Mean time, execs and reaches to trigger are over triggering trials only; T.O. marks a strategy with no triggering trial.");
  notes.push_back("Ratios are baseline mean / " + report.reference + " mean; N.A when either side never triggered.");
  notes.push_back("p is the two-sided Mann-Whitney U test on time to trigger, midranks for ties; trials that never triggered enter with the censored value " +
                  Fixed(report.censor_time, 3) + " s (budget + 1), ranked worst.");
  if (approximate)
    notes.push_back("Some p-values use the tie-corrected normal approximation because n + m > " +
                    std::to_string(kExactLimit) + ".");
  size_t failed = std::count_if(report.records.begin(), report.records.end(),
                                [](const TrialRecord &r) { return !r.ok; });
  if (failed > 0)
    notes.push_back(std::to_string(failed) + " trial(s) failed and are excluded from the aggregates.");
  size_t fallbacks = std::count_if(report.records.begin(), report.records.end(),
                                   [](const TrialRecord &r) { return r.fallback_used; });
  if (fallbacks > 0)
    notes.push_back(std::to_string(fallbacks) + " trial(s) used the select.fallback corpus.");
}

CampaignReport RunCampaign(const std::vector<CampaignTarget> &targets,
                           const std::vector<Strategy> &strategies, const Config &cfg,
                           LlmBackend &gateway, const std::optional<fs::path> &out_dir) {
  const int trials = static_cast<int>(cfg.Int("campaign.trials"));
  if (trials < 1) throw Error(ErrorCode::kConfig, "campaign.trials must be >= 1");
  if (targets.empty()) throw Error(ErrorCode::kConfig, "campaign has no targets");
  if (strategies.empty()) throw Error(ErrorCode::kConfig, "campaign has no strategies");
  const uint64_t master = cfg.UInt("master_seed");
  FuzzConfigFrom(cfg, 0);  // validate before any work
  const std::string fallback = cfg.Str("select.fallback");
  if (fallback != "none") ParseStrategy(fallback);

  CampaignReport report;
  report.master_seed = master;
  report.trials = trials;
  report.config = cfg.ToJson();
  for (Strategy s : strategies) report.strategies.emplace_back(StrategyName(s));
  for (const auto &t : targets) report.targets.push_back(t.target->id());
  report.coverage_baseline = cfg.Str("campaign.coverage_baseline");

  struct Task {
    size_t target, strategy;
    int trial;
  };
  std::vector<Task> tasks;
  for (size_t ti = 0; ti < targets.size(); ++ti)
    for (size_t si = 0; si < strategies.size(); ++si)
      for (int t = 0; t < trials; ++t) tasks.push_back({ti, si, t});

  // Strategies without sampling build their corpus once.
  std::map<std::pair<size_t, size_t>, CorpusBuild> fixed;
  std::map<std::pair<size_t, size_t>, std::string> fixed_errors;
  for (size_t ti = 0; ti < targets.size(); ++ti)
    for (size_t si = 0; si < strategies.size(); ++si) {
      if (IsRandomized(strategies[si])) continue;
      try {
        fixed[{ti, si}] = BuildStrategyCorpus(strategies[si], targets[ti].bundle,
                                              *targets[ti].target, gateway, cfg, master, {});
      } catch (const std::exception &e) {
        fixed_errors[{ti, si}] = e.what();
      }
    }

  std::vector<TrialRecord> records(tasks.size());
  auto run_task = [&](size_t index) {
    const Task &task = tasks[index];
    const TargetProgram &target = *targets[task.target].target;
    const std::string sname(StrategyName(strategies[task.strategy]));
    TrialRecord &rec = records[index];
    rec.target_id = target.id();
    rec.strategy = sname;
    rec.trial = task.trial;
    std::optional<fs::path> dir;
    if (out_dir)
      dir = *out_dir / "runs" / target.id() / sname / ("trial-" + std::to_string(task.trial));
    try {
      CorpusBuild built;
      if (IsRandomized(strategies[task.strategy])) {
        uint64_t seed = DeriveSeed(master, "corpus/" + sname + "/" + target.id() + "/" +
                                               std::to_string(task.trial));
        built = BuildStrategyCorpus(strategies[task.strategy], targets[task.target].bundle,
                                    target, gateway, cfg, seed,
                                    dir ? std::optional<fs::path>(*dir / "pipeline") : std::nullopt);
      } else if (auto it = fixed_errors.find({task.target, task.strategy});
                 it != fixed_errors.end()) {
        throw std::runtime_error(it->second);
      } else {
        built = fixed.at({task.target, task.strategy});
      }
      rec.fallback_used = built.fallback_used;
      rec.corpus_size = built.seeds.size();
      uint64_t fuzz_seed = DeriveSeed(master, "fuzz/" + target.id() + "/" + std::to_string(task.trial));
      FuzzResult result = Fuzz(target, built.seeds, FuzzConfigFrom(cfg, fuzz_seed));
      rec.stats = result.stats;
      rec.wall_secs = result.wall_secs;
      rec.ok = true;
      if (dir) WriteTrialArtifacts(result, *dir);
    } catch (const std::exception &e) {
      rec.ok = false;
      rec.error = e.what();
    }
  };

  const int workers = std::min<int>(WorkerCount(cfg.Int("campaign.max_parallel")),
                                    static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < tasks.size(); i = next++) run_task(i);
      });
  }
  report.records = std::move(records);

  const double tb = cfg.Real("fuzz.time_budget_secs");
  if (tb > 0) {
    report.censor_time = tb + 1;
  } else {
    double longest = 0;
    for (const auto &r : report.records) longest = std::max(longest, r.stats.elapsed_secs);
    report.censor_time = longest + 1;
  }
  AssembleReport(report);
  return report;
}

std::vector<CoverageReachRow> CoverageVsReachTable(const CampaignReport &report,
                                                   std::string_view baseline,
                                                   std::string_view subject) {
  for (std::string_view s : {subject, baseline})
    if (std::find(report.strategies.begin(), report.strategies.end(), s) == report.strategies.end())
      throw Error(ErrorCode::kMissingStrategy,
                  "coverage-vs-reach table needs strategy '" + std::string(s) + "' in the report");
  std::vector<CoverageReachRow> rows;
  for (const auto &target : report.targets) {
    const StrategyAggregate *b = report.Aggregate(target, baseline);
    const StrategyAggregate *s = report.Aggregate(target, subject);
    CoverageReachRow row;
    row.target_id = target;
    row.baseline = std::string(baseline);
    row.subject = std::string(subject);
    row.baseline_coverage = b->mean_coverage;
    row.subject_coverage = s->mean_coverage;
    if (b->mean_coverage > 0)
      row.coverage_delta_pct = (s->mean_coverage - b->mean_coverage) / b->mean_coverage * 100.0;
    row.baseline_reaches = b->mean_total_reaches;
    row.subject_reaches = s->mean_total_reaches;
    row.reach_delta = s->mean_total_reaches - b->mean_total_reaches;
    if (b->mean_total_reaches > 0) row.reach_multiplier = s->mean_total_reaches / b->mean_total_reaches;
    rows.push_back(row);
  }
  return rows;
}

namespace {

json Opt(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json MannWhitneyJson(const std::optional<MannWhitneyResult> &mw) {
  if (!mw) return nullptr;
  return {{"u", mw->u},
          {"p_two_sided", mw->p_two_sided},
          {"p_less", mw->p_less},
          {"p_greater", mw->p_greater},
          {"exact", mw->exact}};
}

json RecordJson(const TrialRecord &r) {
  return {{"target_id", r.target_id},
          {"strategy", r.strategy},
          {"trial", r.trial},
          {"ok", r.ok},
          {"error", r.error},
          {"fallback_used", r.fallback_used},
          {"corpus_size", r.corpus_size},
          {"stats", r.ok ? StatsToJson(r.stats) : json(nullptr)}};
}

}  // namespace

json ReportToJson(const CampaignReport &report) {
  json records = json::array(), aggregates = json::array(), comparisons = json::array();
  for (const auto &r : report.records) records.push_back(RecordJson(r));
  for (const auto &a : report.aggregates)
    aggregates.push_back({{"target_id", a.target_id},
                          {"strategy", a.strategy},
                          {"trials", a.trials},
                          {"ok_trials", a.ok_trials},
                          {"triggered_trials", a.triggered_trials},
                          {"trigger_rate", a.trigger_rate},
                          {"mean_time_to_trigger", Opt(a.mean_time_to_trigger)},
                          {"mean_execs_to_trigger", Opt(a.mean_execs_to_trigger)},
                          {"mean_reaches_before_trigger", Opt(a.mean_reaches_before_trigger)},
                          {"sum_total_reaches", a.sum_total_reaches},
                          {"mean_total_reaches", a.mean_total_reaches},
                          {"sum_total_execs", a.sum_total_execs},
                          {"mean_coverage", a.mean_coverage}});
  for (const auto &c : report.comparisons)
    comparisons.push_back({{"target_id", c.target_id},
                           {"reference", c.reference},
                           {"baseline", c.baseline},
                           {"speedup", Opt(c.speedup)},
                           {"reach_ratio", Opt(c.reach_ratio)},
                           {"mann_whitney", MannWhitneyJson(c.mann_whitney)}});
  json coverage = nullptr;
  try {
    json rows = json::array();
    for (const auto &row : CoverageVsReachTable(report, report.coverage_baseline, report.reference))
      rows.push_back({{"target_id", row.target_id},
                      {"baseline", row.baseline},
                      {"subject", row.subject},
                      {"baseline_coverage", row.baseline_coverage},
                      {"subject_coverage", row.subject_coverage},
                      {"coverage_delta_pct", Opt(row.coverage_delta_pct)},
                      {"baseline_mean_total_reaches", row.baseline_reaches},
                      {"subject_mean_total_reaches", row.subject_reaches},
                      {"reach_delta", row.reach_delta},
                      {"reach_multiplier", Opt(row.reach_multiplier)}});
    coverage = rows;
  } catch (const Error &) {
  }
  return {{"master_seed", report.master_seed},
          {"trials", report.trials},
          {"strategies", report.strategies},
          {"targets", report.targets},
          {"reference", report.reference},
          {"coverage_baseline", report.coverage_baseline},
          {"censor_time", report.censor_time},
          {"config", report.config},
          {"records", records},
          {"aggregates", aggregates},
          {"comparisons", comparisons},
          {"coverage_vs_reach", coverage},
          {"footnotes", report.footnotes}};
}

CampaignReport ReportFromJson(const json &j) {
  CampaignReport report;
  try {
    report.master_seed = j.at("master_seed").get<uint64_t>();
    report.trials = j.at("trials").get<int>();
    report.strategies = j.at("strategies").get<std::vector<std::string>>();
    report.targets = j.at("targets").get<std::vector<std::string>>();
    report.reference = j.at("reference").get<std::string>();
    report.coverage_baseline = j.at("coverage_baseline").get<std::string>();
    report.censor_time = j.at("censor_time").get<double>();
    report.config = j.at("config");
    for (const auto &jr : j.at("records")) {
      TrialRecord r;
      r.target_id = jr.at("target_id").get<std::string>();
      r.strategy = jr.at("strategy").get<std::string>();
      r.trial = jr.at("trial").get<int>();
      r.ok = jr.at("ok").get<bool>();
      r.error = jr.at("error").get<std::string>();
      r.fallback_used = jr.at("fallback_used").get<bool>();
      r.corpus_size = jr.at("corpus_size").get<size_t>();
      if (r.ok) r.stats = StatsFromJson(jr.at("stats"));
      report.records.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kIo, std::string("malformed report: ") + e.what());
  }
  AssembleReport(report);
  return report;
}

std::string ReportCsv(const CampaignReport &report) {
  std::string out = "target,bug_id";
  for (const auto &s : report.strategies)
    for (const char *col : {"trials", "trigger_rate", "time", "time_ratio", "p", "reaches",
                            "reach_ratio", "total_reaches", "coverage"})
      out += "," + s + "_" + col;
  out += "\n";
  for (const auto &target : report.targets) {
    std::string bug;
    for (const auto &r : report.records)
      if (r.target_id == target && r.ok) {
        bug = r.stats.bug_id;
        break;
      }
    out += target + "," + bug;
    for (const auto &s : report.strategies) {
      const StrategyAggregate *a = report.Aggregate(target, s);
      const PairComparison *c = report.Comparison(target, s);
      const bool is_ref = s == report.reference;
      out += "," + std::to_string(a->trials);
      out += "," + Fixed(a->trigger_rate, 2);
      out += "," + (a->mean_time_to_trigger ? Fixed(*a->mean_time_to_trigger, 4) : "T.O.");
      out += "," + (is_ref ? std::string("-") : FormatRatio(c->speedup));
      out += "," + (is_ref ? std::string("-") : c->mann_whitney ? Sci(c->mann_whitney->p_two_sided) : "N.A");
      out += "," + (a->mean_reaches_before_trigger ? Fixed(*a->mean_reaches_before_trigger, 1) : "T.O.");
      out += "," + (is_ref ? std::string("-") : FormatRatio(c->reach_ratio));
      out += "," + Fixed(a->mean_total_reaches, 1);
      out += "," + Fixed(a->mean_coverage, 4);
    }
    out += "\n";
  }
  return out;
}

std::string CoverageReachCsv(const std::vector<CoverageReachRow> &rows) {
  std::string out =
      "target,baseline,subject,baseline_coverage,subject_coverage,coverage_delta_pct,"
      "baseline_total_reaches,subject_total_reaches,reach_delta,reach_multiplier\n";
  for (const auto &r : rows) {
    out += r.target_id + "," + r.baseline + "," + r.subject + "," + Fixed(r.baseline_coverage, 4) +
           "," + Fixed(r.subject_coverage, 4) + "," +
           (r.coverage_delta_pct ? Fixed(*r.coverage_delta_pct, 2) : "N.A") + "," +
           Fixed(r.baseline_reaches, 1) + "," + Fixed(r.subject_reaches, 1) + "," +
           Fixed(r.reach_delta, 1) + "," + FormatRatio(r.reach_multiplier) + "\n";
  }
  return out;
}

std::string RenderReport(const CampaignReport &report) {
  std::string out;
  char line[512];
  for (const auto &target : report.targets) {
    std::snprintf(line, sizeof(line), "Target %s: %d trial(s) per strategy, reference %s\n",
                  target.c_str(), report.trials, report.reference.c_str());
    out += line;
    std::snprintf(line, sizeof(line), "  %-12s %8s %12s %8s %10s %14s %10s %14s %9s\n", "strategy",
                  "trig", "time(s)", "ratio", "p", "reaches", "ratio", "total_reach", "coverage");
    out += line;
    for (const auto &s : report.strategies) {
      const StrategyAggregate *a = report.Aggregate(target, s);
      const PairComparison *c = report.Comparison(target, s);
      const bool is_ref = s == report.reference;
      std::string trig = std::to_string(a->triggered_trials) + "/" + std::to_string(a->ok_trials);
      std::string time = a->mean_time_to_trigger ? Fixed(*a->mean_time_to_trigger, 4) : "T.O.";
      std::string reaches = a->mean_reaches_before_trigger ? Fixed(*a->mean_reaches_before_trigger, 1) : "T.O.";
      std::string speed = is_ref ? "-" : FormatRatio(c->speedup) + (c->speedup ? "x" : "");
      std::string p = is_ref ? "-" : c->mann_whitney ? Sci(c->mann_whitney->p_two_sided) : "N.A";
      std::string rr = is_ref ? "-" : FormatRatio(c->reach_ratio) + (c->reach_ratio ? "x" : "");
      std::snprintf(line, sizeof(line), "  %-12s %8s %12s %8s %10s %14s %10s %14s %9s\n", s.c_str(),
                    trig.c_str(), time.c_str(), speed.c_str(), p.c_str(), reaches.c_str(), rr.c_str(),
                    Fixed(a->mean_total_reaches, 1).c_str(), Fixed(a->mean_coverage, 4).c_str());
      out += line;
    }
  }
  try {
    auto rows = CoverageVsReachTable(report, report.coverage_baseline, report.reference);
    out += "Coverage vs reach (" + report.reference + " against " + report.coverage_baseline + "):\n";
    for (const auto &r : rows) {
      std::snprintf(line, sizeof(line),
                    "  %s: coverage %.4f vs %.4f (delta %s%%), mean total reaches %.1f vs %.1f "
                    "(delta %+.1f, multiplier %s)\n",
                    r.target_id.c_str(), r.subject_coverage, r.baseline_coverage,
                    r.coverage_delta_pct ? Fixed(*r.coverage_delta_pct, 2).c_str() : "N.A",
                    r.subject_reaches, r.baseline_reaches, r.reach_delta,
                    FormatRatio(r.reach_multiplier).c_str());
      out += line;
    }
  } catch (const Error &e) {
    out += std::string("Coverage vs reach: skipped (") + e.what() + ")\n";
  }
  for (const auto &r : report.records)
    if (!r.ok)
      out += "Failed: " + r.target_id + "/" + r.strategy + "/trial-" + std::to_string(r.trial) +
             ": " + r.error + "\n";
  for (const auto &n : report.footnotes) out += "Note: " + n + "\n";
  return out;
}

void WriteReportFiles(const CampaignReport &report, const fs::path &dir, bool json_only) {
  fs::create_directories(dir);
  WriteFile(dir / "report.json", ReportToJson(report).dump(2) + "\n");
  json timing = json::array();
  for (const auto &r : report.records)
    timing.push_back({{"target_id", r.target_id},
                      {"strategy", r.strategy},
                      {"trial", r.trial},
                      {"wall_secs", r.wall_secs}});
  WriteFile(dir / "timing.json", timing.dump(2) + "\n");
  if (json_only) return;
  WriteFile(dir / "report.csv", ReportCsv(report));
  try {
    WriteFile(dir / "coverage_reach.csv",
              CoverageReachCsv(CoverageVsReachTable(report, report.coverage_baseline, report.reference)));
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kMissingStrategy) throw;
  }
}

}  // namespace seedforge
