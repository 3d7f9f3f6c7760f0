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

// Coverage-guided mutation fuzzer in the AFL mould: a round-robin seed queue,
// an exact edge set as the feedback map, one deterministic pass per queue
// entry followed by stacked havoc mutations, and per-execution reach/trigger
// accounting for one designated bug.
//
// Time is measured on a virtual clock charged per execution, so a trial's
// statistics depend only on its inputs. The wall clock only acts as a safety
// stop.

#ifndef SEEDFORGE_GREY_FUZZER_H_
#define SEEDFORGE_GREY_FUZZER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seedforge/common.h"
#include "seedforge/target_zoo.h"

namespace seedforge {

struct FuzzConfig {
  uint64_t rng_seed = 0;
  std::optional<double> time_budget_secs = 120.0;
  std::optional<uint64_t> exec_budget = 2'000'000;
  std::string target_bug;  // empty selects the target's first bug
  int havoc_stack_min = 2;   // stacked mutations per havoc exec, powers of two
  int havoc_stack_max = 64;  // within [min, max]
  int havoc_rounds = 8;      // base energy per queue visit
  int havoc_execs_per_round = 32;
  bool reach_boost = false;  // double energy for entries that first hit the bug site
  size_t max_input_bytes = 1 << 20;
  double exec_cost_us = 20.0;  // virtual cost of one execution
  double byte_cost_ns = 20.0;  // plus this per input byte
  bool audit_log = false;

  // Throws Error(kConfig) on inconsistent settings.
  void Validate() const;
};

struct QueueEntry {
  Bytes bytes;
  uint64_t discovery_exec = 0;  // 0 for the initial corpus
  std::vector<uint32_t> coverage_novelty;
  int energy = 0;
  bool det_done = false;
};

struct AuditRecord {
  uint64_t exec = 0;  // 1-based execution number
  Bytes input;
  bool reached = false;
  bool triggered = false;
  bool novel = false;
};

struct FuzzTrialStats {
  std::string target_id;
  std::string bug_id;
  bool triggered = false;
  std::optional<double> time_to_trigger;  // virtual seconds
  std::optional<uint64_t> execs_to_trigger;
  uint64_t reaches_before_trigger = 0;  // counts the triggering execution
  uint64_t total_reaches = 0;
  uint64_t total_execs = 0;
  uint32_t edges_covered = 0;
  uint32_t total_edges = 0;
  double coverage_fraction = 0.0;
  size_t queue_size = 0;
  double elapsed_secs = 0.0;  // virtual
  std::string stop_reason;    // "triggered", "exec_budget", "time_budget", "wall_clock"

  bool operator==(const FuzzTrialStats &) const = default;
};

struct FuzzResult {
  FuzzTrialStats stats;
  std::optional<Bytes> trigger_input;
  std::vector<AuditRecord> audit;  // only with cfg.audit_log
  double wall_secs = 0.0;
};

// Throws Error(kEmptyCorpus) for an empty corpus, Error(kOversizeSeed) for a
// seed above cfg.max_input_bytes and Error(kInvalidArgument) for an unknown bug.
FuzzResult Fuzz(const TargetProgram &target, const std::vector<Bytes> &corpus,
                const FuzzConfig &cfg);

ExecutionTrace Replay(const TargetProgram &target, ByteView input);

nlohmann::json StatsToJson(const FuzzTrialStats &stats);
FuzzTrialStats StatsFromJson(const nlohmann::json &j);

// Writes stats.json, trigger.bin when triggered and audit.jsonl when audited.
void WriteTrialArtifacts(const FuzzResult &result, const std::filesystem::path &dir);
std::vector<AuditRecord> LoadAuditLog(const std::filesystem::path &path);

}  // namespace seedforge

#endif  // SEEDFORGE_GREY_FUZZER_H_
