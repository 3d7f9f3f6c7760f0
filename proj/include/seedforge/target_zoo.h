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

// In-process toy programs-under-test. Each target is a small parser with
// statically numbered edge probes and one planted bug. A bug is "reached"
// when its site probe executes and "triggered" when the fault condition also
// holds. Like a canary oracle, a trigger is recorded and execution continues,
// so one input can both fault and cover later code.

#ifndef SEEDFORGE_TARGET_ZOO_H_
#define SEEDFORGE_TARGET_ZOO_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedforge/common.h"

namespace seedforge {

enum class Outcome { kClean, kParseError, kFault };

std::string_view OutcomeName(Outcome outcome);

struct ExecutionTrace {
  std::vector<uint32_t> edges_hit;  // sorted, unique
  std::vector<uint8_t> reached;     // indexed like TargetProgram::bug_sites()
  std::vector<uint8_t> triggered;
  Outcome outcome = Outcome::kClean;
  std::optional<std::string> fault_bug;  // set iff outcome == kFault

  bool operator==(const ExecutionTrace &) const = default;
};

struct BugSite {
  std::string bug_id;
  std::string description;
  uint32_t site_edge = 0;  // probe whose execution counts as a reach
  Bytes witness;           // known triggering input
};

// Per-execution probe sink. Reused across executions to avoid allocation.
class TraceRecorder {
 public:
  TraceRecorder(uint32_t total_edges, std::vector<uint32_t> site_edges);

  void Reset();
  void Hit(uint32_t edge) {
    if (!seen_[edge]) {
      seen_[edge] = 1;
      touched_.push_back(edge);
    }
  }
  // Marks the bug reached and hits its site probe.
  void Reach(size_t bug) {
    Hit(site_edges_[bug]);
    reached_[bug] = 1;
  }
  // Marks the bug triggered; a trigger always implies a reach.
  void Trigger(size_t bug) {
    Reach(bug);
    triggered_[bug] = 1;
  }
  void Reject() { rejected_ = true; }

  bool reached(size_t bug) const { return reached_[bug] != 0; }
  bool triggered(size_t bug) const { return triggered_[bug] != 0; }
  bool rejected() const { return rejected_; }
  const std::vector<uint32_t> &touched() const { return touched_; }

 private:
  std::vector<uint8_t> seen_;
  std::vector<uint32_t> touched_;
  std::vector<uint32_t> site_edges_;
  std::vector<uint8_t> reached_;
  std::vector<uint8_t> triggered_;
  bool rejected_ = false;
};

class TargetProgram {
 public:
  virtual ~TargetProgram() = default;

  const std::string &id() const { return id_; }
  const std::string &format() const { return format_; }
  // Name used for the program in generation prompts.
  const std::string &put_name() const { return id_; }
  uint32_t total_edges() const { return total_edges_; }
  const std::vector<BugSite> &bug_sites() const { return bug_sites_; }
  std::optional<size_t> BugIndex(std::string_view bug_id) const;

  // Seeds shipped with the target, standing in for benchmark-provided seeds.
  const std::vector<Bytes> &provided_corpus() const { return provided_; }
  // Smallest well-formed instance of the format.
  const Bytes &minimal_input() const { return minimal_; }

  TraceRecorder MakeRecorder() const;

  // Pure and deterministic; never throws for any input.
  ExecutionTrace Run(ByteView input) const;
  // Hot-path variant: resets `rec` and leaves the probes in it.
  void Execute(ByteView input, TraceRecorder &rec) const {
    rec.Reset();
    Probe(input, rec);
  }
  ExecutionTrace Export(const TraceRecorder &rec) const;

  nlohmann::json Describe() const;

 protected:
  TargetProgram(std::string id, std::string format, uint32_t total_edges)
      : id_(std::move(id)), format_(std::move(format)), total_edges_(total_edges) {}

  virtual void Probe(ByteView input, TraceRecorder &rec) const = 0;

  std::vector<BugSite> bug_sites_;
  std::vector<Bytes> provided_;
  Bytes minimal_;

 private:
  std::string id_;
  std::string format_;
  uint32_t total_edges_;
};

std::unique_ptr<TargetProgram> MakeMiniImgTarget();
std::unique_ptr<TargetProgram> MakeMiniXmlTarget();
std::unique_ptr<TargetProgram> MakeMiniDocTarget();

// Every shipped target, in a fixed order.
const std::vector<std::unique_ptr<TargetProgram>> &TargetRegistry();
// nullptr when unknown.
const TargetProgram *FindTarget(std::string_view target_id);
// Throws Error(kUnknownTarget).
const TargetProgram &GetTarget(std::string_view target_id);

}  // namespace seedforge

#endif  // SEEDFORGE_TARGET_ZOO_H_
