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

#include "seedforge/target_zoo.h"

#include <algorithm>

namespace seedforge {

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kClean: return "Clean";
    case Outcome::kParseError: return "ParseError";
    case Outcome::kFault: return "Fault";
  }
  return "?";
}

TraceRecorder::TraceRecorder(uint32_t total_edges, std::vector<uint32_t> site_edges)
    : seen_(total_edges, 0),
      site_edges_(std::move(site_edges)),
      reached_(site_edges_.size(), 0),
      triggered_(site_edges_.size(), 0) {
  touched_.reserve(total_edges);
}

void TraceRecorder::Reset() {
  for (uint32_t e : touched_) seen_[e] = 0;
  touched_.clear();
  std::fill(reached_.begin(), reached_.end(), 0);
  std::fill(triggered_.begin(), triggered_.end(), 0);
  rejected_ = false;
}

std::optional<size_t> TargetProgram::BugIndex(std::string_view bug_id) const {
  for (size_t i = 0; i < bug_sites_.size(); ++i)
    if (bug_sites_[i].bug_id == bug_id) return i;
  return std::nullopt;
}

TraceRecorder TargetProgram::MakeRecorder() const {
  std::vector<uint32_t> sites;
  for (const auto &b : bug_sites_) sites.push_back(b.site_edge);
  return TraceRecorder(total_edges_, std::move(sites));
}

ExecutionTrace TargetProgram::Export(const TraceRecorder &rec) const {
  ExecutionTrace trace;
  trace.edges_hit = rec.touched();
  std::sort(trace.edges_hit.begin(), trace.edges_hit.end());
  trace.reached.resize(bug_sites_.size());
  trace.triggered.resize(bug_sites_.size());
  for (size_t i = 0; i < bug_sites_.size(); ++i) {
    trace.reached[i] = rec.reached(i);
    trace.triggered[i] = rec.triggered(i);
    if (rec.triggered(i) && !trace.fault_bug) {
      trace.outcome = Outcome::kFault;
      trace.fault_bug = bug_sites_[i].bug_id;
    }
  }
  if (!trace.fault_bug)
    trace.outcome = rec.rejected() ? Outcome::kParseError : Outcome::kClean;
  return trace;
}

ExecutionTrace TargetProgram::Run(ByteView input) const {
  TraceRecorder rec = MakeRecorder();
  Execute(input, rec);
  return Export(rec);
}

nlohmann::json TargetProgram::Describe() const {
  nlohmann::json bugs = nlohmann::json::array();
  for (const auto &b : bug_sites_) {
    bugs.push_back({{"bug_id", b.bug_id},
                    {"description", b.description},
                    {"site_edge", b.site_edge},
                    {"witness_hex", ToHex(b.witness)}});
  }
  return {{"target_id", id_},
          {"format", format_},
          {"total_edges", total_edges_},
          {"bugs", std::move(bugs)}};
}

const std::vector<std::unique_ptr<TargetProgram>> &TargetRegistry() {
  static const auto *kRegistry = [] {
    auto *v = new std::vector<std::unique_ptr<TargetProgram>>();
    v->push_back(MakeMiniImgTarget());
    v->push_back(MakeMiniXmlTarget());
    v->push_back(MakeMiniDocTarget());
    return v;
  }();
  return *kRegistry;
}

const TargetProgram *FindTarget(std::string_view target_id) {
  for (const auto &t : TargetRegistry())
    if (t->id() == target_id) return t.get();
  return nullptr;
}

const TargetProgram &GetTarget(std::string_view target_id) {
  const TargetProgram *t = FindTarget(target_id);
  if (t == nullptr)
    throw Error(ErrorCode::kUnknownTarget, "target '" + std::string(target_id) + "'");
  return *t;
}

}  // namespace seedforge
