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

// Seed generation: ask the backend for generator scripts, run each script as
// a child process in a fresh scratch directory, and keep what it produced.

#ifndef SEEDFORGE_SEED_SYNTHESIS_H_
#define SEEDFORGE_SEED_SYNTHESIS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/common.h"
#include "seedforge/llm_gateway.h"
#include "seedforge/prompt_refinery.h"

namespace seedforge {

std::string BuildGenerationPrompt(const CandidatePrompt &cand, std::string_view format,
                                  std::string_view cve_id, std::string_view put_name);

// Body of the first fenced block, or the whole trimmed response if there is
// no fence. May return an empty string.
std::string ExtractCode(std::string_view response);

struct GeneratorScript {
  std::string source_text;
  uint32_t candidate = 0;  // index into the candidate list
  uint32_t draw = 0;       // draw index within that candidate
  std::string bundle_id;
  std::filesystem::path script_path;  // set once persisted

  // "<candidate>-<draw>"
  std::string Tag() const { return std::to_string(candidate) + "-" + std::to_string(draw); }
};

struct SynthesisLogEntry {
  uint32_t candidate = 0;
  uint32_t draw = 0;
  std::string message;
};

struct SynthesisOptions {
  int scripts_per_prompt = 3;
  double temperature = 0.8;
  int max_tokens = 2048;
  std::optional<uint64_t> seed;
};

struct SynthesisResult {
  std::vector<GeneratorScript> scripts;
  std::vector<SynthesisLogEntry> log;  // dropped draws and gateway failures
};

SynthesisResult Synthesize(const std::vector<CandidatePrompt> &cands, std::string_view format,
                           std::string_view cve_id, std::string_view put_name,
                           LlmBackend &gateway, const SynthesisOptions &options);

// Writes <dir>/<cand>-<draw>.gen and records script_path.
void PersistScripts(std::vector<GeneratorScript> &scripts, const std::filesystem::path &dir);

enum class SandboxStatus { kProduced, kExecFailed, kTimeout, kNoOutput, kOversize };
std::string_view SandboxStatusName(SandboxStatus s);

struct SandboxLimits {
  std::vector<std::string> interpreter = {"python3"};
  std::chrono::milliseconds timeout{10'000};
  size_t output_cap = 1 << 20;
  std::filesystem::path work_root;  // parent for scratch dirs; default temp dir
};

struct SandboxOutcome {
  SandboxStatus status = SandboxStatus::kNoOutput;
  size_t stdout_bytes_captured = 0;
  // File name inside the scratch dir, or "<stdout>". Set iff kProduced.
  std::optional<std::string> output_file;
  std::chrono::milliseconds wall_time{0};
  // Captured bytes; for kOversize truncated to the cap, for kExecFailed
  // whatever the script left behind.
  Bytes output;
  int exit_code = -1;
  std::string note;
};

// Throws Error(kConfig) when the interpreter cannot be started.
SandboxOutcome ExecuteSandboxed(const GeneratorScript &script, const SandboxLimits &limits);

// Runs every script with up to `max_parallel` children at once; results are
// index-aligned with `scripts`.
std::vector<SandboxOutcome> ExecuteAll(const std::vector<GeneratorScript> &scripts,
                                       const SandboxLimits &limits, int max_parallel);

struct SeedVerdict {
  bool executed_ok = false;
  bool format_ok = false;
  bool size_ok = false;
  std::string format_reason;

  bool admitted() const { return executed_ok && format_ok && size_ok; }
  bool operator==(const SeedVerdict &) const = default;
};

struct SeedArtifact {
  Bytes bytes;
  GeneratorScript origin;
  SandboxOutcome outcome;
  std::optional<SeedVerdict> verdict;  // filled by the selector

  size_t size() const { return bytes.size(); }
};

// One artifact per outcome that left non-empty bytes behind.
std::vector<SeedArtifact> CollectArtifacts(const std::vector<GeneratorScript> &scripts,
                                           std::vector<SandboxOutcome> outcomes);

// Writes <dir>/<cand>-<draw>.bin per artifact.
void PersistRawSeeds(const std::vector<SeedArtifact> &artifacts, const std::filesystem::path &dir);

}  // namespace seedforge

#endif  // SEEDFORGE_SEED_SYNTHESIS_H_
