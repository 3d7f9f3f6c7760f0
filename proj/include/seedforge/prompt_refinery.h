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

// Condenses a UserInputBundle into candidate summary prompts: one greedy
// draw, then sampled draws until the requested number of distinct
// summaries exists.

#ifndef SEEDFORGE_PROMPT_REFINERY_H_
#define SEEDFORGE_PROMPT_REFINERY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/common.h"
#include "seedforge/input_model.h"
#include "seedforge/llm_gateway.h"

namespace seedforge {

inline constexpr std::string_view kSummarizeInstruction =
    "Please summarize the above information concisely to describe the "
    "functionality of the test project, the usage of the fuzz driver, and the "
    "details of the vulnerability.";

struct CandidatePrompt {
  std::string text;
  uint32_t draw_index = 0;
  double temperature = 0.0;
  std::string source_bundle_id;
  std::string dedup_key;

  bool operator==(const CandidatePrompt &) const = default;
};

struct RefineOptions {
  int candidates = 10;
  double temperature = 0.8;
  int retry_factor = 3;  // total draw budget = retry_factor * candidates
  int max_tokens = 2048;
  std::optional<uint64_t> seed;
  int parallelism = 1;  // concurrent sampled draws
};

class DistinctnessExhausted : public Error {
 public:
  DistinctnessExhausted(std::vector<CandidatePrompt> got, int wanted, int draws)
      : Error(ErrorCode::kDistinctnessExhausted,
              "obtained " + std::to_string(got.size()) + " of " + std::to_string(wanted) +
                  " distinct candidates in " + std::to_string(draws) + " draws"),
        candidates_(std::move(got)) {}

  const std::vector<CandidatePrompt> &candidates() const { return candidates_; }

 private:
  std::vector<CandidatePrompt> candidates_;
};

// Lowercase, whitespace runs collapsed to one space, trimmed.
std::string NormalizeForDedup(std::string_view text);
std::string DedupKey(std::string_view text);

std::string BuildRefinementPrompt(const UserInputBundle &bundle);

// Throws DistinctnessExhausted when the draw budget runs out first.
std::vector<CandidatePrompt> Refine(const UserInputBundle &bundle, LlmBackend &gateway,
                                    const RefineOptions &options);

// Writes dir/cand-<i>.txt for each candidate.
void WriteCandidates(const std::vector<CandidatePrompt> &cands, const std::filesystem::path &dir);

}  // namespace seedforge

#endif  // SEEDFORGE_PROMPT_REFINERY_H_
