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

// Completion backends. The mock answers from a scriptbook and is a pure
// function of (prompt, temperature bucket, draw index, seed); the remote
// backend speaks JSON chat-completions over HTTP(S).

#ifndef SEEDFORGE_LLM_GATEWAY_H_
#define SEEDFORGE_LLM_GATEWAY_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace seedforge {

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.0;  // [0, 2]
  int max_tokens = 2048;     // >= 1
  std::optional<uint64_t> seed;
  // Position of this draw in the caller's sampling sequence.
  uint32_t draw_index = 0;

  // Throws Error(kInvalidArgument).
  void Validate() const;
};

struct CompletionResponse {
  std::string text;
  std::string backend_id;
  std::chrono::nanoseconds latency{0};
  bool truncated = false;  // server stopped on the token limit
};

struct HealthReport {
  bool healthy = false;
  std::string backend_id;
  std::string model_id;
  std::string cause;  // set when unhealthy
};

// Thread-safe completion source.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual CompletionResponse Complete(const CompletionRequest &req) = 0;
  virtual HealthReport Probe() = 0;
  virtual std::string id() const = 0;
};

enum class TemperatureBucket { kGreedy, kSampled };
inline TemperatureBucket BucketOf(double temperature) {
  return temperature == 0.0 ? TemperatureBucket::kGreedy : TemperatureBucket::kSampled;
}

uint64_t PromptFingerprint(std::string_view prompt);

// Scriptbook JSON:
//
//   {
//     "default": "fallback text",
//     "entries": [
//       {"name": "...",
//        "contains": ["substring", ...],      // all must occur in the prompt
//        "fingerprint": "<16 hex digits>",    // or: exact prompt match
//        "bucket": "greedy" | "sampled" | "any",
//        "responses": ["text", {"file": "rel/path.py", "fence": "python"}]}
//     ]
//   }
//
// Fingerprint entries are tried before substring entries; ties go to file
// order. A greedy draw always returns the first response. A sampled draw
// returns responses[(draw_index + r) % n] with r derived from (seed,
// fingerprint), or r = 0 without a seed. Unmatched prompts get "default".
class MockScriptbook {
 public:
  struct Entry {
    std::string name;
    std::vector<std::string> contains;
    std::optional<uint64_t> fingerprint;
    std::optional<TemperatureBucket> bucket;  // nullopt = any
    std::vector<std::string> responses;
  };

  static constexpr std::string_view kBuiltinDefault = "No scripted response.";

  MockScriptbook() = default;
  // `base_dir` resolves {"file": ...} responses.
  static MockScriptbook FromJson(const nlohmann::json &j,
                                 const std::filesystem::path &base_dir = {});
  static MockScriptbook Load(const std::filesystem::path &path);

  void AddEntry(Entry e) { entries_.push_back(std::move(e)); }
  void set_default(std::string text) { default_ = std::move(text); }

  const std::string &Lookup(std::string_view prompt, TemperatureBucket bucket,
                            uint32_t draw_index, std::optional<uint64_t> seed) const;

 private:
  std::vector<Entry> entries_;
  std::string default_{kBuiltinDefault};
};

class MockBackend : public LlmBackend {
 public:
  explicit MockBackend(MockScriptbook book) : book_(std::move(book)) {}
  CompletionResponse Complete(const CompletionRequest &req) override;
  HealthReport Probe() override { return {true, id(), "mock", {}}; }
  std::string id() const override { return "mock"; }

 private:
  MockScriptbook book_;
};

struct RemoteConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-4-0613";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_inflight = 4;
  int timeout_secs = 60;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

class RemoteBackend : public LlmBackend {
 public:
  explicit RemoteBackend(RemoteConfig cfg);
  // Errors: kAuth (key variable unset, 401/403), kTransport (after retries).
  CompletionResponse Complete(const CompletionRequest &req) override;
  HealthReport Probe() override;
  std::string id() const override { return "remote:" + cfg_.model; }

 private:
  std::string ApiKey() const;  // throws kAuth

  RemoteConfig cfg_;
  std::string origin_;     // scheme://host[:port]
  std::string base_path_;  // e.g. /v1
  std::counting_semaphore<256> inflight_;
};

}  // namespace seedforge

#endif  // SEEDFORGE_LLM_GATEWAY_H_
