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

// Run configuration: a flat table of dotted keys, each with a type, a
// default and a one-line description. Files may nest or flatten keys;
// overrides given as key=value strings are applied last.

#ifndef SEEDFORGE_CONFIG_H_
#define SEEDFORGE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedforge/grey_fuzzer.h"
#include "seedforge/llm_gateway.h"
#include "seedforge/prompt_refinery.h"
#include "seedforge/seed_synthesis.h"

namespace seedforge {

enum class KeyType { kInt, kReal, kBool, kString, kPath, kList };

struct KeySpec {
  std::string key;
  KeyType type;
  nlohmann::json default_value;
  std::string help;
};

class Config {
 public:
  Config();  // all defaults

  static const std::vector<KeySpec> &Keys();
  // "  key = default  help" lines, for --help footers.
  static std::string KeyTable();

  // Reads a JSON file. Relative path-typed values resolve against the
  // file's directory.
  void MergeFile(const std::filesystem::path &path);
  void Merge(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
  // Parses "key=value" with the key's type.
  void SetOverride(std::string_view assignment);
  void Set(std::string_view key, std::string_view value);

  int64_t Int(std::string_view key) const;
  uint64_t UInt(std::string_view key) const;
  double Real(std::string_view key) const;
  bool Bool(std::string_view key) const;
  std::string Str(std::string_view key) const;
  std::vector<std::string> List(std::string_view key) const;

  // Flat object, keys sorted.
  nlohmann::json ToJson() const { return values_; }

 private:
  const KeySpec &Spec(std::string_view key) const;
  void Assign(const KeySpec &spec, const nlohmann::json &value, const std::filesystem::path &base);

  nlohmann::json values_;
};

RefineOptions RefineOptionsFrom(const Config &cfg, std::optional<uint64_t> seed);
SynthesisOptions SynthesisOptionsFrom(const Config &cfg, std::optional<uint64_t> seed);
SandboxLimits SandboxLimitsFrom(const Config &cfg);
FuzzConfig FuzzConfigFrom(const Config &cfg, uint64_t rng_seed);
RemoteConfig RemoteConfigFrom(const Config &cfg);

// Positive values pass through; 0 or less means the number of CPUs.
int WorkerCount(int64_t configured);

// "mock" or "remote" per llm.backend.
std::unique_ptr<LlmBackend> MakeBackend(const Config &cfg);

}  // namespace seedforge

#endif  // SEEDFORGE_CONFIG_H_
