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

#include "seedforge/config.h"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <thread>

namespace seedforge {

namespace {

using nlohmann::json;

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string item = Trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

void Flatten(const json &j, const std::string &prefix, std::vector<std::pair<std::string, json>> &out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) Flatten(*it, key, out);
    else out.emplace_back(key, *it);
  }
}

}  // namespace

const std::vector<KeySpec> &Config::Keys() {
  static const std::vector<KeySpec> keys = {
      {"llm.backend", KeyType::kString, "mock", "completion backend: mock | remote"},
      {"llm.scriptbook", KeyType::kPath, "", "mock scriptbook JSON (empty: every prompt gets the default reply)"},
      {"llm.model", KeyType::kString, "gpt-4-0613", "remote model name"},
      {"llm.endpoint", KeyType::kString, "https://api.openai.com/v1", "remote API base URL"},
      {"llm.api_key_env", KeyType::kString, "OPENAI_API_KEY", "environment variable holding the remote API key"},
      {"llm.max_inflight", KeyType::kInt, 4, "concurrent remote requests"},
      {"llm.max_tokens", KeyType::kInt, 2048, "completion token limit"},
      {"llm.timeout_secs", KeyType::kInt, 60, "remote request timeout"},
      {"refine.candidates", KeyType::kInt, 10, "distinct candidate prompts to produce"},
      {"refine.temperature", KeyType::kReal, 0.8, "sampling temperature after the greedy draw"},
      {"refine.retry_factor", KeyType::kInt, 3, "draw budget as a multiple of refine.candidates"},
      {"synth.scripts_per_prompt", KeyType::kInt, 3, "generator scripts requested per candidate"},
      {"synth.temperature", KeyType::kReal, 0.8, "sampling temperature for script generation"},
      {"synth.interpreter", KeyType::kString, "python3", "command (split on spaces) that runs a script"},
      {"synth.timeout_secs", KeyType::kReal, 10.0, "wall-clock limit per script"},
      {"synth.output_cap_bytes", KeyType::kInt, 1 << 20, "largest output a script may produce"},
      {"synth.max_parallel", KeyType::kInt, 0, "concurrent scripts (0: number of CPUs)"},
      {"select.corpus_size", KeyType::kInt, 10, "seeds kept in the initial corpus"},
      {"select.max_bytes", KeyType::kInt, 1 << 20, "largest admissible seed"},
      {"select.fallback", KeyType::kString, "none", "corpus used when nothing is admitted: none | provided | empty_like"},
      {"fuzz.exec_budget", KeyType::kInt, 2000000, "executions per trial (0: unlimited)"},
      {"fuzz.time_budget_secs", KeyType::kReal, 120.0, "virtual seconds per trial (0: unlimited)"},
      {"fuzz.reach_boost", KeyType::kBool, false, "double havoc energy for entries that first hit the bug site"},
      {"fuzz.audit_log", KeyType::kBool, false, "record every execution (small budgets only)"},
      {"fuzz.havoc_stack_min", KeyType::kInt, 2, "fewest stacked havoc mutations"},
      {"fuzz.havoc_stack_max", KeyType::kInt, 64, "most stacked havoc mutations"},
      {"fuzz.max_input_bytes", KeyType::kInt, 1 << 20, "largest input the fuzzer accepts or creates"},
      {"fuzz.exec_cost_us", KeyType::kReal, 20.0, "virtual microseconds charged per execution"},
      {"fuzz.byte_cost_ns", KeyType::kReal, 20.0, "virtual nanoseconds charged per input byte"},
      {"campaign.trials", KeyType::kInt, 10, "trials per (target, strategy)"},
      {"campaign.strategies", KeyType::kList, "isc4dgf,random_llm,provided,empty_like", "strategies to compare"},
      {"campaign.targets", KeyType::kList, "", "target ids (empty: each bundle's own target)"},
      {"campaign.max_parallel", KeyType::kInt, 0, "concurrent trials (0: number of CPUs)"},
      {"campaign.coverage_baseline", KeyType::kString, "provided", "strategy the coverage-vs-reach table compares against"},
      {"master_seed", KeyType::kInt, 1, "root of every derived random seed"},
  };
  return keys;
}

std::string Config::KeyTable() {
  std::ostringstream out;
  out << "Configuration keys (--set key=value, or a JSON file via --config):\n";
  for (const auto &k : Keys()) {
    std::string def = k.default_value.is_string() ? k.default_value.get<std::string>()
                                                  : k.default_value.dump();
    out << "  " << k.key << " = " << (def.empty() ? "\"\"" : def) << "\n      " << k.help << "\n";
  }
  return out.str();
}

Config::Config() : values_(json::object()) {
  for (const auto &k : Keys()) values_[k.key] = k.default_value;
}

const KeySpec &Config::Spec(std::string_view key) const {
  for (const auto &k : Keys())
    if (k.key == key) return k;
  throw Error(ErrorCode::kConfig, "unknown configuration key '" + std::string(key) + "'");
}

void Config::Assign(const KeySpec &spec, const json &v, const std::filesystem::path &base) {
  auto bad = [&](std::string_view what) {
    return Error(ErrorCode::kConfig, spec.key + ": expected " + std::string(what) + ", got " + v.dump());
  };
  switch (spec.type) {
    case KeyType::kInt:
      if (!v.is_number_integer()) throw bad("an integer");
      values_[spec.key] = v;
      break;
    case KeyType::kReal:
      if (!v.is_number()) throw bad("a number");
      values_[spec.key] = v.get<double>();
      break;
    case KeyType::kBool:
      if (v.is_boolean()) {
        values_[spec.key] = v;
      } else if (v.is_string()) {
        Set(spec.key, v.get<std::string>());
      } else {
        throw bad("on/off");
      }
      break;
    case KeyType::kString:
      if (!v.is_string()) throw bad("a string");
      values_[spec.key] = v;
      break;
    case KeyType::kPath: {
      if (!v.is_string()) throw bad("a path string");
      std::filesystem::path p = v.get<std::string>();
      if (!p.empty() && p.is_relative() && !base.empty()) p = base / p;
      values_[spec.key] = p.lexically_normal().string();
      break;
    }
    case KeyType::kList:
      if (v.is_string()) {
        values_[spec.key] = v;
      } else if (v.is_array()) {
        std::string joined;
        for (const auto &item : v) {
          if (!item.is_string()) throw bad("a list of strings");
          if (!joined.empty()) joined += ",";
          joined += item.get<std::string>();
        }
        values_[spec.key] = joined;
      } else {
        throw bad("a list");
      }
      break;
  }
}

void Config::MergeFile(const std::filesystem::path &path) {
  json j;
  try {
    j = json::parse(ReadTextFile(path));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  } catch (const Error &e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  Merge(j, std::filesystem::absolute(path).parent_path());
}

void Config::Merge(const json &j, const std::filesystem::path &base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "configuration must be a JSON object");
  std::vector<std::pair<std::string, json>> flat;
  Flatten(j, "", flat);
  for (const auto &[key, value] : flat) Assign(Spec(key), value, base_dir);
}

void Config::SetOverride(std::string_view assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::kConfig, "override '" + std::string(assignment) + "' is not key=value");
  Set(Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)));
}

void Config::Set(std::string_view key, std::string_view value) {
  const KeySpec &spec = Spec(key);
  const std::string v(value);
  switch (spec.type) {
    case KeyType::kInt: {
      int64_t parsed = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
      if (ec != std::errc() || ptr != v.data() + v.size()) {
        // Accept integral scientific notation such as 2e6.
        try {
          size_t used = 0;
          double d = std::stod(v, &used);
          if (used != v.size() || d != static_cast<double>(static_cast<int64_t>(d))) throw 0;
          parsed = static_cast<int64_t>(d);
        } catch (...) {
          throw Error(ErrorCode::kConfig, spec.key + ": '" + v + "' is not an integer");
        }
      }
      values_[spec.key] = parsed;
      break;
    }
    case KeyType::kReal:
      try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw 0;
        values_[spec.key] = d;
      } catch (...) {
        throw Error(ErrorCode::kConfig, spec.key + ": '" + v + "' is not a number");
      }
      break;
    case KeyType::kBool:
      if (v == "on" || v == "true" || v == "1") values_[spec.key] = true;
      else if (v == "off" || v == "false" || v == "0") values_[spec.key] = false;
      else throw Error(ErrorCode::kConfig, spec.key + ": '" + v + "' is not on/off");
      break;
    case KeyType::kPath:
      values_[spec.key] = std::filesystem::path(v).lexically_normal().string();
      break;
    case KeyType::kString:
    case KeyType::kList:
      values_[spec.key] = v;
      break;
  }
}

int64_t Config::Int(std::string_view key) const {
  Spec(key);
  return values_.at(std::string(key)).get<int64_t>();
}

uint64_t Config::UInt(std::string_view key) const {
  int64_t v = Int(key);
  if (v < 0) throw Error(ErrorCode::kConfig, std::string(key) + " must be >= 0");
  return static_cast<uint64_t>(v);
}

double Config::Real(std::string_view key) const {
  Spec(key);
  return values_.at(std::string(key)).get<double>();
}

bool Config::Bool(std::string_view key) const {
  Spec(key);
  return values_.at(std::string(key)).get<bool>();
}

std::string Config::Str(std::string_view key) const {
  Spec(key);
  return values_.at(std::string(key)).get<std::string>();
}

std::vector<std::string> Config::List(std::string_view key) const { return SplitList(Str(key)); }

RefineOptions RefineOptionsFrom(const Config &cfg, std::optional<uint64_t> seed) {
  RefineOptions o;
  o.candidates = static_cast<int>(cfg.Int("refine.candidates"));
  o.temperature = cfg.Real("refine.temperature");
  o.retry_factor = static_cast<int>(cfg.Int("refine.retry_factor"));
  o.max_tokens = static_cast<int>(cfg.Int("llm.max_tokens"));
  o.parallelism = static_cast<int>(cfg.Int("llm.max_inflight"));
  o.seed = seed;
  return o;
}

SynthesisOptions SynthesisOptionsFrom(const Config &cfg, std::optional<uint64_t> seed) {
  SynthesisOptions o;
  o.scripts_per_prompt = static_cast<int>(cfg.Int("synth.scripts_per_prompt"));
  o.temperature = cfg.Real("synth.temperature");
  o.max_tokens = static_cast<int>(cfg.Int("llm.max_tokens"));
  o.seed = seed;
  return o;
}

SandboxLimits SandboxLimitsFrom(const Config &cfg) {
  SandboxLimits l;
  l.interpreter.clear();
  std::istringstream words(cfg.Str("synth.interpreter"));
  for (std::string w; words >> w;) l.interpreter.push_back(w);
  if (l.interpreter.empty()) throw Error(ErrorCode::kConfig, "synth.interpreter is empty");
  double t = cfg.Real("synth.timeout_secs");
  if (!(t > 0)) throw Error(ErrorCode::kConfig, "synth.timeout_secs must be > 0");
  l.timeout = std::chrono::milliseconds(static_cast<int64_t>(t * 1000));
  l.output_cap = static_cast<size_t>(cfg.UInt("synth.output_cap_bytes"));
  return l;
}

FuzzConfig FuzzConfigFrom(const Config &cfg, uint64_t rng_seed) {
  FuzzConfig f;
  f.rng_seed = rng_seed;
  uint64_t execs = cfg.UInt("fuzz.exec_budget");
  double secs = cfg.Real("fuzz.time_budget_secs");
  f.exec_budget = execs > 0 ? std::optional<uint64_t>(execs) : std::nullopt;
  f.time_budget_secs = secs > 0 ? std::optional<double>(secs) : std::nullopt;
  f.reach_boost = cfg.Bool("fuzz.reach_boost");
  f.audit_log = cfg.Bool("fuzz.audit_log");
  f.havoc_stack_min = static_cast<int>(cfg.Int("fuzz.havoc_stack_min"));
  f.havoc_stack_max = static_cast<int>(cfg.Int("fuzz.havoc_stack_max"));
  f.max_input_bytes = static_cast<size_t>(cfg.UInt("fuzz.max_input_bytes"));
  f.exec_cost_us = cfg.Real("fuzz.exec_cost_us");
  f.byte_cost_ns = cfg.Real("fuzz.byte_cost_ns");
  f.Validate();
  return f;
}

RemoteConfig RemoteConfigFrom(const Config &cfg) {
  RemoteConfig r;
  r.endpoint = cfg.Str("llm.endpoint");
  r.model = cfg.Str("llm.model");
  r.api_key_env = cfg.Str("llm.api_key_env");
  r.max_inflight = static_cast<int>(cfg.Int("llm.max_inflight"));
  r.timeout_secs = static_cast<int>(cfg.Int("llm.timeout_secs"));
  return r;
}

int WorkerCount(int64_t configured) {
  if (configured > 0) return static_cast<int>(configured);
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::unique_ptr<LlmBackend> MakeBackend(const Config &cfg) {
  const std::string kind = cfg.Str("llm.backend");
  if (kind == "mock") {
    const std::string book = cfg.Str("llm.scriptbook");
    return std::make_unique<MockBackend>(book.empty() ? MockScriptbook() : MockScriptbook::Load(book));
  }
  if (kind == "remote") return std::make_unique<RemoteBackend>(RemoteConfigFrom(cfg));
  throw Error(ErrorCode::kConfig, "llm.backend must be mock or remote, got '" + kind + "'");
}


}  // namespace seedforge
