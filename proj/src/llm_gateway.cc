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

#include "seedforge/llm_gateway.h"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "seedforge/common.h"

namespace seedforge {

void CompletionRequest::Validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw Error(ErrorCode::kInvalidArgument, "temperature outside [0, 2]");
  if (max_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "max_tokens < 1");
}

uint64_t PromptFingerprint(std::string_view prompt) { return Fnv1a64(prompt); }

MockScriptbook MockScriptbook::FromJson(const nlohmann::json &j,
                                        const std::filesystem::path &base_dir) {
  MockScriptbook book;
  if (j.contains("default")) book.default_ = j.at("default").get<std::string>();
  for (const auto &je : j.value("entries", nlohmann::json::array())) {
    Entry e;
    e.name = je.value("name", "");
    if (je.contains("contains"))
      e.contains = je.at("contains").get<std::vector<std::string>>();
    if (je.contains("fingerprint")) {
      auto hex = je.at("fingerprint").get<std::string>();
      e.fingerprint = std::stoull(hex, nullptr, 16);
    }
    std::string bucket = je.value("bucket", "any");
    if (bucket == "greedy") e.bucket = TemperatureBucket::kGreedy;
    else if (bucket == "sampled") e.bucket = TemperatureBucket::kSampled;
    else if (bucket != "any")
      throw Error(ErrorCode::kConfig, "scriptbook entry '" + e.name + "': bad bucket " + bucket);
    for (const auto &r : je.at("responses")) {
      if (r.is_string()) {
        e.responses.push_back(r.get<std::string>());
        continue;
      }
      std::string body = ReadTextFile(base_dir / r.at("file").get<std::string>());
      if (r.contains("fence")) {
        body = "```" + r.at("fence").get<std::string>() + "\n" + body;
        if (body.back() != '\n') body += '\n';
        body += "```\n";
      }
      if (r.contains("preamble")) body = r.at("preamble").get<std::string>() + "\n\n" + body;
      e.responses.push_back(std::move(body));
    }
    if (e.responses.empty())
      throw Error(ErrorCode::kConfig, "scriptbook entry '" + e.name + "' has no responses");
    book.entries_.push_back(std::move(e));
  }
  return book;
}

MockScriptbook MockScriptbook::Load(const std::filesystem::path &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kConfig, "scriptbook " + path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

const std::string &MockScriptbook::Lookup(std::string_view prompt, TemperatureBucket bucket,
                                          uint32_t draw_index,
                                          std::optional<uint64_t> seed) const {
  const uint64_t fp = PromptFingerprint(prompt);
  auto bucket_ok = [&](const Entry &e) { return !e.bucket || *e.bucket == bucket; };
  const Entry *hit = nullptr;
  for (const auto &e : entries_)
    if (e.fingerprint && *e.fingerprint == fp && bucket_ok(e)) {
      hit = &e;
      break;
    }
  if (hit == nullptr) {
    for (const auto &e : entries_) {
      if (e.fingerprint || !bucket_ok(e)) continue;
      bool all = std::all_of(e.contains.begin(), e.contains.end(), [&](const std::string &s) {
        return prompt.find(s) != std::string_view::npos;
      });
      if (all) {
        hit = &e;
        break;
      }
    }
  }
  if (hit == nullptr) return default_;
  const size_t n = hit->responses.size();
  if (bucket == TemperatureBucket::kGreedy) return hit->responses.front();
  uint64_t rotation = seed ? Mix64(*seed ^ fp) % n : 0;
  return hit->responses[(draw_index + rotation) % n];
}

CompletionResponse MockBackend::Complete(const CompletionRequest &req) {
  req.Validate();
  CompletionResponse resp;
  resp.text = book_.Lookup(req.prompt, BucketOf(req.temperature), req.draw_index, req.seed);
  resp.backend_id = id();
  return resp;
}

namespace {

// Splits "https://host:443/v1" into origin and path.
std::pair<std::string, std::string> SplitEndpoint(const std::string &endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::kConfig, "llm.endpoint needs a scheme: " + endpoint);
  auto path_begin = endpoint.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {endpoint, ""};
  std::string path = endpoint.substr(path_begin);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {endpoint.substr(0, path_begin), path};
}

std::unique_ptr<httplib::Client> MakeClient(const std::string &origin, int timeout_secs) {
  auto cli = std::make_unique<httplib::Client>(origin);
  cli->set_connection_timeout(timeout_secs, 0);
  cli->set_read_timeout(timeout_secs, 0);
  cli->set_write_timeout(timeout_secs, 0);
  return cli;
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteConfig cfg)
    : cfg_(std::move(cfg)), inflight_(std::clamp(cfg_.max_inflight, 1, 256)) {
  std::tie(origin_, base_path_) = SplitEndpoint(cfg_.endpoint);
}

std::string RemoteBackend::ApiKey() const {
  const char *key = std::getenv(cfg_.api_key_env.c_str());
  if (key == nullptr || *key == '\0')
    throw Error(ErrorCode::kAuth, "environment variable " + cfg_.api_key_env + " is not set");
  return key;
}

CompletionResponse RemoteBackend::Complete(const CompletionRequest &req) {
  req.Validate();
  const std::string key = ApiKey();

  nlohmann::json body = {
      {"model", cfg_.model},
      {"temperature", req.temperature},
      {"max_tokens", req.max_tokens},
      {"messages", {{{"role", "user"}, {"content", req.prompt}}}},
  };
  if (req.seed) body["seed"] = *req.seed;
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + key}};

  inflight_.acquire();
  struct Release {
    std::counting_semaphore<256> &s;
    ~Release() { s.release(); }
  } release{inflight_};

  auto client = MakeClient(origin_, cfg_.timeout_secs);
  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, cfg_.max_attempts); ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(cfg_.initial_backoff * (1 << (attempt - 1)));
    auto res = client->Post(base_path_ + "/chat/completions", headers, payload,
                            "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw Error(ErrorCode::kAuth, "server rejected credentials from " + cfg_.api_key_env +
                                        " (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::kTransport, "HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      auto j = nlohmann::json::parse(res->body);
      const auto &choice = j.at("choices").at(0);
      CompletionResponse out;
      out.text = choice.at("message").at("content").get<std::string>();
      out.truncated = choice.value("finish_reason", "") == "length";
      out.backend_id = id();
      out.latency = std::chrono::steady_clock::now() - start;
      return out;
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kTransport, std::string("malformed completion body: ") + e.what());
    }
  }
  throw Error(ErrorCode::kTransport, "gave up after " + std::to_string(cfg_.max_attempts) +
                                         " attempts: " + last_error);
}

HealthReport RemoteBackend::Probe() {
  HealthReport report;
  report.backend_id = id();
  std::string key;
  try {
    key = ApiKey();
  } catch (const Error &e) {
    report.cause = e.what();
    return report;
  }
  auto client = MakeClient(origin_, std::min(cfg_.timeout_secs, 10));
  auto res = client->Get(base_path_ + "/models/" + cfg_.model,
                         httplib::Headers{{"Authorization", "Bearer " + key}});
  if (!res) {
    report.cause = "unreachable: " + httplib::to_string(res.error());
    return report;
  }
  if (res->status != 200) {
    report.cause = "HTTP " + std::to_string(res->status);
    return report;
  }
  try {
    report.model_id = nlohmann::json::parse(res->body).at("id").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    report.cause = std::string("malformed model record: ") + e.what();
    return report;
  }
  report.healthy = true;
  return report;
}

}  // namespace seedforge
