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

#include "seedforge/prompt_refinery.h"

#include <algorithm>
#include <cctype>
#include <future>
#include <set>

namespace seedforge {

std::string NormalizeForDedup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string DedupKey(std::string_view text) { return Hex64(Fnv1a64(NormalizeForDedup(text))); }

std::string BuildRefinementPrompt(const UserInputBundle &b) {
  std::string out;
  auto section = [&out](std::string_view heading, std::string_view body) {
    out += "## ";
    out += heading;
    out += "\n";
    out += body;
    if (!body.empty() && body.back() != '\n') out += '\n';
    out += '\n';
  };
  if (!b.project_intro.empty()) section("Project introduction", b.project_intro);
  if (!b.driver_source.empty()) section("Driver source code", b.driver_source);
  std::string cve = "ID: " + b.cve.id + "\nType: " + std::string(VulnClassName(b.cve.vuln_class)) +
                    "\n";
  if (!b.cve.description.empty()) cve += "Description: " + b.cve.description;
  section("CVE details", cve);
  if (!b.patch.empty()) section("CVE corresponding patch", b.patch);
  out += kSummarizeInstruction;
  return out;
}

std::vector<CandidatePrompt> Refine(const UserInputBundle &bundle, LlmBackend &gateway,
                                    const RefineOptions &opt) {
  if (opt.candidates < 1) throw Error(ErrorCode::kInvalidArgument, "candidates must be >= 1");
  if (opt.temperature <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, "diversity temperature must be > 0");
  const std::string prompt = BuildRefinementPrompt(bundle);
  const std::string bundle_id = bundle.Id();
  const int want = opt.candidates;
  const int budget = std::max(1, opt.retry_factor) * want;

  std::vector<CandidatePrompt> out;
  std::set<std::string> keys;
  auto request = [&](uint32_t draw) {
    CompletionRequest req;
    req.prompt = prompt;
    req.temperature = draw == 0 ? 0.0 : opt.temperature;
    req.max_tokens = opt.max_tokens;
    req.seed = opt.seed;
    req.draw_index = draw;
    return req;
  };
  auto admit = [&](uint32_t draw, const CompletionRequest &req, std::string text) {
    if (NormalizeForDedup(text).empty()) return;
    std::string key = DedupKey(text);
    if (!keys.insert(key).second) return;
    out.push_back({std::move(text), draw, req.temperature, bundle_id, std::move(key)});
  };

  {
    auto req = request(0);
    admit(0, req, gateway.Complete(req).text);
  }
  int used = 1;
  // Candidate 0 must be the greedy draw; an empty greedy reply leaves no
  // candidate to anchor the list.
  if (out.empty()) throw DistinctnessExhausted({}, want, used);

  while (static_cast<int>(out.size()) < want && used < budget) {
    const int batch = std::min(want - static_cast<int>(out.size()), budget - used);
    std::vector<CompletionRequest> reqs;
    for (int i = 0; i < batch; ++i) reqs.push_back(request(static_cast<uint32_t>(used + i)));
    std::vector<std::string> texts(reqs.size());
    if (opt.parallelism <= 1 || batch == 1) {
      for (size_t i = 0; i < reqs.size(); ++i) texts[i] = gateway.Complete(reqs[i]).text;
    } else {
      for (size_t lo = 0; lo < reqs.size(); lo += opt.parallelism) {
        size_t hi = std::min(reqs.size(), lo + static_cast<size_t>(opt.parallelism));
        std::vector<std::future<std::string>> futs;
        for (size_t i = lo; i < hi; ++i)
          futs.push_back(std::async(std::launch::async,
                                    [&gateway, &r = reqs[i]] { return gateway.Complete(r).text; }));
        for (size_t i = lo; i < hi; ++i) texts[i] = futs[i - lo].get();
      }
    }
    // Ordered by draw index so the result is schedule-independent.
    for (size_t i = 0; i < reqs.size(); ++i) admit(reqs[i].draw_index, reqs[i], std::move(texts[i]));
    used += batch;
  }
  if (static_cast<int>(out.size()) < want) throw DistinctnessExhausted(std::move(out), want, used);
  return out;
}

void WriteCandidates(const std::vector<CandidatePrompt> &cands, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < cands.size(); ++i)
    WriteFile(dir / ("cand-" + std::to_string(i) + ".txt"), cands[i].text);
}

}  // namespace seedforge
