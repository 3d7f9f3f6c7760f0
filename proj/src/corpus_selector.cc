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

#include "seedforge/corpus_selector.h"

#include <algorithm>
#include <set>

#include "seedforge/formats.h"

namespace seedforge {

namespace fs = std::filesystem;

SeedVerdict Judge(const SeedArtifact &a, std::string_view format, size_t max_bytes) {
  SeedVerdict v;
  v.executed_ok = a.outcome.status == SandboxStatus::kProduced;
  SniffResult s = Sniff(format, a.bytes);
  v.format_ok = s.compliant;
  v.format_reason = s.reason;
  v.size_ok = !a.bytes.empty() && a.bytes.size() <= max_bytes;
  return v;
}

RankKey MakeRankKey(const SeedArtifact &a) {
  const SeedVerdict v = a.verdict.value_or(SeedVerdict{});
  return {v.format_ok ? 0 : 1, v.executed_ok ? 0 : 1, a.bytes.size(), a.origin.candidate,
          a.origin.draw};
}

std::vector<SeedArtifact> Select(std::vector<SeedArtifact> artifacts, std::string_view format,
                                 size_t corpus_size, size_t max_bytes) {
  if (corpus_size < 1) throw Error(ErrorCode::kInvalidArgument, "corpus_size must be >= 1");
  std::vector<SeedArtifact> admitted;
  for (auto &a : artifacts) {
    a.verdict = Judge(a, format, max_bytes);
    if (a.verdict->admitted()) admitted.push_back(std::move(a));
  }
  if (admitted.empty())
    throw Error(ErrorCode::kEmptyCorpus, "none of " + std::to_string(artifacts.size()) +
                                             " generated seeds passed screening");

  // Earliest provenance first so that the surviving duplicate is the oldest.
  std::stable_sort(admitted.begin(), admitted.end(), [](const SeedArtifact &x, const SeedArtifact &y) {
    return std::tie(x.origin.candidate, x.origin.draw) < std::tie(y.origin.candidate, y.origin.draw);
  });
  std::set<Bytes> seen;
  std::vector<SeedArtifact> unique;
  for (auto &a : admitted)
    if (seen.insert(a.bytes).second) unique.push_back(std::move(a));

  std::stable_sort(unique.begin(), unique.end(), [](const SeedArtifact &x, const SeedArtifact &y) {
    return MakeRankKey(x) < MakeRankKey(y);
  });
  if (unique.size() > corpus_size) unique.resize(corpus_size);
  return unique;
}

nlohmann::json CorpusManifestJson(const std::vector<CorpusRecord> &records) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto &r : records) {
    seeds.push_back({
        {"rank", r.rank},
        {"file", r.file},
        {"size", r.size},
        {"origin",
         {{"bundle_id", r.bundle_id}, {"candidate", r.candidate}, {"draw", r.draw}}},
        {"sandbox_status", r.sandbox_status},
        {"verdicts",
         {{"executed_ok", r.verdict.executed_ok},
          {"format_ok", r.verdict.format_ok},
          {"size_ok", r.verdict.size_ok},
          {"format_reason", r.verdict.format_reason}}},
    });
  }
  return {{"seeds", seeds}};
}

std::vector<CorpusRecord> WriteCorpus(const std::vector<SeedArtifact> &corpus, const fs::path &dir) {
  fs::create_directories(dir);
  std::vector<CorpusRecord> records;
  for (size_t rank = 0; rank < corpus.size(); ++rank) {
    const SeedArtifact &a = corpus[rank];
    CorpusRecord r;
    r.rank = rank;
    r.file = "seed-" + std::to_string(rank) + ".bin";
    r.size = a.bytes.size();
    r.bundle_id = a.origin.bundle_id;
    r.candidate = a.origin.candidate;
    r.draw = a.origin.draw;
    r.sandbox_status = std::string(SandboxStatusName(a.outcome.status));
    r.verdict = a.verdict.value_or(SeedVerdict{});
    WriteFile(dir / r.file, a.bytes);
    records.push_back(std::move(r));
  }
  WriteFile(dir / "manifest.json", CorpusManifestJson(records).dump(2) + "\n");
  return records;
}

std::vector<CorpusRecord> LoadCorpusManifest(const fs::path &dir) {
  std::vector<CorpusRecord> out;
  try {
    auto j = nlohmann::json::parse(ReadTextFile(dir / "manifest.json"));
    for (const auto &js : j.at("seeds")) {
      CorpusRecord r;
      r.rank = js.at("rank").get<size_t>();
      r.file = js.at("file").get<std::string>();
      r.size = js.at("size").get<size_t>();
      const auto &o = js.at("origin");
      r.bundle_id = o.at("bundle_id").get<std::string>();
      r.candidate = o.at("candidate").get<uint32_t>();
      r.draw = o.at("draw").get<uint32_t>();
      r.sandbox_status = js.at("sandbox_status").get<std::string>();
      const auto &v = js.at("verdicts");
      r.verdict.executed_ok = v.at("executed_ok").get<bool>();
      r.verdict.format_ok = v.at("format_ok").get<bool>();
      r.verdict.size_ok = v.at("size_ok").get<bool>();
      r.verdict.format_reason = v.at("format_reason").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kIo, "corpus manifest in " + dir.string() + ": " + e.what());
  }
  return out;
}

std::vector<Bytes> LoadCorpusSeeds(const fs::path &dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "no corpus directory " + dir.string());
  std::vector<Bytes> seeds;
  if (fs::exists(dir / "manifest.json")) {
    for (const auto &r : LoadCorpusManifest(dir)) seeds.push_back(ReadBinaryFile(dir / r.file));
    return seeds;
  }
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto &f : files) seeds.push_back(ReadBinaryFile(f));
  return seeds;
}

}  // namespace seedforge
