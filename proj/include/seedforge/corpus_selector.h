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

// Screens generated seeds on execution success, format compliance and size,
// orders the survivors and writes the initial corpus directory.

#ifndef SEEDFORGE_CORPUS_SELECTOR_H_
#define SEEDFORGE_CORPUS_SELECTOR_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "seedforge/common.h"
#include "seedforge/seed_synthesis.h"

namespace seedforge {

SeedVerdict Judge(const SeedArtifact &artifact, std::string_view format, size_t max_bytes);

// Lexicographic ordering key; smaller sorts first.
using RankKey = std::tuple<int, int, size_t, uint32_t, uint32_t>;
RankKey MakeRankKey(const SeedArtifact &artifact);

// Fills each artifact's verdict, keeps admitted ones, drops byte duplicates
// (earliest provenance wins), sorts by rank key and truncates to
// `corpus_size`. Throws Error(kEmptyCorpus) when nothing is admitted.
std::vector<SeedArtifact> Select(std::vector<SeedArtifact> artifacts, std::string_view format,
                                 size_t corpus_size, size_t max_bytes);

struct CorpusRecord {
  size_t rank = 0;
  std::string file;
  size_t size = 0;
  std::string bundle_id;
  uint32_t candidate = 0;
  uint32_t draw = 0;
  std::string sandbox_status;
  SeedVerdict verdict;

  bool operator==(const CorpusRecord &) const = default;
};

// Writes dir/seed-<rank>.bin and dir/manifest.json; returns the records.
std::vector<CorpusRecord> WriteCorpus(const std::vector<SeedArtifact> &corpus,
                                      const std::filesystem::path &dir);

nlohmann::json CorpusManifestJson(const std::vector<CorpusRecord> &records);
std::vector<CorpusRecord> LoadCorpusManifest(const std::filesystem::path &dir);

// Seeds of a corpus directory: the manifest order when manifest.json exists,
// otherwise every regular file in name order.
std::vector<Bytes> LoadCorpusSeeds(const std::filesystem::path &dir);

}  // namespace seedforge

#endif  // SEEDFORGE_CORPUS_SELECTOR_H_
