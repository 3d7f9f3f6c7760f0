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
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "seedforge/common.h"
#include "seedforge/formats.h"
#include "seedforge/rng.h"
#include "./artifact_gen.h"
#include "./test_util.h"

namespace seedforge {
namespace {

namespace fs = std::filesystem;
using testing::ScopedTempDir;

SeedArtifact Artifact(Bytes bytes, uint32_t cand, uint32_t draw,
                      SandboxStatus status = SandboxStatus::kProduced) {
  SeedArtifact a;
  a.bytes = std::move(bytes);
  a.origin.candidate = cand;
  a.origin.draw = draw;
  a.origin.bundle_id = "bundle";
  a.outcome.status = status;
  if (status == SandboxStatus::kProduced) a.outcome.output_file = "x.bin";
  return a;
}

Bytes Doc(size_t payload) { return WriteMiniDoc({{"PAGE", Bytes(payload, 7)}}); }

TEST(JudgeTest, AdmittedIffAllThree) {
  EXPECT_TRUE(Judge(Artifact(Doc(3), 0, 0), "mini-doc", 100).admitted());
  SeedVerdict failed = Judge(Artifact(Doc(3), 0, 0, SandboxStatus::kExecFailed), "mini-doc", 100);
  EXPECT_FALSE(failed.executed_ok);
  EXPECT_FALSE(failed.admitted());
  SeedVerdict bad = Judge(Artifact(ToBytes("nope"), 0, 0), "mini-doc", 100);
  EXPECT_FALSE(bad.format_ok);
  EXPECT_EQ(bad.format_reason, "bad magic");
  SeedVerdict big = Judge(Artifact(Doc(200), 0, 0), "mini-doc", 100);
  EXPECT_FALSE(big.size_ok);
  EXPECT_TRUE(big.format_ok);
}

TEST(SelectTest, ThirtyArtifactsTwelveAdmissibleCorpusTen) {
  std::vector<SeedArtifact> in;
  for (uint32_t i = 0; i < 12; ++i) in.push_back(Artifact(Doc(30 - i), i / 3, i % 3));
  for (uint32_t i = 12; i < 18; ++i) in.push_back(Artifact(ToBytes("junk" + std::to_string(i)), i / 3, i % 3));
  for (uint32_t i = 18; i < 24; ++i) in.push_back(Artifact(Doc(500 + i), i / 3, i % 3));
  for (uint32_t i = 24; i < 30; ++i)
    in.push_back(Artifact(Doc(40 + i), i / 3, i % 3, SandboxStatus::kExecFailed));
  auto out = Select(in, "mini-doc", 10, 256);
  ASSERT_EQ(out.size(), 10u);
  for (size_t i = 0; i < out.size(); ++i) {
    ASSERT_TRUE(out[i].verdict.has_value());
    EXPECT_TRUE(out[i].verdict->admitted());
    if (i > 0) EXPECT_LE(out[i - 1].size(), out[i].size());
  }
  // The two largest admissible seeds are the ones cut.
  EXPECT_EQ(out.back().size(), Doc(28).size());
}

TEST(SelectTest, AllOversizedIsEmptyCorpus) {
  std::vector<SeedArtifact> in;
  for (uint32_t i = 0; i < 5; ++i) in.push_back(Artifact(Doc(300), i, 0));
  try {
    Select(in, "mini-doc", 10, 100);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(SelectTest, ByteIdenticalSeedsKeepEarliestProvenance) {
  std::vector<SeedArtifact> in = {Artifact(Doc(4), 3, 1), Artifact(Doc(4), 1, 2),
                                  Artifact(Doc(5), 0, 0)};
  auto out = Select(in, "mini-doc", 10, 100);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].bytes, Doc(4));
  EXPECT_EQ(out[0].origin.candidate, 1u);
  EXPECT_EQ(out[0].origin.draw, 2u);
}

TEST(SelectTest, SoundnessOverRandomSets) {
  Rng rng(404);
  constexpr size_t kCap = 64;
  for (int round = 0; round < 300; ++round) {
    auto in = testing::RandomArtifactSet(rng, kCap);
    size_t corpus_size = 1 + rng.Below(12);
    std::vector<SeedArtifact> out;
    try {
      out = Select(in, "mini-doc", corpus_size, kCap);
    } catch (const Error &e) {
      ASSERT_EQ(e.code(), ErrorCode::kEmptyCorpus);
    }
    EXPECT_EQ(testing::CheckSelection(in, out, corpus_size, kCap), "") << "round " << round;
    std::vector<SeedArtifact> shuffled = in;
    for (size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.Below(i)]);
    std::vector<SeedArtifact> again;
    try {
      again = Select(shuffled, "mini-doc", corpus_size, kCap);
    } catch (const Error &) {
    }
    ASSERT_EQ(again.size(), out.size());
    for (size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(again[i].bytes, out[i].bytes);
      EXPECT_EQ(MakeRankKey(again[i]), MakeRankKey(out[i]));
    }
  }
}

TEST(WriteCorpusTest, FilesManifestAndReload) {
  std::vector<SeedArtifact> in;
  for (uint32_t i = 0; i < 10; ++i) in.push_back(Artifact(Doc(i + 1), i, 0));
  auto corpus = Select(in, "mini-doc", 10, 1024);
  ScopedTempDir tmp;
  auto records = WriteCorpus(corpus, tmp.path() / "c");
  ASSERT_EQ(records.size(), 10u);
  size_t files = 0;
  for (const auto &e : fs::directory_iterator(tmp.path() / "c"))
    if (e.path().extension() == ".bin") ++files;
  EXPECT_EQ(files, 10u);
  EXPECT_EQ(LoadCorpusManifest(tmp.path() / "c"), records);
  auto seeds = LoadCorpusSeeds(tmp.path() / "c");
  ASSERT_EQ(seeds.size(), 10u);
  for (size_t i = 0; i < seeds.size(); ++i) EXPECT_EQ(seeds[i], corpus[i].bytes);

  WriteCorpus(corpus, tmp.path() / "d");
  for (const auto &e : fs::directory_iterator(tmp.path() / "c"))
    EXPECT_EQ(ReadBinaryFile(e.path()), ReadBinaryFile(tmp.path() / "d" / e.path().filename()));
}

TEST(LoadCorpusSeedsTest, PlainDirectoryInNameOrder) {
  ScopedTempDir tmp;
  WriteFile(tmp.path() / "b.bin", std::string_view("two"));
  WriteFile(tmp.path() / "a.bin", std::string_view("one"));
  auto seeds = LoadCorpusSeeds(tmp.path());
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(ToString(seeds[0]), "one");
  EXPECT_EQ(ToString(seeds[1]), "two");
}

}  // namespace
}  // namespace seedforge
