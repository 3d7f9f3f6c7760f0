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

#include "seedforge/formats.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "seedforge/common.h"
#include "seedforge/rng.h"

namespace seedforge {
namespace {

TEST(SniffTest, MiniImgMinimal) {
  Bytes b = {0x4D, 0x49, 0x4E, 0x31, 'H', 'E', 'A', 'D', 0, 0, 0, 0};
  EXPECT_EQ(SniffMiniImg(b), SniffResult::Compliant());
  EXPECT_EQ(WriteMiniImg({{"HEAD", {}}}), b);
}

TEST(SniffTest, EmptyIsMalformedForEveryFormat) {
  for (const auto &f : FormatRegistry())
    EXPECT_EQ(Sniff(f.format, Bytes{}), SniffResult::Malformed("empty")) << f.format;
}

TEST(SniffTest, TruncatedChunk) {
  Bytes b = WriteMiniImg({{"HEAD", ToBytes("abcd")}});
  b[11] = 9;  // declared length now exceeds the remaining 4 bytes
  EXPECT_EQ(SniffMiniImg(b), SniffResult::Malformed("truncated chunk"));
}

TEST(SniffTest, BadMagicAndNoChunks) {
  EXPECT_EQ(SniffMiniImg(ToBytes("MIN2HEAD\0\0\0\0")).reason, "bad magic");
  EXPECT_EQ(SniffMiniImg(WriteMiniImg({})).reason, "no chunks");
  EXPECT_EQ(SniffMiniDoc(WriteMiniDoc({})).reason, "no records");
  Bytes doc = WriteMiniDoc({{"PAGE", ToBytes("xy")}});
  doc.pop_back();
  EXPECT_EQ(SniffMiniDoc(doc).reason, "truncated record");
}

TEST(SniffTest, MiniXml) {
  EXPECT_TRUE(SniffMiniXml(ToBytes("<a><b x=\"1\"/>t</a>")).compliant);
  EXPECT_EQ(SniffMiniXml(ToBytes("<a><b></a>")).compliant, false);
  EXPECT_EQ(SniffMiniXml(ToBytes("<a>")).reason, "unbalanced tags");
  EXPECT_EQ(SniffMiniXml(ToBytes("just text")).reason, "no elements");
  EXPECT_EQ(SniffMiniXml(Bytes{'<', 'a', '/', '>', 0x01}).reason, "non-printable byte");
}

TEST(SniffTest, UnknownFormat) {
  try {
    Sniff("bogus", Bytes{1});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFormat);
  }
  EXPECT_FALSE(IsRegisteredFormat("bogus"));
  EXPECT_TRUE(IsRegisteredFormat(kMiniDoc));
}

TEST(SniffTest, TotalAndPureOnRandomBytes) {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    Bytes b(rng.Below(40));
    for (auto &c : b) c = static_cast<uint8_t>(rng.Below(256));
    if (rng.Below(3) == 0 && b.size() >= 4) std::copy(kMiniImgMagic.begin(), kMiniImgMagic.end(), b.begin());
    if (rng.Below(3) == 0 && b.size() >= 4) std::copy(kMiniDocMagic.begin(), kMiniDocMagic.end(), b.begin());
    for (const auto &f : FormatRegistry()) {
      SniffResult r1 = Sniff(f.format, b);
      EXPECT_EQ(r1, Sniff(f.format, b));
      EXPECT_EQ(r1.compliant, r1.reason.empty());
    }
  }
}

std::string RandomName(Rng &rng) {
  static constexpr std::string_view kStart = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
  static constexpr std::string_view kRest = "abcxyz019-.:_";
  std::string s(1, kStart[rng.Below(kStart.size())]);
  for (uint64_t i = rng.Below(6); i > 0; --i) s += kRest[rng.Below(kRest.size())];
  return s;
}

std::string RandomText(Rng &rng) {
  static constexpr std::string_view kChars = "abc XYZ 0123 \t\n!?;/";
  std::string s;
  for (uint64_t i = rng.Below(8); i > 0; --i) s += kChars[rng.Below(kChars.size())];
  return s;
}

XmlNode RandomNode(Rng &rng, int depth) {
  XmlNode n;
  n.name = RandomName(rng);
  for (uint64_t i = rng.Below(3); i > 0; --i) n.attributes.push_back({RandomName(rng), RandomText(rng)});
  n.text = RandomText(rng);
  if (depth < 6)
    for (uint64_t i = rng.Below(3); i > 0; --i) n.children.push_back(RandomNode(rng, depth + 1));
  return n;
}

std::vector<Chunk> RandomChunks(Rng &rng, bool upper_only) {
  std::vector<Chunk> out(1 + rng.Below(6));
  for (auto &c : out) {
    for (int i = 0; i < 4; ++i) {
      char base = upper_only || rng.Coin() ? 'A' : 'a';
      c.tag += static_cast<char>(base + rng.Below(26));
    }
    c.payload.resize(rng.Below(64));
    for (auto &x : c.payload) x = static_cast<uint8_t>(rng.Below(256));
  }
  return out;
}

TEST(WriterSnifferDualityTest, RandomWellFormedInstancesAreCompliant) {
  Rng rng(2026);
  for (int i = 0; i < 2000; ++i) {
    Bytes img = WriteMiniImg(RandomChunks(rng, false));
    EXPECT_TRUE(SniffMiniImg(img).compliant) << SniffMiniImg(img).reason;
    Bytes doc = WriteMiniDoc(RandomChunks(rng, true));
    EXPECT_TRUE(SniffMiniDoc(doc).compliant) << SniffMiniDoc(doc).reason;
    std::string xml = WriteMiniXml(RandomNode(rng, 0));
    EXPECT_TRUE(SniffMiniXml(ToBytes(xml)).compliant) << xml;
  }
}

}  // namespace
}  // namespace seedforge
