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

// Toy input formats: the registry of known format tags, a total sniffer per
// format, and writers that build well-formed instances.
//
//   mini-img  "MIN1" then chunks: tag[4 letters] len[u32 BE] payload[len]
//   mini-doc  "%MDF" then records: tag[4 A-Z] len[u16 BE] payload[len]
//   mini-xml  printable text with balanced <name attr="v">...</name> tags

#ifndef SEEDFORGE_FORMATS_H_
#define SEEDFORGE_FORMATS_H_

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seedforge/common.h"

namespace seedforge {

inline constexpr std::string_view kMiniImg = "mini-img";
inline constexpr std::string_view kMiniXml = "mini-xml";
inline constexpr std::string_view kMiniDoc = "mini-doc";

inline constexpr std::array<uint8_t, 4> kMiniImgMagic = {0x4D, 0x49, 0x4E, 0x31};
inline constexpr std::array<uint8_t, 4> kMiniDocMagic = {0x25, 0x4D, 0x44, 0x46};

struct SniffResult {
  bool compliant = false;
  std::string reason;  // empty when compliant

  static SniffResult Compliant() { return {true, {}}; }
  static SniffResult Malformed(std::string why) { return {false, std::move(why)}; }
  bool operator==(const SniffResult &) const = default;
};

struct FormatSniffer {
  std::string format;
  std::function<SniffResult(ByteView)> check;
};

const std::vector<FormatSniffer> &FormatRegistry();
bool IsRegisteredFormat(std::string_view format);

// Throws Error(kUnknownFormat) for an unregistered tag; otherwise total.
SniffResult Sniff(std::string_view format, ByteView bytes);

SniffResult SniffMiniImg(ByteView bytes);
SniffResult SniffMiniDoc(ByteView bytes);
SniffResult SniffMiniXml(ByteView bytes);

// A tagged block: a mini-img chunk or a mini-doc record.
struct Chunk {
  std::string tag;  // exactly 4 characters
  Bytes payload;
};

Bytes WriteMiniImg(const std::vector<Chunk> &chunks);
Bytes WriteMiniDoc(const std::vector<Chunk> &records);

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // emitted before children
  std::vector<XmlNode> children;
};

std::string WriteMiniXml(const XmlNode &root);

// Big-endian packing helpers for building payloads.
void AppendU16(Bytes &out, uint16_t v);
void AppendU32(Bytes &out, uint32_t v);
inline void Append(Bytes &out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace seedforge

#endif  // SEEDFORGE_FORMATS_H_
