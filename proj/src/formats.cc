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

#include <algorithm>
#include <cstring>

namespace seedforge {
namespace {

bool IsLetter(uint8_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool IsXmlPrintable(uint8_t c) {
  return (c >= 0x20 && c <= 0x7e) || c == '\t' || c == '\n' || c == '\r';
}

bool IsNameStart(uint8_t c) { return IsLetter(c) || c == '_'; }
bool IsNameChar(uint8_t c) {
  return IsNameStart(c) || (c >= '0' && c <= '9') || c == '-' || c == '.' ||
         c == ':';
}
bool IsSpace(uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

template <size_t N>
bool HasMagic(ByteView bytes, const std::array<uint8_t, N> &magic) {
  return bytes.size() >= N && std::equal(magic.begin(), magic.end(), bytes.begin());
}

}  // namespace

SniffResult SniffMiniImg(ByteView bytes) {
  if (bytes.empty()) return SniffResult::Malformed("empty");
  if (!HasMagic(bytes, kMiniImgMagic)) return SniffResult::Malformed("bad magic");
  size_t pos = 4;
  size_t chunks = 0;
  while (pos < bytes.size()) {
    size_t rem = bytes.size() - pos;
    if (rem < 8) return SniffResult::Malformed("truncated chunk header");
    for (size_t i = 0; i < 4; ++i)
      if (!IsLetter(bytes[pos + i])) return SniffResult::Malformed("bad chunk tag");
    uint32_t len = uint32_t{bytes[pos + 4]} << 24 | uint32_t{bytes[pos + 5]} << 16 |
                   uint32_t{bytes[pos + 6]} << 8 | uint32_t{bytes[pos + 7]};
    if (len > rem - 8) return SniffResult::Malformed("truncated chunk");
    pos += 8 + len;
    ++chunks;
  }
  if (chunks == 0) return SniffResult::Malformed("no chunks");
  return SniffResult::Compliant();
}

SniffResult SniffMiniDoc(ByteView bytes) {
  if (bytes.empty()) return SniffResult::Malformed("empty");
  if (!HasMagic(bytes, kMiniDocMagic)) return SniffResult::Malformed("bad magic");
  size_t pos = 4;
  size_t records = 0;
  while (pos < bytes.size()) {
    size_t rem = bytes.size() - pos;
    if (rem < 6) return SniffResult::Malformed("truncated record header");
    for (size_t i = 0; i < 4; ++i) {
      uint8_t c = bytes[pos + i];
      if (c < 'A' || c > 'Z') return SniffResult::Malformed("bad record tag");
    }
    size_t len = size_t{bytes[pos + 4]} << 8 | bytes[pos + 5];
    if (len > rem - 6) return SniffResult::Malformed("truncated record");
    pos += 6 + len;
    ++records;
  }
  if (records == 0) return SniffResult::Malformed("no records");
  return SniffResult::Compliant();
}

SniffResult SniffMiniXml(ByteView bytes) {
  if (bytes.empty()) return SniffResult::Malformed("empty");
  for (uint8_t c : bytes)
    if (!IsXmlPrintable(c)) return SniffResult::Malformed("non-printable byte");

  std::vector<std::string_view> stack;
  size_t elements = 0;
  size_t pos = 0;
  const size_t n = bytes.size();
  auto view = [&](size_t b, size_t e) {
    return std::string_view(reinterpret_cast<const char *>(bytes.data()) + b, e - b);
  };
  while (pos < n) {
    if (bytes[pos] != '<') {
      ++pos;
      continue;
    }
    ++pos;
    bool closing = pos < n && bytes[pos] == '/';
    if (closing) ++pos;
    size_t name_begin = pos;
    if (pos >= n || !IsNameStart(bytes[pos])) return SniffResult::Malformed("malformed tag");
    while (pos < n && IsNameChar(bytes[pos])) ++pos;
    std::string_view name = view(name_begin, pos);
    if (closing) {
      while (pos < n && IsSpace(bytes[pos])) ++pos;
      if (pos >= n || bytes[pos] != '>') return SniffResult::Malformed("malformed tag");
      ++pos;
      if (stack.empty() || stack.back() != name)
        return SniffResult::Malformed("mismatched close tag");
      stack.pop_back();
      continue;
    }
    // attributes
    bool self_closing = false;
    while (true) {
      size_t ws = pos;
      while (pos < n && IsSpace(bytes[pos])) ++pos;
      if (pos >= n) return SniffResult::Malformed("malformed tag");
      if (bytes[pos] == '>') {
        ++pos;
        break;
      }
      if (bytes[pos] == '/') {
        if (pos + 1 >= n || bytes[pos + 1] != '>') return SniffResult::Malformed("malformed tag");
        pos += 2;
        self_closing = true;
        break;
      }
      if (ws == pos || !IsNameStart(bytes[pos])) return SniffResult::Malformed("malformed tag");
      while (pos < n && IsNameChar(bytes[pos])) ++pos;
      if (pos >= n || bytes[pos] != '=') return SniffResult::Malformed("malformed attribute");
      ++pos;
      if (pos >= n || bytes[pos] != '"') return SniffResult::Malformed("malformed attribute");
      ++pos;
      while (pos < n && bytes[pos] != '"' && bytes[pos] != '<') ++pos;
      if (pos >= n || bytes[pos] != '"') return SniffResult::Malformed("malformed attribute");
      ++pos;
    }
    ++elements;
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return SniffResult::Malformed("unbalanced tags");
  if (elements == 0) return SniffResult::Malformed("no elements");
  return SniffResult::Compliant();
}

const std::vector<FormatSniffer> &FormatRegistry() {
  static const std::vector<FormatSniffer> kRegistry = {
      {std::string(kMiniImg), SniffMiniImg},
      {std::string(kMiniXml), SniffMiniXml},
      {std::string(kMiniDoc), SniffMiniDoc},
  };
  return kRegistry;
}

bool IsRegisteredFormat(std::string_view format) {
  const auto &reg = FormatRegistry();
  return std::any_of(reg.begin(), reg.end(),
                     [&](const FormatSniffer &s) { return s.format == format; });
}

SniffResult Sniff(std::string_view format, ByteView bytes) {
  for (const auto &s : FormatRegistry())
    if (s.format == format) return s.check(bytes);
  throw Error(ErrorCode::kUnknownFormat, "format '" + std::string(format) + "'");
}

void AppendU16(Bytes &out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void AppendU32(Bytes &out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

Bytes WriteMiniImg(const std::vector<Chunk> &chunks) {
  Bytes out(kMiniImgMagic.begin(), kMiniImgMagic.end());
  for (const auto &c : chunks) {
    if (c.tag.size() != 4)
      throw Error(ErrorCode::kInvalidArgument, "chunk tag must be 4 bytes");
    Append(out, c.tag);
    AppendU32(out, static_cast<uint32_t>(c.payload.size()));
    out.insert(out.end(), c.payload.begin(), c.payload.end());
  }
  return out;
}

Bytes WriteMiniDoc(const std::vector<Chunk> &records) {
  Bytes out(kMiniDocMagic.begin(), kMiniDocMagic.end());
  for (const auto &r : records) {
    if (r.tag.size() != 4)
      throw Error(ErrorCode::kInvalidArgument, "record tag must be 4 bytes");
    if (r.payload.size() > 0xffff)
      throw Error(ErrorCode::kInvalidArgument, "record payload over 65535 bytes");
    Append(out, r.tag);
    AppendU16(out, static_cast<uint16_t>(r.payload.size()));
    out.insert(out.end(), r.payload.begin(), r.payload.end());
  }
  return out;
}

namespace {
void EmitXml(const XmlNode &node, std::string &out) {
  out += '<';
  out += node.name;
  for (const auto &[k, v] : node.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += v;
    out += '"';
  }
  if (node.text.empty() && node.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  out += node.text;
  for (const auto &child : node.children) EmitXml(child, out);
  out += "</";
  out += node.name;
  out += '>';
}
}  // namespace

std::string WriteMiniXml(const XmlNode &root) {
  std::string out;
  EmitXml(root, out);
  return out;
}

}  // namespace seedforge
