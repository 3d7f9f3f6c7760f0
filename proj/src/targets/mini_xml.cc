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

// mini-xml-parser: streaming tag parser. Open elements live in a 16-slot
// inline stack; deeper nesting spills into an 8-slot overflow buffer whose
// bound is never checked, so nesting past 24 writes out of bounds.

#include <array>
#include <string_view>

#include "seedforge/formats.h"
#include "seedforge/target_zoo.h"

namespace seedforge {
namespace {

enum Edge : uint32_t {
  kEntry,
  kReject,
  kText,
  kEntity,
  kOpen,
  kAttr,
  kSelfClose,
  kClose,
  kSpillSite,
  kSpillPop,
  kEnd,
  kEdgeCount,
};

constexpr size_t kInlineDepth = 16;
constexpr size_t kSpillDepth = 8;

bool IsNameStart(uint8_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool IsNameChar(uint8_t c) {
  return IsNameStart(c) || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == ':';
}
bool IsSpace(uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool IsPrintable(uint8_t c) {
  return (c >= 0x20 && c <= 0x7e) || c == '\t' || c == '\n' || c == '\r';
}

class MiniXmlTarget : public TargetProgram {
 public:
  MiniXmlTarget() : TargetProgram("mini-xml-parser", std::string(kMiniXml), kEdgeCount) {
    bug_sites_.push_back({"XML001",
                          "element nesting deeper than the inline stack spills "
                          "into an unchecked 8-slot overflow buffer",
                          kSpillSite, Witness()});
    minimal_ = ToBytes("<a/>");
    provided_ = {
        ToBytes("<doc><title>hello</title><body id=\"b1\">text &amp; more</body></doc>"),
        ToBytes("<list><item n=\"1\"/><item n=\"2\"/><item n=\"3\"/></list>"),
        ToBytes("<a><b><c><d>deep</d></c></b></a>"),
        ToBytes("<config version=\"2\"><key name=\"x\">1</key></config>"),
    };
  }

  static Bytes Witness() {
    std::string s = "<r k=\"v\">a&amp;b<e/>";
    for (int i = 0; i < 25; ++i) s += "<n>";
    for (int i = 0; i < 25; ++i) s += "</n>";
    s += "</r>";
    return ToBytes(s);
  }

 protected:
  void Probe(ByteView in, TraceRecorder &rec) const override {
    rec.Hit(kEntry);
    auto reject = [&rec] {
      rec.Hit(kReject);
      rec.Reject();
    };
    std::array<std::string_view, kInlineDepth> inline_stack;
    std::array<std::string_view, kInlineDepth + kSpillDepth> storage;
    size_t depth = 0;
    bool saw_element = false;
    const size_t n = in.size();
    size_t pos = 0;
    auto name_at = [&](size_t b, size_t e) {
      return std::string_view(reinterpret_cast<const char *>(in.data()) + b, e - b);
    };

    while (pos < n) {
      uint8_t c = in[pos];
      if (!IsPrintable(c)) return reject();
      if (c != '<') {
        rec.Hit(c == '&' ? kEntity : kText);
        ++pos;
        continue;
      }
      ++pos;
      bool closing = pos < n && in[pos] == '/';
      if (closing) ++pos;
      size_t nb = pos;
      if (pos >= n || !IsNameStart(in[pos])) return reject();
      while (pos < n && IsNameChar(in[pos])) ++pos;
      std::string_view name = name_at(nb, pos);

      if (closing) {
        while (pos < n && IsSpace(in[pos])) ++pos;
        if (pos >= n || in[pos] != '>') return reject();
        ++pos;
        if (depth == 0) return reject();
        std::string_view top;
        if (depth > kInlineDepth) {
          rec.Hit(kSpillPop);
          top = storage[(depth - 1) % storage.size()];
        } else {
          top = inline_stack[depth - 1];
        }
        if (top != name) return reject();
        --depth;
        rec.Hit(kClose);
        continue;
      }

      bool self_closing = false;
      while (true) {
        size_t ws = pos;
        while (pos < n && IsSpace(in[pos])) ++pos;
        if (pos >= n) return reject();
        if (in[pos] == '>') {
          ++pos;
          break;
        }
        if (in[pos] == '/') {
          if (pos + 1 >= n || in[pos + 1] != '>') return reject();
          pos += 2;
          self_closing = true;
          break;
        }
        if (ws == pos || !IsNameStart(in[pos])) return reject();
        while (pos < n && IsNameChar(in[pos])) ++pos;
        if (pos + 1 >= n || in[pos] != '=' || in[pos + 1] != '"') return reject();
        pos += 2;
        while (pos < n && in[pos] != '"' && in[pos] != '<') ++pos;
        if (pos >= n || in[pos] != '"') return reject();
        ++pos;
        rec.Hit(kAttr);
      }
      rec.Hit(kOpen);
      saw_element = true;
      if (self_closing) {
        rec.Hit(kSelfClose);
        continue;
      }
      if (depth < kInlineDepth) {
        inline_stack[depth] = name;
      } else {
        // Spill path; the overflow buffer index is not bounds-checked.
        rec.Reach(0);
        if (depth >= kInlineDepth + kSpillDepth) rec.Trigger(0);
        storage[depth % storage.size()] = name;
      }
      ++depth;
    }
    if (depth != 0 || !saw_element) return reject();
    rec.Hit(kEnd);
  }
};

}  // namespace

std::unique_ptr<TargetProgram> MakeMiniXmlTarget() {
  return std::make_unique<MiniXmlTarget>();
}

}  // namespace seedforge
