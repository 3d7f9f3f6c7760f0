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

// mini-img-parser: chunked image decoder. The ICCP handler trusts the
// declared chunk length and copies that many bytes, over-reading when the
// length exceeds what is left in the input.

#include <algorithm>
#include <cstring>

#include "seedforge/formats.h"
#include "seedforge/target_zoo.h"

namespace seedforge {
namespace {

enum Edge : uint32_t {
  kEntry,
  kReject,
  kMagicOk,
  kChunk,
  kEof,
  kHead,
  kDepth1,
  kDepth8,
  kDepth16,
  kColorGray,
  kColorRgb,
  kColorPalette,
  kPalt,
  kPaltEntry,
  kData,
  kFilterNone,
  kFilterSub,
  kFilterUp,
  kText,
  kTextKeyword,
  kTextValue,
  kIccp,
  kIccpNoHead,
  kIccpSite,
  kIccpCopy,
  kUnknown,
  kEdgeCount,
};

bool TagIs(ByteView tag, const char (&name)[5]) {
  return std::memcmp(tag.data(), name, 4) == 0;
}

class MiniImgTarget : public TargetProgram {
 public:
  MiniImgTarget() : TargetProgram("mini-img-parser", std::string(kMiniImg), kEdgeCount) {
    bug_sites_.push_back({"IMG001",
                          "ICCP chunk copied using its declared length without "
                          "checking it against the bytes remaining",
                          kIccpSite, Witness()});
    minimal_ = WriteMiniImg({{"HEAD", Head(1, 1, 8, 0)}});
    provided_ = {
        WriteMiniImg({{"HEAD", Head(4, 2, 8, 0)}, {"DATA", {0, 1, 2, 3, 4, 5, 6, 7, 8}}}),
        WriteMiniImg({{"HEAD", Head(2, 2, 8, 3)},
                      {"PALT", {255, 0, 0, 0, 255, 0}},
                      {"DATA", {1, 0, 1, 1, 0}}}),
        WriteMiniImg({{"HEAD", Head(1, 1, 16, 2)},
                      {"TEXT", ToBytes(std::string("Title\0sample", 12))},
                      {"DATA", {2, 0, 0, 0, 0, 0, 0}}}),
        WriteMiniImg({{"HEAD", Head(8, 1, 1, 0)}, {"DATA", {0, 0xaa}}}),
    };
  }

  static Bytes Head(uint16_t w, uint16_t h, uint8_t depth, uint8_t color) {
    Bytes p;
    AppendU16(p, w);
    AppendU16(p, h);
    p.push_back(depth);
    p.push_back(color);
    return p;
  }

  // Exercises every probe on its way to the fault.
  static Bytes Witness() {
    Bytes out = WriteMiniImg({
        {"ICCP", {0, 1, 2}},
        {"HEAD", Head(2, 2, 1, 0)},
        {"HEAD", Head(2, 2, 16, 2)},
        {"HEAD", Head(2, 2, 8, 3)},
        {"PALT", {1, 2, 3, 4, 5, 6}},
        {"DATA", {0, 9}},
        {"DATA", {1, 9}},
        {"DATA", {2, 9}},
        {"TEXT", ToBytes(std::string("Author\0me", 9))},
        {"abcd", {}},
    });
    // ICCP chunk declaring 64 payload bytes with only 4 present.
    Append(out, "ICCP");
    AppendU32(out, 64);
    Append(out, "prof");
    return out;
  }

 protected:
  void Probe(ByteView in, TraceRecorder &rec) const override {
    rec.Hit(kEntry);
    auto reject = [&rec] {
      rec.Hit(kReject);
      rec.Reject();
    };
    if (in.size() < 4 || !std::equal(kMiniImgMagic.begin(), kMiniImgMagic.end(), in.begin()))
      return reject();
    rec.Hit(kMagicOk);

    bool have_head = false;
    size_t pos = 4;
    while (pos < in.size()) {
      rec.Hit(kChunk);
      if (in.size() - pos < 8) return reject();
      ByteView tag = in.subspan(pos, 4);
      uint32_t len = uint32_t{in[pos + 4]} << 24 | uint32_t{in[pos + 5]} << 16 |
                     uint32_t{in[pos + 6]} << 8 | uint32_t{in[pos + 7]};
      size_t avail = in.size() - pos - 8;
      pos += 8;

      if (TagIs(tag, "ICCP") && have_head) {
        rec.Hit(kIccp);
        // Bug site: no `len > avail` check on this path.
        rec.Reach(0);
        if (len > avail) rec.Trigger(0);
        if (len > 0) rec.Hit(kIccpCopy);
        pos += std::min<size_t>(len, avail);
        continue;
      }

      if (len > avail) return reject();
      ByteView payload = in.subspan(pos, len);
      pos += len;

      if (TagIs(tag, "HEAD")) {
        rec.Hit(kHead);
        if (payload.size() < 6) return reject();
        uint16_t w = uint16_t(payload[0] << 8 | payload[1]);
        uint16_t h = uint16_t(payload[2] << 8 | payload[3]);
        if (w == 0 || h == 0) return reject();
        switch (payload[4]) {
          case 1: rec.Hit(kDepth1); break;
          case 8: rec.Hit(kDepth8); break;
          case 16: rec.Hit(kDepth16); break;
          default: return reject();
        }
        switch (payload[5]) {
          case 0: rec.Hit(kColorGray); break;
          case 2: rec.Hit(kColorRgb); break;
          case 3: rec.Hit(kColorPalette); break;
          default: return reject();
        }
        have_head = true;
      } else if (TagIs(tag, "PALT")) {
        if (!have_head || payload.size() % 3 != 0 || payload.size() > 3 * 256)
          return reject();
        rec.Hit(kPalt);
        if (!payload.empty()) rec.Hit(kPaltEntry);
      } else if (TagIs(tag, "DATA")) {
        if (!have_head || payload.empty()) return reject();
        rec.Hit(kData);
        switch (payload[0]) {
          case 0: rec.Hit(kFilterNone); break;
          case 1: rec.Hit(kFilterSub); break;
          case 2: rec.Hit(kFilterUp); break;
          default: return reject();
        }
      } else if (TagIs(tag, "TEXT")) {
        rec.Hit(kText);
        auto nul = std::find(payload.begin(), payload.end(), uint8_t{0});
        if (nul == payload.end() || nul == payload.begin()) return reject();
        rec.Hit(kTextKeyword);
        if (nul + 1 != payload.end()) rec.Hit(kTextValue);
      } else if (TagIs(tag, "ICCP")) {
        rec.Hit(kIccp);
        rec.Hit(kIccpNoHead);
      } else {
        rec.Hit(kUnknown);
      }
    }
    rec.Hit(kEof);
  }
};

}  // namespace

std::unique_ptr<TargetProgram> MakeMiniImgTarget() {
  return std::make_unique<MiniImgTarget>();
}

}  // namespace seedforge
