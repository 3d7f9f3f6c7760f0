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

// mini-doc-reader: record-oriented document reader. Every OBJS record runs
// the offset-table reader (the bug site), so any document carrying an object
// stream reaches it. The bounds check on the table is skipped on the
// free-list path (generation 0xFFFF), which is the only way to fault.
//
// OBJS payload: count[u8] generation[u16 BE] offsets[count x u16 BE]

#include <algorithm>
#include <cstring>
#include <string_view>

#include "seedforge/formats.h"
#include "seedforge/target_zoo.h"

namespace seedforge {
namespace {

enum Edge : uint32_t {
  kEntry,
  kReject,
  kMagicOk,
  kRecord,
  kEof,
  kUnknown,
  // TEXT
  kText,
  kTextUpper,
  kTextLower,
  kTextDigit,
  kTextSpace,
  kTextPunct,
  kTextEscape,
  kTextEscapeRaw,
  // FONT
  kFont,
  kFontSmall,
  kFontMedium,
  kFontLarge,
  kFontBold,
  kFontItalic,
  kFontNamed,
  // IMAG
  kImag,
  kImagBpp1,
  kImagBpp8,
  kImagBpp24,
  kImagDataFull,
  kImagDataShort,
  // META
  kMeta,
  kMetaTitle,
  kMetaAuthor,
  kMetaSubject,
  kMetaKeywords,
  kMetaOther,
  // PAGE
  kPage,
  kPageEmpty,
  kPageSingle,
  kPageMany,
  // OBJS
  kObjs,
  kObjsSite,
  kObjsFreeList,
  kObjsChecked,
  kObjsEntry,
  kEdgeCount,
};

bool TagIs(ByteView tag, const char (&name)[5]) {
  return std::memcmp(tag.data(), name, 4) == 0;
}

Bytes Objs(uint8_t count, uint16_t gen, size_t offsets) {
  Bytes p{count};
  AppendU16(p, gen);
  for (size_t i = 0; i < offsets; ++i) AppendU16(p, static_cast<uint16_t>(16 * i));
  return p;
}

class MiniDocTarget : public TargetProgram {
 public:
  MiniDocTarget() : TargetProgram("mini-doc-reader", std::string(kMiniDoc), kEdgeCount) {
    bug_sites_.push_back({"DOC001",
                          "free-list object table (generation 0xFFFF) reads "
                          "count offsets without checking the record length",
                          kObjsSite, Witness()});
    minimal_ = WriteMiniDoc({{"PAGE", {0, 1}}});
    provided_ = {
        WriteMiniDoc({{"META", ToBytes("Title=Quarterly report")},
                      {"FONT", Bytes{12, 1, 'S', 'e', 'r', 'i', 'f'}},
                      {"TEXT", ToBytes("Revenue grew 4% in Q3.")},
                      {"PAGE", {0, 1}}}),
        WriteMiniDoc({{"META", ToBytes("Author=ops team")},
                      {"IMAG", Bytes{2, 2, 8, 10, 20, 30, 40}},
                      {"PAGE", {0, 3}}}),
        WriteMiniDoc({{"FONT", Bytes{30, 2, 'M', 'o', 'n', 'o'}},
                      {"TEXT", ToBytes("line one\\nline two")}}),
        WriteMiniDoc({{"META", ToBytes("Keywords=draft,internal")},
                      {"IMAG", Bytes{4, 1, 1, 0xf0}},
                      {"TEXT", ToBytes("Figure 1: layout")}}),
    };
  }

  static Bytes Witness() {
    return WriteMiniDoc({
        {"TEXT", ToBytes("Ab 1, \\n\\q")},
        {"FONT", Bytes{8, 1}},
        {"FONT", Bytes{12, 2, 'S', 'a', 'n', 's'}},
        {"FONT", Bytes{40, 0}},
        {"IMAG", Bytes{8, 1, 1, 0xff}},
        {"IMAG", Bytes{1, 1, 8}},
        {"IMAG", Bytes{1, 1, 24, 1, 2, 3}},
        {"META", ToBytes("Title=t")},
        {"META", ToBytes("Author=a")},
        {"META", ToBytes("Subject=s")},
        {"META", ToBytes("Keywords=k")},
        {"META", ToBytes("Producer=p")},
        {"PAGE", {0, 0}},
        {"PAGE", {0, 1}},
        {"PAGE", {0, 9}},
        {"ZZZZ", {}},
        {"OBJS", Objs(2, 0, 2)},
        // Declares 40 offsets, carries 1: faults on the free-list path.
        {"OBJS", Objs(40, 0xffff, 1)},
    });
  }

 protected:
  void Probe(ByteView in, TraceRecorder &rec) const override {
    rec.Hit(kEntry);
    auto reject = [&rec] {
      rec.Hit(kReject);
      rec.Reject();
    };
    if (in.size() < 4 || !std::equal(kMiniDocMagic.begin(), kMiniDocMagic.end(), in.begin()))
      return reject();
    rec.Hit(kMagicOk);

    size_t pos = 4;
    while (pos < in.size()) {
      rec.Hit(kRecord);
      if (in.size() - pos < 6) return reject();
      ByteView tag = in.subspan(pos, 4);
      size_t len = size_t{in[pos + 4]} << 8 | in[pos + 5];
      pos += 6;
      if (len > in.size() - pos) return reject();
      ByteView p = in.subspan(pos, len);
      pos += len;

      if (TagIs(tag, "TEXT")) {
        rec.Hit(kText);
        for (size_t i = 0; i < p.size(); ++i) {
          uint8_t c = p[i];
          if (c == '\\') {
            if (i + 1 < p.size() && (p[i + 1] == 'n' || p[i + 1] == 't' || p[i + 1] == '\\')) {
              rec.Hit(kTextEscape);
              ++i;
            } else {
              rec.Hit(kTextEscapeRaw);
            }
          } else if (c >= 'A' && c <= 'Z') {
            rec.Hit(kTextUpper);
          } else if (c >= 'a' && c <= 'z') {
            rec.Hit(kTextLower);
          } else if (c >= '0' && c <= '9') {
            rec.Hit(kTextDigit);
          } else if (c == ' ') {
            rec.Hit(kTextSpace);
          } else if (c > 0x20 && c < 0x7f) {
            rec.Hit(kTextPunct);
          } else {
            return reject();
          }
        }
      } else if (TagIs(tag, "FONT")) {
        rec.Hit(kFont);
        if (p.size() < 2 || p[0] == 0) return reject();
        rec.Hit(p[0] < 10 ? kFontSmall : p[0] <= 24 ? kFontMedium : kFontLarge);
        if (p[1] & ~0x3) return reject();
        if (p[1] & 1) rec.Hit(kFontBold);
        if (p[1] & 2) rec.Hit(kFontItalic);
        if (p.size() > 2) rec.Hit(kFontNamed);
      } else if (TagIs(tag, "IMAG")) {
        rec.Hit(kImag);
        if (p.size() < 3 || p[0] == 0 || p[1] == 0) return reject();
        size_t bits = size_t{p[0]} * p[1];
        switch (p[2]) {
          case 1: rec.Hit(kImagBpp1); break;
          case 8: rec.Hit(kImagBpp8); bits *= 8; break;
          case 24: rec.Hit(kImagBpp24); bits *= 24; break;
          default: return reject();
        }
        size_t need = (bits + 7) / 8;
        rec.Hit(p.size() - 3 >= need ? kImagDataFull : kImagDataShort);
      } else if (TagIs(tag, "META")) {
        rec.Hit(kMeta);
        auto eq = std::find(p.begin(), p.end(), uint8_t{'='});
        if (eq == p.end() || eq == p.begin()) return reject();
        std::string_view key(reinterpret_cast<const char *>(p.data()),
                             static_cast<size_t>(eq - p.begin()));
        if (key == "Title") rec.Hit(kMetaTitle);
        else if (key == "Author") rec.Hit(kMetaAuthor);
        else if (key == "Subject") rec.Hit(kMetaSubject);
        else if (key == "Keywords") rec.Hit(kMetaKeywords);
        else rec.Hit(kMetaOther);
      } else if (TagIs(tag, "PAGE")) {
        rec.Hit(kPage);
        if (p.size() != 2) return reject();
        unsigned pages = unsigned{p[0]} << 8 | p[1];
        rec.Hit(pages == 0 ? kPageEmpty : pages == 1 ? kPageSingle : kPageMany);
      } else if (TagIs(tag, "OBJS")) {
        rec.Hit(kObjs);
        if (p.size() < 3) return reject();
        size_t count = p[0];
        unsigned gen = unsigned{p[1]} << 8 | p[2];
        size_t room = (p.size() - 3) / 2;
        // Offset-table reader.
        rec.Reach(0);
        if (gen == 0xffff) {
          rec.Hit(kObjsFreeList);
          if (count > room) rec.Trigger(0);
        } else {
          if (count > room) return reject();
          rec.Hit(kObjsChecked);
        }
        if (std::min(count, room) > 0) rec.Hit(kObjsEntry);
      } else {
        rec.Hit(kUnknown);
      }
    }
    rec.Hit(kEof);
  }
};

}  // namespace

std::unique_ptr<TargetProgram> MakeMiniDocTarget() {
  return std::make_unique<MiniDocTarget>();
}

}  // namespace seedforge
