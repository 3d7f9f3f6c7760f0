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

// The user-supplied context for one target vulnerability, loaded from a
// bundle directory. The directory holds a `manifest` of `key = value` lines:
//
//   project_intro   = intro.md          # document paths, relative to the dir
//   driver_source   = driver.c
//   cve_description = cve.txt
//   patch           = fix.diff
//   cve.id          = CVE-TEST-0001
//   cve.vuln_class  = buffer-overflow
//   target_format   = mini-doc
//   target_id       = mini-doc-reader
//
// Any document key may be omitted; the document is then empty and flagged
// absent. At least one document must have content.

#ifndef SEEDFORGE_INPUT_MODEL_H_
#define SEEDFORGE_INPUT_MODEL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace seedforge {

enum class VulnClass {
  kBufferOverflow,
  kOutOfBoundsRead,
  kIntegerOverflow,
  kStackExhaustion,
  kUseAfterFree,
  kNullDereference,
  kOther,
};

std::string_view VulnClassName(VulnClass vc);
// Throws Error(kInvalidManifest) for an unknown name.
VulnClass ParseVulnClass(std::string_view name);

struct CveDetails {
  std::string id;
  std::string description;
  VulnClass vuln_class = VulnClass::kOther;

  bool operator==(const CveDetails &) const = default;
};

struct UserInputBundle {
  std::string project_intro;
  std::string driver_source;
  CveDetails cve;
  std::string patch;
  std::string target_format;
  std::string target_id;

  bool project_intro_absent = false;
  bool driver_source_absent = false;
  bool cve_description_absent = false;
  bool patch_absent = false;

  // Content fingerprint (hex); stable across loads.
  std::string Id() const;

  bool operator==(const UserInputBundle &) const = default;
};

// Errors: kMissingManifest, kInvalidManifest, kUnknownFormat,
// kUnknownTarget, kAllDocumentsEmpty.
UserInputBundle LoadBundle(const std::filesystem::path &dir);

// Checks the bundle invariants; throws like LoadBundle.
void ValidateBundle(const UserInputBundle &bundle);

// Writes `dir/manifest` plus one file per present document.
void SaveBundle(const UserInputBundle &bundle, const std::filesystem::path &dir);

}  // namespace seedforge

#endif  // SEEDFORGE_INPUT_MODEL_H_
