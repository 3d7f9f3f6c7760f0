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

#include "seedforge/input_model.h"

#include <array>
#include <map>
#include <sstream>
#include <utility>

#include "seedforge/common.h"
#include "seedforge/formats.h"
#include "seedforge/target_zoo.h"

namespace seedforge {
namespace {

namespace fs = std::filesystem;

constexpr std::array<std::pair<VulnClass, std::string_view>, 7> kVulnClassNames = {{
    {VulnClass::kBufferOverflow, "buffer-overflow"},
    {VulnClass::kOutOfBoundsRead, "out-of-bounds-read"},
    {VulnClass::kIntegerOverflow, "integer-overflow"},
    {VulnClass::kStackExhaustion, "stack-exhaustion"},
    {VulnClass::kUseAfterFree, "use-after-free"},
    {VulnClass::kNullDereference, "null-dereference"},
    {VulnClass::kOther, "other"},
}};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::map<std::string, std::string> ParseManifest(const std::string &text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = Trim(line);
    if (l.empty() || l.front() == '#') continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kInvalidManifest,
                  "line " + std::to_string(lineno) + ": expected key = value");
    std::string key(Trim(l.substr(0, eq)));
    std::string value(Trim(l.substr(eq + 1)));
    if (!kv.emplace(key, value).second)
      throw Error(ErrorCode::kInvalidManifest, "duplicate key '" + key + "'");
  }
  return kv;
}

constexpr std::array<std::string_view, 8> kManifestKeys = {
    "project_intro", "driver_source", "cve_description", "patch",
    "cve.id",        "cve.vuln_class", "target_format",  "target_id"};

}  // namespace

std::string_view VulnClassName(VulnClass vc) {
  for (const auto &[k, name] : kVulnClassNames)
    if (k == vc) return name;
  return "other";
}

VulnClass ParseVulnClass(std::string_view name) {
  for (const auto &[k, n] : kVulnClassNames)
    if (n == name) return k;
  throw Error(ErrorCode::kInvalidManifest, "unknown vuln_class '" + std::string(name) + "'");
}

std::string UserInputBundle::Id() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (std::string_view part : {std::string_view(project_intro), std::string_view(driver_source),
                                std::string_view(cve.id), std::string_view(cve.description),
                                VulnClassName(cve.vuln_class), std::string_view(patch),
                                std::string_view(target_format), std::string_view(target_id)}) {
    h = Fnv1a64(part, h);
    h = Fnv1a64(std::string_view("\x1f", 1), h);
  }
  return Hex64(h);
}

void ValidateBundle(const UserInputBundle &b) {
  if (b.cve.id.empty()) throw Error(ErrorCode::kInvalidManifest, "cve.id is empty");
  if (!IsRegisteredFormat(b.target_format))
    throw Error(ErrorCode::kUnknownFormat, "target_format '" + b.target_format + "'");
  const TargetProgram &t = GetTarget(b.target_id);
  if (t.format() != b.target_format)
    throw Error(ErrorCode::kInvalidManifest, "target '" + b.target_id + "' reads " +
                                                 t.format() + ", not " + b.target_format);
  if (b.project_intro.empty() && b.driver_source.empty() && b.cve.description.empty() &&
      b.patch.empty())
    throw Error(ErrorCode::kAllDocumentsEmpty, "all four documents are empty");
}

UserInputBundle LoadBundle(const fs::path &dir) {
  fs::path manifest_path = dir / "manifest";
  if (!fs::is_regular_file(manifest_path))
    throw Error(ErrorCode::kMissingManifest, "no manifest in " + dir.string());
  auto kv = ParseManifest(ReadTextFile(manifest_path));
  for (const auto &[k, v] : kv) {
    bool known = false;
    for (auto mk : kManifestKeys) known |= (mk == k);
    if (!known) throw Error(ErrorCode::kInvalidManifest, "unknown key '" + k + "'");
  }

  auto document = [&](const std::string &key, std::string &out, bool &absent) {
    auto it = kv.find(key);
    absent = it == kv.end();
    if (absent) return;
    fs::path p = dir / it->second;
    if (!fs::is_regular_file(p))
      throw Error(ErrorCode::kInvalidManifest, key + " names missing file " + it->second);
    out = ReadTextFile(p);
  };
  auto required = [&](const std::string &key) {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.empty())
      throw Error(ErrorCode::kInvalidManifest, "missing " + key);
    return it->second;
  };

  UserInputBundle b;
  document("project_intro", b.project_intro, b.project_intro_absent);
  document("driver_source", b.driver_source, b.driver_source_absent);
  document("cve_description", b.cve.description, b.cve_description_absent);
  document("patch", b.patch, b.patch_absent);
  b.cve.id = required("cve.id");
  if (auto it = kv.find("cve.vuln_class"); it != kv.end())
    b.cve.vuln_class = ParseVulnClass(it->second);
  b.target_format = required("target_format");
  b.target_id = required("target_id");
  ValidateBundle(b);
  return b;
}

void SaveBundle(const UserInputBundle &b, const fs::path &dir) {
  fs::create_directories(dir);
  std::ostringstream m;
  auto doc = [&](std::string_view key, std::string_view file, const std::string &body,
                 bool absent) {
    if (absent) return;
    m << key << " = " << file << "\n";
    WriteFile(dir / file, body);
  };
  doc("project_intro", "project_intro.txt", b.project_intro, b.project_intro_absent);
  doc("driver_source", "driver_source.txt", b.driver_source, b.driver_source_absent);
  doc("cve_description", "cve_description.txt", b.cve.description, b.cve_description_absent);
  doc("patch", "patch.diff", b.patch, b.patch_absent);
  m << "cve.id = " << b.cve.id << "\n";
  m << "cve.vuln_class = " << VulnClassName(b.cve.vuln_class) << "\n";
  m << "target_format = " << b.target_format << "\n";
  m << "target_id = " << b.target_id << "\n";
  WriteFile(dir / "manifest", m.str());
}

}  // namespace seedforge
