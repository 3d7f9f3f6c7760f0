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

// Shared vocabulary: byte strings, the error type, fingerprints.

#ifndef SEEDFORGE_COMMON_H_
#define SEEDFORGE_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seedforge {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

enum class ErrorCode {
  kMissingManifest,
  kInvalidManifest,
  kUnknownFormat,
  kUnknownTarget,
  kAllDocumentsEmpty,
  kInvalidArgument,
  kTransport,
  kAuth,
  kDistinctnessExhausted,
  kConfig,
  kEmptyCorpus,
  kOversizeSeed,
  kMissingStrategy,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All module failures surface as this exception; `code()` names the
// contract-level error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view data, uint64_t basis = 0xcbf29ce484222325ULL);
inline uint64_t Fnv1a64(ByteView data) {
  return Fnv1a64(std::string_view(reinterpret_cast<const char *>(data.data()),
                                  data.size()));
}

// SplitMix64 finalizer; used to derive independent sub-seeds.
uint64_t Mix64(uint64_t x);
inline uint64_t DeriveSeed(uint64_t base, uint64_t salt) {
  return Mix64(base ^ Mix64(salt + 0x9e3779b97f4a7c15ULL));
}
inline uint64_t DeriveSeed(uint64_t base, std::string_view salt) {
  return DeriveSeed(base, Fnv1a64(salt));
}

std::string Hex64(uint64_t v);
std::string ToHex(ByteView data);
Bytes FromHex(std::string_view hex);

inline Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string ToString(ByteView b) {
  return std::string(reinterpret_cast<const char *>(b.data()), b.size());
}

// File helpers; failures throw Error(kIo).
std::string ReadTextFile(const std::filesystem::path &path);
Bytes ReadBinaryFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, ByteView data);
void WriteFile(const std::filesystem::path &path, std::string_view text);

}  // namespace seedforge

#endif  // SEEDFORGE_COMMON_H_
