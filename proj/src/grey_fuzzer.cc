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

#include "seedforge/grey_fuzzer.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <sstream>

#include "seedforge/rng.h"

namespace seedforge {

namespace {

constexpr int32_t kInteresting8[] = {-128, -1, 0, 1, 16, 32, 64, 100, 127};
constexpr int32_t kInteresting16[] = {-128, -1,  0,   1,   16,   32,   64,   100,  127, -32768,
                                      -129, 128, 255, 256, 512, 1000, 1024, 4096, 32767};
constexpr int32_t kInteresting32[] = {
    -128,       -1,       0,      1,     16,    32,    64,        100,       127,
    -32768,     -129,     128,    255,   256,   512,   1000,      1024,      4096,
    32767,      INT32_MIN, -100663046, -32769, 32768, 65535, 65536, 100663045, INT32_MAX};
constexpr int kArithMax = 35;

uint32_t Load(const Bytes &b, size_t pos, int width, bool big_endian) {
  uint32_t v = 0;
  for (int i = 0; i < width; ++i) {
    uint32_t byte = b[pos + i];
    v |= big_endian ? byte << (8 * (width - 1 - i)) : byte << (8 * i);
  }
  return v;
}

void Store(Bytes &b, size_t pos, int width, bool big_endian, uint32_t v) {
  for (int i = 0; i < width; ++i) {
    int shift = big_endian ? 8 * (width - 1 - i) : 8 * i;
    b[pos + i] = static_cast<uint8_t>(v >> shift);
  }
}

uint32_t WidthMask(int width) { return width == 4 ? 0xffffffffu : (1u << (8 * width)) - 1; }

class Trial {
 public:
  Trial(const TargetProgram &target, const FuzzConfig &cfg, size_t bug)
      : target_(target),
        cfg_(cfg),
        bug_(bug),
        site_edge_(target.bug_sites()[bug].site_edge),
        rec_(target.MakeRecorder()),
        covered_(target.total_edges(), 0),
        rng_(cfg.rng_seed),
        wall_start_(std::chrono::steady_clock::now()) {
    stack_lo_ = std::bit_width(static_cast<unsigned>(cfg.havoc_stack_min - 1));
    stack_hi_ = std::bit_width(static_cast<unsigned>(cfg.havoc_stack_max)) - 1;
  }

  FuzzResult Run(const std::vector<Bytes> &corpus) {
    for (const Bytes &seed : corpus) {
      std::vector<uint32_t> novelty;
      bool go = Execute(seed, &novelty);
      Enqueue(seed, 0, std::move(novelty));
      if (!go) return Finish();
    }
    size_t cur = 0;
    while (true) {
      if (!queue_[cur].det_done) {
        queue_[cur].det_done = true;
        Bytes buf = queue_[cur].bytes;
        if (!Deterministic(buf)) break;
      }
      if (!Havoc(cur)) break;
      cur = (cur + 1) % queue_.size();
    }
    return Finish();
  }

 private:
  void Enqueue(const Bytes &bytes, uint64_t exec, std::vector<uint32_t> novelty) {
    QueueEntry e;
    e.bytes = bytes;
    e.discovery_exec = exec;
    e.energy = cfg_.havoc_rounds;
    if (cfg_.reach_boost &&
        std::find(novelty.begin(), novelty.end(), site_edge_) != novelty.end())
      e.energy *= 2;
    e.coverage_novelty = std::move(novelty);
    queue_.push_back(std::move(e));
  }

  // Runs one input. Returns false once the trial must stop. Intake callers
  // pass `intake_novelty` and queue the seed themselves.
  bool Execute(const Bytes &input, std::vector<uint32_t> *intake_novelty = nullptr) {
    target_.Execute(input, rec_);
    ++execs_;
    virtual_ns_ += cfg_.exec_cost_us * 1000.0 + cfg_.byte_cost_ns * static_cast<double>(input.size());
    const bool reached = rec_.reached(bug_);
    const bool triggered = rec_.triggered(bug_);
    if (reached) ++reaches_;

    std::vector<uint32_t> novelty;
    for (uint32_t e : rec_.touched())
      if (!covered_[e]) novelty.push_back(e);
    if (!novelty.empty()) {
      std::sort(novelty.begin(), novelty.end());
      for (uint32_t e : novelty) covered_[e] = 1;
      edges_covered_ += static_cast<uint32_t>(novelty.size());
    }
    if (cfg_.audit_log) audit_.push_back({execs_, input, reached, triggered, !novelty.empty()});
    if (intake_novelty != nullptr) {
      *intake_novelty = std::move(novelty);
    } else if (!novelty.empty()) {
      Enqueue(input, execs_, std::move(novelty));
    }

    if (triggered) {
      stats_.triggered = true;
      stats_.execs_to_trigger = execs_;
      stats_.time_to_trigger = virtual_ns_ / 1e9;
      stats_.reaches_before_trigger = reaches_;
      trigger_input_ = input;
      stats_.stop_reason = "triggered";
      return false;
    }
    if (cfg_.exec_budget && execs_ >= *cfg_.exec_budget) {
      stats_.stop_reason = "exec_budget";
      return false;
    }
    if (cfg_.time_budget_secs) {
      if (virtual_ns_ / 1e9 >= *cfg_.time_budget_secs) {
        stats_.stop_reason = "time_budget";
        return false;
      }
      if ((execs_ & 1023) == 0 && WallSecs() >= *cfg_.time_budget_secs) {
        stats_.stop_reason = "wall_clock";
        return false;
      }
    }
    return true;
  }

  double WallSecs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_).count();
  }

  // One deterministic pass. `buf` is restored after every mutation.
  bool Deterministic(Bytes &buf) {
    const size_t n = buf.size();
    for (size_t bit = 0; bit < n * 8; ++bit) {
      const uint8_t mask = static_cast<uint8_t>(0x80 >> (bit & 7));
      buf[bit >> 3] ^= mask;
      if (!Execute(buf)) return false;
      buf[bit >> 3] ^= mask;
    }
    for (size_t i = 0; i < n; ++i) {
      buf[i] ^= 0xff;
      if (!Execute(buf)) return false;
      buf[i] ^= 0xff;
    }
    for (int width : {1, 2, 4}) {
      if (n < static_cast<size_t>(width)) continue;
      for (size_t pos = 0; pos + width <= n; ++pos) {
        for (bool big : {false, true}) {
          if (width == 1 && big) continue;
          const uint32_t orig = Load(buf, pos, width, big);
          for (int delta = 1; delta <= kArithMax; ++delta) {
            for (int sign : {1, -1}) {
              Store(buf, pos, width, big, (orig + sign * delta) & WidthMask(width));
              if (!Execute(buf)) return false;
            }
          }
          Store(buf, pos, width, big, orig);
        }
      }
    }
    auto interesting = [&](int width, const auto &values) {
      if (n < static_cast<size_t>(width)) return true;
      for (size_t pos = 0; pos + width <= n; ++pos) {
        for (bool big : {false, true}) {
          if (width == 1 && big) continue;
          const uint32_t orig = Load(buf, pos, width, big);
          for (int32_t v : values) {
            const uint32_t value = static_cast<uint32_t>(v) & WidthMask(width);
            if (value == orig) continue;
            Store(buf, pos, width, big, value);
            if (!Execute(buf)) return false;
          }
          Store(buf, pos, width, big, orig);
        }
      }
      return true;
    };
    return interesting(1, kInteresting8) && interesting(2, kInteresting16) &&
           interesting(4, kInteresting32);
  }

  size_t BlockLen(size_t limit) {
    static constexpr size_t kTiers[] = {32, 128, 1500};
    size_t cap = std::min(limit, kTiers[rng_.Below(3)]);
    return cap == 0 ? 0 : rng_.Between(1, cap);
  }

  void Mutate(Bytes &b) {
    const size_t max_len = cfg_.max_input_bytes;
    if (b.empty()) {
      size_t len = std::min<size_t>(max_len, rng_.Between(1, 4));
      for (size_t i = 0; i < len; ++i) b.push_back(static_cast<uint8_t>(rng_.Below(256)));
      return;
    }
    const uint64_t ops = queue_.size() > 1 ? 12 : 11;
    switch (rng_.Below(ops)) {
      case 0: {
        size_t bit = rng_.Below(b.size() * 8);
        b[bit >> 3] ^= static_cast<uint8_t>(0x80 >> (bit & 7));
        break;
      }
      case 1:
        b[rng_.Below(b.size())] =
            static_cast<uint8_t>(kInteresting8[rng_.Below(std::size(kInteresting8))]);
        break;
      case 2:
        if (b.size() >= 2)
          Store(b, rng_.Below(b.size() - 1), 2, rng_.Coin(),
                static_cast<uint32_t>(kInteresting16[rng_.Below(std::size(kInteresting16))]) &
                    0xffff);
        break;
      case 3:
        if (b.size() >= 4)
          Store(b, rng_.Below(b.size() - 3), 4, rng_.Coin(),
                static_cast<uint32_t>(kInteresting32[rng_.Below(std::size(kInteresting32))]));
        break;
      case 4:
      case 5:
      case 6: {
        const int width = 1 << (rng_.Below(3));
        if (b.size() < static_cast<size_t>(width)) break;
        const size_t pos = rng_.Below(b.size() - width + 1);
        const bool big = width > 1 && rng_.Coin();
        const uint32_t delta = static_cast<uint32_t>(rng_.Between(1, kArithMax));
        const uint32_t v = Load(b, pos, width, big);
        Store(b, pos, width, big, (rng_.Coin() ? v + delta : v - delta) & WidthMask(width));
        break;
      }
      case 7:
        b[rng_.Below(b.size())] ^= static_cast<uint8_t>(rng_.Between(1, 255));
        break;
      case 8: {
        if (b.size() < 2) break;
        size_t len = BlockLen(b.size() - 1);
        size_t from = rng_.Below(b.size() - len + 1);
        b.erase(b.begin() + from, b.begin() + from + len);
        break;
      }
      case 9: {
        if (b.size() >= max_len) break;
        size_t at = rng_.Below(b.size() + 1);
        if (rng_.Below(4) != 0) {
          size_t len = BlockLen(std::min(b.size(), max_len - b.size()));
          size_t from = rng_.Below(b.size() - len + 1);
          Bytes block(b.begin() + from, b.begin() + from + len);
          b.insert(b.begin() + at, block.begin(), block.end());
        } else {
          size_t len = BlockLen(std::min<size_t>(1500, max_len - b.size()));
          uint8_t fill = rng_.Coin() ? static_cast<uint8_t>(rng_.Below(256)) : b[rng_.Below(b.size())];
          b.insert(b.begin() + at, len, fill);
        }
        break;
      }
      case 10: {
        if (b.size() < 2) break;
        size_t len = BlockLen(b.size() - 1);
        size_t to = rng_.Below(b.size() - len + 1);
        if (rng_.Below(4) != 0) {
          size_t from = rng_.Below(b.size() - len + 1);
          std::copy_n(Bytes(b.begin() + from, b.begin() + from + len).begin(), len, b.begin() + to);
        } else {
          uint8_t fill = rng_.Coin() ? static_cast<uint8_t>(rng_.Below(256)) : b[rng_.Below(b.size())];
          std::fill_n(b.begin() + to, len, fill);
        }
        break;
      }
      case 11: {
        const Bytes &other = queue_[rng_.Below(queue_.size())].bytes;
        if (other.empty()) break;
        size_t cut = rng_.Below(b.size() + 1);
        size_t from = rng_.Below(other.size());
        b.resize(cut);
        b.insert(b.end(), other.begin() + from, other.end());
        if (b.size() > max_len) b.resize(max_len);
        break;
      }
    }
  }

  bool Havoc(size_t index) {
    const Bytes base = queue_[index].bytes;
    const uint64_t total =
        static_cast<uint64_t>(queue_[index].energy) * cfg_.havoc_execs_per_round;
    Bytes buf;
    for (uint64_t i = 0; i < total; ++i) {
      buf = base;
      const int stack = 1 << rng_.Between(stack_lo_, stack_hi_);
      for (int s = 0; s < stack; ++s) Mutate(buf);
      if (!Execute(buf)) return false;
    }
    return true;
  }

  FuzzResult Finish() {
    FuzzResult r;
    stats_.target_id = target_.id();
    stats_.bug_id = target_.bug_sites()[bug_].bug_id;
    stats_.total_reaches = reaches_;
    stats_.total_execs = execs_;
    stats_.edges_covered = edges_covered_;
    stats_.total_edges = target_.total_edges();
    stats_.coverage_fraction =
        static_cast<double>(edges_covered_) / static_cast<double>(target_.total_edges());
    stats_.queue_size = queue_.size();
    stats_.elapsed_secs = virtual_ns_ / 1e9;
    r.stats = stats_;
    r.trigger_input = std::move(trigger_input_);
    r.audit = std::move(audit_);
    r.wall_secs = WallSecs();
    return r;
  }

  const TargetProgram &target_;
  const FuzzConfig &cfg_;
  size_t bug_;
  uint32_t site_edge_;
  TraceRecorder rec_;
  std::vector<uint8_t> covered_;
  uint32_t edges_covered_ = 0;
  std::vector<QueueEntry> queue_;
  Rng rng_;
  int stack_lo_ = 0;
  int stack_hi_ = 0;
  uint64_t execs_ = 0;
  uint64_t reaches_ = 0;
  double virtual_ns_ = 0.0;
  std::chrono::steady_clock::time_point wall_start_;
  FuzzTrialStats stats_;
  std::optional<Bytes> trigger_input_;
  std::vector<AuditRecord> audit_;
};

}  // namespace

void FuzzConfig::Validate() const {
  if (!time_budget_secs && !exec_budget)
    throw Error(ErrorCode::kConfig, "fuzzing needs a time budget or an exec budget");
  if (time_budget_secs && !(*time_budget_secs > 0))
    throw Error(ErrorCode::kConfig, "fuzz.time_budget_secs must be > 0");
  if (exec_budget && *exec_budget < 1) throw Error(ErrorCode::kConfig, "fuzz.exec_budget must be >= 1");
  if (havoc_stack_min < 1 || havoc_stack_max < havoc_stack_min ||
      std::bit_floor(static_cast<unsigned>(havoc_stack_max)) < static_cast<unsigned>(havoc_stack_min))
    throw Error(ErrorCode::kConfig,
                "havoc stacking range must contain a power of two and satisfy 1 <= min <= max");
  if (havoc_rounds < 1 || havoc_execs_per_round < 1)
    throw Error(ErrorCode::kConfig, "havoc energy must be >= 1");
  if (max_input_bytes < 1) throw Error(ErrorCode::kConfig, "fuzz.max_input_bytes must be >= 1");
  if (exec_cost_us < 0 || byte_cost_ns < 0)
    throw Error(ErrorCode::kConfig, "virtual execution costs must be >= 0");
}

FuzzResult Fuzz(const TargetProgram &target, const std::vector<Bytes> &corpus,
                const FuzzConfig &cfg) {
  cfg.Validate();
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "fuzzing needs at least one seed");
  for (size_t i = 0; i < corpus.size(); ++i)
    if (corpus[i].size() > cfg.max_input_bytes)
      throw Error(ErrorCode::kOversizeSeed,
                  "seed " + std::to_string(i) + " has " + std::to_string(corpus[i].size()) +
                      " bytes, limit is " + std::to_string(cfg.max_input_bytes));
  size_t bug = 0;
  if (!cfg.target_bug.empty()) {
    auto idx = target.BugIndex(cfg.target_bug);
    if (!idx)
      throw Error(ErrorCode::kInvalidArgument,
                  "target " + target.id() + " has no bug " + cfg.target_bug);
    bug = *idx;
  }
  Trial trial(target, cfg, bug);
  return trial.Run(corpus);
}

ExecutionTrace Replay(const TargetProgram &target, ByteView input) { return target.Run(input); }

nlohmann::json StatsToJson(const FuzzTrialStats &s) {
  nlohmann::json j = {
      {"target_id", s.target_id},
      {"bug_id", s.bug_id},
      {"triggered", s.triggered},
      {"time_to_trigger", nullptr},
      {"execs_to_trigger", nullptr},
      {"reaches_before_trigger", s.reaches_before_trigger},
      {"total_reaches", s.total_reaches},
      {"total_execs", s.total_execs},
      {"edges_covered", s.edges_covered},
      {"total_edges", s.total_edges},
      {"coverage_fraction", s.coverage_fraction},
      {"queue_size", s.queue_size},
      {"elapsed_secs", s.elapsed_secs},
      {"stop_reason", s.stop_reason},
  };
  if (s.time_to_trigger) j["time_to_trigger"] = *s.time_to_trigger;
  if (s.execs_to_trigger) j["execs_to_trigger"] = *s.execs_to_trigger;
  return j;
}

FuzzTrialStats StatsFromJson(const nlohmann::json &j) {
  FuzzTrialStats s;
  s.target_id = j.at("target_id").get<std::string>();
  s.bug_id = j.at("bug_id").get<std::string>();
  s.triggered = j.at("triggered").get<bool>();
  if (!j.at("time_to_trigger").is_null()) s.time_to_trigger = j.at("time_to_trigger").get<double>();
  if (!j.at("execs_to_trigger").is_null())
    s.execs_to_trigger = j.at("execs_to_trigger").get<uint64_t>();
  s.reaches_before_trigger = j.at("reaches_before_trigger").get<uint64_t>();
  s.total_reaches = j.at("total_reaches").get<uint64_t>();
  s.total_execs = j.at("total_execs").get<uint64_t>();
  s.edges_covered = j.at("edges_covered").get<uint32_t>();
  s.total_edges = j.at("total_edges").get<uint32_t>();
  s.coverage_fraction = j.at("coverage_fraction").get<double>();
  s.queue_size = j.at("queue_size").get<size_t>();
  s.elapsed_secs = j.at("elapsed_secs").get<double>();
  s.stop_reason = j.at("stop_reason").get<std::string>();
  return s;
}

void WriteTrialArtifacts(const FuzzResult &r, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "stats.json", StatsToJson(r.stats).dump(2) + "\n");
  if (r.trigger_input) WriteFile(dir / "trigger.bin", *r.trigger_input);
  if (!r.audit.empty()) {
    std::string log;
    for (const auto &a : r.audit) {
      log += nlohmann::json{{"exec", a.exec},
                            {"input", ToHex(a.input)},
                            {"reached", a.reached},
                            {"triggered", a.triggered},
                            {"novel", a.novel}}
                 .dump();
      log += '\n';
    }
    WriteFile(dir / "audit.jsonl", log);
  }
}

std::vector<AuditRecord> LoadAuditLog(const std::filesystem::path &path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<AuditRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({j.at("exec").get<uint64_t>(), FromHex(j.at("input").get<std::string>()),
                   j.at("reached").get<bool>(), j.at("triggered").get<bool>(),
                   j.at("novel").get<bool>()});
  }
  return out;
}

}  // namespace seedforge
