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

#include "seedforge/seed_synthesis.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <thread>

#include "seedforge/formats.h"

namespace seedforge {

namespace fs = std::filesystem;

std::string BuildGenerationPrompt(const CandidatePrompt &cand, std::string_view format,
                                  std::string_view cve_id, std::string_view put_name) {
  if (!IsRegisteredFormat(format))
    throw Error(ErrorCode::kUnknownFormat, "format '" + std::string(format) + "'");
  std::string out;
  if (!cand.text.empty()) {
    out += cand.text;
    if (out.back() != '\n') out += '\n';
    out += '\n';
  }
  out += "Generate Python code so that the running result of the code is ";
  out += format;
  out += " file as a test case that may trigger ";
  out += cve_id;
  out += " in ";
  out += put_name;
  out += ".";
  return out;
}

std::string ExtractCode(std::string_view response) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  size_t open = response.find("```");
  if (open != std::string_view::npos) {
    size_t body = response.find('\n', open);
    if (body != std::string_view::npos) {
      ++body;
      size_t close = response.find("```", body);
      std::string_view code = response.substr(
          body, close == std::string_view::npos ? std::string_view::npos : close - body);
      std::string out(code);
      while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
      if (!out.empty()) out += '\n';
      return out;
    }
  }
  return std::string(trim(response));
}

SynthesisResult Synthesize(const std::vector<CandidatePrompt> &cands, std::string_view format,
                           std::string_view cve_id, std::string_view put_name,
                           LlmBackend &gateway, const SynthesisOptions &opt) {
  if (opt.scripts_per_prompt < 1)
    throw Error(ErrorCode::kInvalidArgument, "scripts_per_prompt must be >= 1");
  SynthesisResult result;
  for (uint32_t c = 0; c < cands.size(); ++c) {
    const std::string prompt = BuildGenerationPrompt(cands[c], format, cve_id, put_name);
    for (uint32_t d = 0; d < static_cast<uint32_t>(opt.scripts_per_prompt); ++d) {
      CompletionRequest req;
      req.prompt = prompt;
      req.temperature = opt.temperature;
      req.max_tokens = opt.max_tokens;
      req.seed = opt.seed;
      req.draw_index = d;
      std::string text;
      try {
        text = gateway.Complete(req).text;
      } catch (const Error &e) {
        result.log.push_back({c, d, std::string("gateway error: ") + e.what()});
        continue;
      }
      std::string code = ExtractCode(text);
      if (code.empty()) {
        result.log.push_back({c, d, "empty code extraction"});
        continue;
      }
      result.scripts.push_back({std::move(code), c, d, cands[c].source_bundle_id, {}});
    }
  }
  return result;
}

void PersistScripts(std::vector<GeneratorScript> &scripts, const fs::path &dir) {
  fs::create_directories(dir);
  for (auto &s : scripts) {
    s.script_path = dir / (s.Tag() + ".gen");
    WriteFile(s.script_path, s.source_text);
  }
}

std::string_view SandboxStatusName(SandboxStatus s) {
  switch (s) {
    case SandboxStatus::kProduced: return "Produced";
    case SandboxStatus::kExecFailed: return "ExecFailed";
    case SandboxStatus::kTimeout: return "Timeout";
    case SandboxStatus::kNoOutput: return "NoOutput";
    case SandboxStatus::kOversize: return "Oversize";
  }
  return "?";
}

namespace {

// Owns a mkdtemp directory and removes it on destruction.
class TempDir {
 public:
  explicit TempDir(const fs::path &root) {
    fs::path base = root.empty() ? fs::temp_directory_path() : root;
    fs::create_directories(base);
    std::string templ = (base / "seedforge-sbx-XXXXXX").string();
    if (mkdtemp(templ.data()) == nullptr)
      throw Error(ErrorCode::kIo, "mkdtemp failed under " + base.string());
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

struct Fd {
  int fd = -1;
  ~Fd() { Close(); }
  void Close() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

// Largest regular file under `dir`, or 0.
uintmax_t LargestFile(const fs::path &dir) {
  uintmax_t largest = 0;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::end(it);
       it.increment(ec)) {
    if (it->is_regular_file(ec)) largest = std::max(largest, it->file_size(ec));
  }
  return largest;
}

Bytes ReadPrefix(const fs::path &p, size_t cap) {
  std::ifstream in(p, std::ios::binary);
  Bytes out(cap);
  in.read(reinterpret_cast<char *>(out.data()), static_cast<std::streamsize>(cap));
  out.resize(static_cast<size_t>(in.gcount()));
  return out;
}

}  // namespace

SandboxOutcome ExecuteSandboxed(const GeneratorScript &script, const SandboxLimits &limits) {
  if (limits.interpreter.empty()) throw Error(ErrorCode::kConfig, "synth.interpreter is empty");
  TempDir run(limits.work_root);
  const fs::path scratch = run.path() / "scratch";
  fs::create_directory(scratch);
  const fs::path script_file = run.path() / "generator.gen";
  WriteFile(script_file, script.source_text);

  std::vector<std::string> args = limits.interpreter;
  args.push_back(script_file.string());
  std::vector<char *> argv;
  for (auto &a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  int out_pipe[2], err_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0)
    throw Error(ErrorCode::kIo, "pipe failed");
  Fd out_r{out_pipe[0]}, out_w{out_pipe[1]}, err_r{err_pipe[0]}, err_w{err_pipe[1]};

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::kIo, "fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    int devnull = ::open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      dup2(devnull, STDERR_FILENO);
    }
    dup2(out_pipe[1], STDOUT_FILENO);
    if (chdir(scratch.c_str()) != 0) _exit(126);
    execvp(argv[0], argv.data());
    int err = errno;
    (void)!write(err_pipe[1], &err, sizeof(err));
    _exit(127);
  }
  setpgid(pid, pid);
  out_w.Close();
  err_w.Close();

  int exec_errno = 0;
  if (read(err_r.fd, &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
    waitpid(pid, nullptr, 0);
    throw Error(ErrorCode::kConfig, "cannot run interpreter '" + limits.interpreter[0] +
                                        "': " + std::strerror(exec_errno));
  }

  SandboxOutcome outcome;
  Bytes captured;
  bool timed_out = false, oversize = false, exited = false, eof = false;
  int wstatus = 0;
  auto last_scan = start;
  char buf[64 * 1024];
  while (!exited) {
    const auto now = std::chrono::steady_clock::now();
    if (now - start >= limits.timeout) {
      timed_out = true;
      break;
    }
    if (!eof) {
      pollfd pfd{out_r.fd, POLLIN, 0};
      if (poll(&pfd, 1, 10) > 0) {
        ssize_t n = read(out_r.fd, buf, sizeof(buf));
        if (n <= 0) {
          eof = true;
        } else {
          outcome.stdout_bytes_captured += static_cast<size_t>(n);
          size_t room = limits.output_cap + 1 - std::min(captured.size(), limits.output_cap + 1);
          captured.insert(captured.end(), buf, buf + std::min<size_t>(room, n));
          if (captured.size() > limits.output_cap) {
            oversize = true;
            break;
          }
        }
      }
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (now - last_scan >= std::chrono::milliseconds(50)) {
      last_scan = now;
      if (LargestFile(scratch) > limits.output_cap) {
        oversize = true;
        break;
      }
    }
    pid_t r = waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) exited = true;
  }
  // Drain whatever is left in the pipe after a normal exit.
  if (exited && !eof) {
    ssize_t n;
    while ((n = read(out_r.fd, buf, sizeof(buf))) > 0) {
      outcome.stdout_bytes_captured += static_cast<size_t>(n);
      size_t room = limits.output_cap + 1 - std::min(captured.size(), limits.output_cap + 1);
      captured.insert(captured.end(), buf, buf + std::min<size_t>(room, n));
    }
    if (captured.size() > limits.output_cap) oversize = true;
  }
  // Take down the whole process group, including stragglers.
  kill(-pid, SIGKILL);
  if (!exited) waitpid(pid, &wstatus, 0);
  outcome.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  if (timed_out) {
    outcome.status = SandboxStatus::kTimeout;
    outcome.note = "killed after timeout";
    return outcome;
  }
  outcome.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : 128 + WTERMSIG(wstatus);

  // Seed identity: a single created file wins over stdout.
  std::vector<fs::path> files;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(scratch, ec); !ec && it != fs::end(it);
       it.increment(ec))
    if (it->is_regular_file(ec)) files.push_back(it->path());
  std::sort(files.begin(), files.end());

  Bytes produced;
  std::string produced_name;
  bool too_big = oversize;
  if (files.size() == 1) {
    uintmax_t size = fs::file_size(files[0], ec);
    produced = ReadPrefix(files[0], limits.output_cap);
    produced_name = fs::relative(files[0], scratch).string();
    too_big = too_big || size > limits.output_cap;
  } else if (files.size() > 1) {
    outcome.note = "ambiguous: " + std::to_string(files.size()) + " output files";
  } else if (!captured.empty()) {
    produced = std::move(captured);
    if (produced.size() > limits.output_cap) {
      too_big = true;
      produced.resize(limits.output_cap);
    }
    produced_name = "<stdout>";
  }
  if (oversize && produced.empty()) {
    // Killed mid-write; keep the capped prefix of the biggest file for the record.
    for (const auto &f : files) {
      Bytes b = ReadPrefix(f, limits.output_cap);
      if (b.size() > produced.size()) produced = std::move(b);
    }
    if (produced.empty() && !captured.empty()) {
      produced = std::move(captured);
      produced.resize(std::min(produced.size(), limits.output_cap));
    }
  }

  if (too_big) {
    outcome.status = SandboxStatus::kOversize;
    outcome.output = std::move(produced);
    outcome.note = "output exceeds cap of " + std::to_string(limits.output_cap) + " bytes";
    return outcome;
  }
  if (outcome.exit_code != 0) {
    outcome.status = SandboxStatus::kExecFailed;
    outcome.output = std::move(produced);
    if (outcome.note.empty()) outcome.note = "exit status " + std::to_string(outcome.exit_code);
    return outcome;
  }
  if (produced.empty()) {
    outcome.status = SandboxStatus::kNoOutput;
    return outcome;
  }
  outcome.status = SandboxStatus::kProduced;
  outcome.output_file = produced_name;
  outcome.output = std::move(produced);
  return outcome;
}

std::vector<SandboxOutcome> ExecuteAll(const std::vector<GeneratorScript> &scripts,
                                       const SandboxLimits &limits, int max_parallel) {
  std::vector<SandboxOutcome> out(scripts.size());
  int workers = max_parallel > 0 ? max_parallel
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(scripts.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < scripts.size(); ++i) out[i] = ExecuteSandboxed(scripts[i], limits);
    return out;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < scripts.size(); i = next++) {
          try {
            out[i] = ExecuteSandboxed(scripts[i], limits);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<SeedArtifact> CollectArtifacts(const std::vector<GeneratorScript> &scripts,
                                           std::vector<SandboxOutcome> outcomes) {
  std::vector<SeedArtifact> out;
  for (size_t i = 0; i < scripts.size() && i < outcomes.size(); ++i) {
    if (outcomes[i].output.empty()) continue;
    SeedArtifact a;
    a.bytes = outcomes[i].output;
    a.origin = scripts[i];
    a.outcome = std::move(outcomes[i]);
    out.push_back(std::move(a));
  }
  return out;
}

void PersistRawSeeds(const std::vector<SeedArtifact> &artifacts, const fs::path &dir) {
  fs::create_directories(dir);
  for (const auto &a : artifacts) WriteFile(dir / (a.origin.Tag() + ".bin"), a.bytes);
}

}  // namespace seedforge
