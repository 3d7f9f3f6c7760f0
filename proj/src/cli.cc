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

#include "seedforge/cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seedforge/config.h"
#include "seedforge/corpus_selector.h"
#include "seedforge/experimenter.h"
#include "seedforge/grey_fuzzer.h"
#include "seedforge/input_model.h"
#include "seedforge/prompt_refinery.h"
#include "seedforge/target_zoo.h"

namespace seedforge {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App *cmd, CommonOptions &opt) {
  cmd->add_option("--config", opt.config_file, "JSON configuration file");
  cmd->add_option("--set", opt.overrides, "override a configuration key (key=value, repeatable)");
  cmd->footer(Config::KeyTable());
}

// Flags win over the file, the file over defaults.
Config ResolveConfig(const CommonOptions &opt, const std::vector<std::string> &flag_overrides) {
  Config cfg;
  if (!opt.config_file.empty()) cfg.MergeFile(opt.config_file);
  for (const auto &o : opt.overrides) cfg.SetOverride(o);
  for (const auto &o : flag_overrides) cfg.SetOverride(o);
  return cfg;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyCorpus:
      return kExitEmptyCorpus;
    case ErrorCode::kMissingManifest:
    case ErrorCode::kInvalidManifest:
    case ErrorCode::kUnknownFormat:
    case ErrorCode::kUnknownTarget:
    case ErrorCode::kAllDocumentsEmpty:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfig:
    case ErrorCode::kMissingStrategy:
    case ErrorCode::kOversizeSeed:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

void WriteResolvedConfig(const Config &cfg, const fs::path &dir) {
  WriteFile(dir / "config.json", cfg.ToJson().dump(2) + "\n");
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"seedforge: context-driven initial seed corpora for directed fuzzing"};
  app.require_subcommand(1);
  app.footer(Config::KeyTable());

  CommonOptions common;
  std::string bundle_dir, out_dir, target_id, corpus_dir, report_path, strategies;
  std::vector<std::string> bundle_dirs;
  std::optional<int> k, trials;
  std::optional<uint64_t> exec_budget;
  std::optional<double> time_budget;
  bool json_only = false;

  CLI::App *refine = app.add_subcommand("refine", "summarize a bundle into candidate prompts");
  refine->add_option("bundle_dir", bundle_dir, "bundle directory")->required();
  refine->add_option("--out", out_dir, "output directory (prompts/ goes below it)")->default_val("campaign");
  refine->add_option("-k,--candidates", k, "number of candidates (refine.candidates)");
  AddCommon(refine, common);

  CLI::App *build = app.add_subcommand("build-corpus", "refine, generate, run, screen and write a corpus");
  build->add_option("bundle_dir", bundle_dir, "bundle directory")->required();
  build->add_option("--out", out_dir, "output directory")->default_val("campaign");
  build->add_option("-k,--candidates", k, "number of candidates (refine.candidates)");
  AddCommon(build, common);

  CLI::App *fuzz = app.add_subcommand("fuzz", "fuzz one target from a corpus directory");
  fuzz->add_option("target_id", target_id, "target id")->required();
  fuzz->add_option("corpus_dir", corpus_dir, "corpus directory")->required();
  fuzz->add_option("--out", out_dir, "trial directory")->default_val("runs/trial-0");
  fuzz->add_option("--exec-budget", exec_budget, "fuzz.exec_budget");
  fuzz->add_option("--time-budget", time_budget, "fuzz.time_budget_secs");
  AddCommon(fuzz, common);

  CLI::App *campaign = app.add_subcommand("campaign", "run every strategy on every target for N trials");
  campaign->add_option("bundle_dirs", bundle_dirs, "bundle directories")->required();
  campaign->add_option("--out", out_dir, "output directory")->default_val("campaign");
  campaign->add_option("--strategies", strategies, "comma-separated strategies (campaign.strategies)");
  campaign->add_option("--trials", trials, "campaign.trials");
  campaign->add_option("--exec-budget", exec_budget, "fuzz.exec_budget");
  campaign->add_option("--time-budget", time_budget, "fuzz.time_budget_secs");
  campaign->add_flag("--json-only", json_only, "write report.json only");
  AddCommon(campaign, common);

  CLI::App *report = app.add_subcommand("report", "rebuild tables from a report.json");
  report->add_option("report", report_path, "report.json or the directory holding it")->required();
  report->add_option("--out", out_dir, "where to write the CSV files (default: next to the report)");
  report->add_flag("--json-only", json_only, "print only; write no CSV");
  AddCommon(report, common);

  CLI::App *probe = app.add_subcommand("probe-llm", "check that the configured backend answers");
  AddCommon(probe, common);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::vector<std::string> flags;
  if (k) flags.push_back("refine.candidates=" + std::to_string(*k));
  if (trials) flags.push_back("campaign.trials=" + std::to_string(*trials));
  if (exec_budget) flags.push_back("fuzz.exec_budget=" + std::to_string(*exec_budget));
  if (time_budget) {
    std::ostringstream s;
    s.precision(17);
    s << *time_budget;
    flags.push_back("fuzz.time_budget_secs=" + s.str());
  }
  if (!strategies.empty()) flags.push_back("campaign.strategies=" + strategies);

  try {
    const Config cfg = ResolveConfig(common, flags);
    const uint64_t master = cfg.UInt("master_seed");

    if (*refine) {
      UserInputBundle bundle = LoadBundle(bundle_dir);
      auto backend = MakeBackend(cfg);
      auto cands = Refine(bundle, *backend, RefineOptionsFrom(cfg, master));
      WriteCandidates(cands, fs::path(out_dir) / "prompts");
      out << "wrote " << cands.size() << " candidate prompt(s) to "
          << (fs::path(out_dir) / "prompts").string() << "\n";
      return kExitOk;
    }

    if (*build) {
      UserInputBundle bundle = LoadBundle(bundle_dir);
      const TargetProgram &target = GetTarget(bundle.target_id);
      auto backend = MakeBackend(cfg);
      fs::path dir(out_dir);
      CorpusBuild cb = BuildIsc4dgfCorpus(bundle, target, *backend, cfg, master, dir);
      WriteResolvedConfig(cfg, dir);
      out << "candidates " << cb.candidates << ", scripts " << cb.scripts << ", produced "
          << cb.produced << ", admitted " << cb.admitted << ", corpus " << cb.seeds.size()
          << " -> " << (dir / "corpus").string() << "\n";
      for (const auto &n : cb.notes) out << "note: " << n << "\n";
      return kExitOk;
    }

    if (*fuzz) {
      const TargetProgram &target = GetTarget(target_id);
      std::vector<Bytes> seeds = LoadCorpusSeeds(corpus_dir);
      FuzzResult r = Fuzz(target, seeds, FuzzConfigFrom(cfg, DeriveSeed(master, "fuzz/" + target.id() + "/0")));
      WriteTrialArtifacts(r, out_dir);
      out << StatsToJson(r.stats).dump(2) << "\n";
      return kExitOk;
    }

    if (*campaign) {
      std::vector<UserInputBundle> bundles;
      for (const auto &d : bundle_dirs) bundles.push_back(LoadBundle(d));
      std::vector<CampaignTarget> targets;
      std::vector<std::string> wanted = cfg.List("campaign.targets");
      if (wanted.empty()) {
        for (const auto &b : bundles) {
          bool dup = false;
          for (const auto &t : targets) dup |= t.target->id() == b.target_id;
          if (dup) throw Error(ErrorCode::kConfig, "two bundles direct at " + b.target_id);
          targets.push_back({b, &GetTarget(b.target_id)});
        }
      } else {
        for (const auto &id : wanted) {
          const TargetProgram &t = GetTarget(id);
          const UserInputBundle *match = nullptr;
          for (const auto &b : bundles)
            if (b.target_id == id) match = &b;
          if (match == nullptr)
            for (const auto &b : bundles)
              if (!match && b.target_format == t.format()) match = &b;
          if (match == nullptr)
            throw Error(ErrorCode::kConfig, "no bundle for target " + id + " (format " + t.format() + ")");
          targets.push_back({*match, &t});
        }
      }
      auto backend = MakeBackend(cfg);
      fs::path dir(out_dir);
      CampaignReport rep = RunCampaign(targets, ParseStrategies(cfg.List("campaign.strategies")),
                                       cfg, *backend, dir);
      WriteResolvedConfig(cfg, dir);
      WriteReportFiles(rep, dir, json_only);
      out << RenderReport(rep);
      out << "report written to " << dir.string() << "\n";
      return rep.AnyFailed() ? kExitPartial : kExitOk;
    }

    if (*report) {
      fs::path p(report_path);
      if (fs::is_directory(p)) p /= "report.json";
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(ReadTextFile(p));
      } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::kIo, p.string() + ": " + e.what());
      }
      CampaignReport rep = ReportFromJson(j);
      if (!json_only) {
        fs::path dir = out_dir.empty() ? p.parent_path() : fs::path(out_dir);
        if (dir.empty()) dir = ".";
        WriteFile(dir / "report.csv", ReportCsv(rep));
        try {
          WriteFile(dir / "coverage_reach.csv",
                    CoverageReachCsv(CoverageVsReachTable(rep, rep.coverage_baseline, rep.reference)));
        } catch (const Error &e) {
          if (e.code() != ErrorCode::kMissingStrategy) throw;
        }
      }
      out << RenderReport(rep);
      return kExitOk;
    }

    if (*probe) {
      auto backend = MakeBackend(cfg);
      HealthReport h = backend->Probe();
      nlohmann::json j = {{"healthy", h.healthy},
                          {"backend_id", h.backend_id},
                          {"model_id", h.model_id},
                          {"cause", h.cause}};
      out << j.dump(2) << "\n";
      return h.healthy ? kExitOk : kExitFailure;
    }
  } catch (const Error &e) {
    err << "seedforge: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    err << "seedforge: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace seedforge
