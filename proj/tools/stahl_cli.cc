// Copyright 2026 The StahlSearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library exclusively through the C
// interface in stahlsearch.h.
//
// Exit codes: 0 success (and verification passed), 1 runtime failure or a
// failed verification, 2 usage or input-format errors.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "stahlsearch.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Relative output paths land under $STAHL_OUT_DIR when it is set.
std::string OutPath(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("STAHL_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  return std::string(dir) + "/" + path;
}

int ReportError(stahl_status status) {
  std::fprintf(stderr, "error: %s\n", stahl_last_error());
  return (status == STAHL_ERR_PARSE || status == STAHL_ERR_INVALID_ARGUMENT ||
          status == STAHL_ERR_INVALID_CONFIG)
             ? kExitUsage
             : kExitFailure;
}

// Prints to stdout when path is empty, else writes the file.
bool Emit(const std::string& path, const char* text) {
  if (path.empty()) {
    std::fputs(text, stdout);
    return true;
  }
  const std::string full = OutPath(path);
  std::ofstream out(full, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", full.c_str());
    return false;
  }
  return true;
}

struct StringHolder {
  char* s = nullptr;
  ~StringHolder() { stahl_string_free(s); }
};

using ConfigPtr = std::unique_ptr<stahl_config, decltype(&stahl_config_free)>;
using ProfilePtr =
    std::unique_ptr<stahl_profile, decltype(&stahl_profile_free)>;
using ReportPtr = std::unique_ptr<stahl_report, decltype(&stahl_report_free)>;
using SimPtr = std::unique_ptr<stahl_sim, decltype(&stahl_sim_free)>;

ConfigPtr LoadConfig(const std::string& path, int* exit_code) {
  stahl_config* cfg = nullptr;
  if (auto st = stahl_config_load(path.c_str(), &cfg); st != STAHL_OK) {
    *exit_code = ReportError(st);
    return ConfigPtr(nullptr, &stahl_config_free);
  }
  return ConfigPtr(cfg, &stahl_config_free);
}

// Profile from --profile when given, else constructed from the config.
ProfilePtr ObtainProfile(const stahl_config* cfg,
                         const std::string& profile_path,
                         const std::string& groups, int* exit_code) {
  stahl_profile* profile = nullptr;
  stahl_status st =
      profile_path.empty()
          ? stahl_construct(cfg, groups.empty() ? nullptr : groups.c_str(),
                            &profile)
          : stahl_profile_load(profile_path.c_str(), &profile);
  if (st != STAHL_OK) {
    *exit_code = ReportError(st);
    return ProfilePtr(nullptr, &stahl_profile_free);
  }
  return ProfilePtr(profile, &stahl_profile_free);
}

struct SimFlags {
  stahl_sim_options options = stahl_sim_options_default();
  bool agent_mode = false;

  void Register(CLI::App* cmd, const char* reps_help) {
    cmd->add_option("--reps", options.replications, reps_help);
    cmd->add_option("--seed", options.seed, "Random seed");
    cmd->add_option("--threads", options.threads, "Worker threads");
    cmd->add_flag("--agent-mode", agent_mode,
                  "Walk discrete searchers instead of expected flows");
    cmd->add_option("--agents", options.agents,
                    "Searcher count in agent mode");
    cmd->add_option("--bins", options.histogram_bins,
                    "Price histogram bin count");
  }

  stahl_sim_options Final() const {
    stahl_sim_options o = options;
    o.agent_mode = agent_mode ? 1 : 0;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consumer-search market equilibria: construct, verify, "
               "replay, sweep"};
  app.set_version_flag("--version", std::string(stahl_version()));
  app.require_subcommand(1);

  std::function<int()> action;

  // ----- construct --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "construct", "Build the mixed-strategy equilibrium for a market");
    auto config_path = std::make_shared<std::string>();
    auto groups = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto quiet = std::make_shared<bool>(false);
    cmd->add_option("--config", *config_path, "Market description file")
        ->required();
    cmd->add_option("--groups", *groups,
                    "Seller arrangement, e.g. mixers=0,1;pure=2;cutoff=3:0.8");
    cmd->add_option("--out", *out, "Write the profile here");
    cmd->add_flag("--quiet", *quiet, "Suppress the construction summary");
    cmd->callback([=, &action] {
      action = [=]() -> int {
        int code = kExitOk;
        ConfigPtr cfg = LoadConfig(*config_path, &code);
        if (!cfg) return code;
        const char* grp = groups->empty() ? nullptr : groups->c_str();
        if (!*quiet) {
          StringHolder summary;
          if (auto st = stahl_construct_summary(cfg.get(), grp, &summary.s);
              st != STAHL_OK) {
            return ReportError(st);
          }
          std::fputs(summary.s, stdout);
        }
        if (!out->empty()) {
          stahl_profile* profile = nullptr;
          if (auto st = stahl_construct(cfg.get(), grp, &profile);
              st != STAHL_OK) {
            return ReportError(st);
          }
          ProfilePtr holder(profile, &stahl_profile_free);
          const std::string full = OutPath(*out);
          if (auto st = stahl_profile_save(holder.get(), full.c_str());
              st != STAHL_OK) {
            return ReportError(st);
          }
        }
        return kExitOk;
      };
    });
  }

  // ----- verify ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "verify", "Audit a strategy profile against a market");
    auto config_path = std::make_shared<std::string>();
    auto profile_path = std::make_shared<std::string>();
    auto groups = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto tol = std::make_shared<stahl_tolerances>(stahl_tolerances_default());
    cmd->add_option("--config", *config_path, "Market description file")
        ->required();
    cmd->add_option("--profile", *profile_path,
                    "Profile to audit (default: construct one)");
    cmd->add_option("--groups", *groups,
                    "Seller arrangement when constructing");
    cmd->add_option("--tol-deviation", tol->deviation_rel,
                    "Deviation-gain tolerance, relative to the reserve");
    cmd->add_option("--tol-profit", tol->profit_rel,
                    "On-support profit variation tolerance");
    cmd->add_option("--grid", tol->grid, "Best-response grid size");
    cmd->add_option("--out", *out, "Write the report here (default stdout)");
    cmd->callback([=, &action] {
      action = [=]() -> int {
        int code = kExitOk;
        ConfigPtr cfg = LoadConfig(*config_path, &code);
        if (!cfg) return code;
        ProfilePtr profile =
            ObtainProfile(cfg.get(), *profile_path, *groups, &code);
        if (!profile) return code;
        stahl_report* report = nullptr;
        if (auto st =
                stahl_verify(profile.get(), cfg.get(), tol.get(), &report);
            st != STAHL_OK) {
          return ReportError(st);
        }
        ReportPtr holder(report, &stahl_report_free);
        StringHolder text;
        if (auto st = stahl_report_text(holder.get(), &text.s);
            st != STAHL_OK) {
          return ReportError(st);
        }
        if (!Emit(*out, text.s)) return kExitFailure;
        return stahl_report_passed(holder.get()) ? kExitOk : kExitFailure;
      };
    });
  }

  // ----- simulate ------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "simulate", "Replay demand against a profile and tabulate outcomes");
    auto config_path = std::make_shared<std::string>();
    auto profile_path = std::make_shared<std::string>();
    auto groups = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto histogram = std::make_shared<std::string>();
    auto flags = std::make_shared<SimFlags>();
    cmd->add_option("--config", *config_path, "Market description file")
        ->required();
    cmd->add_option("--profile", *profile_path,
                    "Profile to replay (default: construct one)");
    cmd->add_option("--groups", *groups,
                    "Seller arrangement when constructing");
    flags->Register(cmd, "Replications to run (must be positive)");
    cmd->add_option("--out", *out, "Write the summary CSV here");
    cmd->add_option("--histogram", *histogram,
                    "Also write the price-paid histogram CSV here");
    cmd->callback([=, &action] {
      action = [=]() -> int {
        int code = kExitOk;
        ConfigPtr cfg = LoadConfig(*config_path, &code);
        if (!cfg) return code;
        ProfilePtr profile =
            ObtainProfile(cfg.get(), *profile_path, *groups, &code);
        if (!profile) return code;
        stahl_sim_options options = flags->Final();
        stahl_sim* sim = nullptr;
        if (auto st = stahl_simulate(profile.get(), cfg.get(), &options, &sim);
            st != STAHL_OK) {
          return ReportError(st);
        }
        SimPtr holder(sim, &stahl_sim_free);
        StringHolder summary;
        if (auto st = stahl_sim_summary_csv(holder.get(), &summary.s);
            st != STAHL_OK) {
          return ReportError(st);
        }
        if (!Emit(*out, summary.s)) return kExitFailure;
        if (!histogram->empty()) {
          StringHolder hist;
          if (auto st = stahl_sim_histogram_csv(holder.get(), &hist.s);
              st != STAHL_OK) {
            return ReportError(st);
          }
          if (!Emit(*histogram, hist.s)) return kExitFailure;
        }
        return kExitOk;
      };
    });
  }

  // ----- sweep ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "sweep",
        "Construct equilibria across a family of markets and tabulate "
        "prices");
    auto counts_list = std::make_shared<std::string>();
    auto counts = std::make_shared<std::string>();
    auto mu_list = std::make_shared<std::string>();
    auto mu = std::make_shared<double>(0.5);
    auto cost = std::make_shared<double>(0.0);
    auto bound = std::make_shared<double>(0.0);
    auto out = std::make_shared<std::string>();
    auto flags = std::make_shared<SimFlags>();
    flags->options.replications = 0;  // analytic unless --reps is given
    auto* counts_opt = cmd->add_option(
        "--counts-list", *counts_list,
        "Store-count rows to sweep, e.g. 2+2,2+3,2+2+2");
    auto* mu_opt = cmd->add_option(
        "--mu-list", *mu_list, "Shopper fractions to sweep, e.g. 0.1,0.3,0.5");
    counts_opt->excludes(mu_opt);
    cmd->add_option("--counts", *counts,
                    "Fixed store counts for a shopper-fraction sweep, e.g. "
                    "1+2+2");
    cmd->add_option("--mu", *mu,
                    "Fixed shopper fraction for a store-count sweep");
    cmd->add_option("--cost", *cost, "Search cost")->required();
    cmd->add_option("--bound", *bound, "Valuation bound")->required();
    flags->Register(cmd, "Replications per market (0 skips the replay)");
    cmd->add_option("--out", *out, "Write the sweep CSV here");
    cmd->callback([=, &action] {
      action = [=]() -> int {
        stahl_sim_options options = flags->Final();
        const stahl_sim_options* sim =
            options.replications > 0 ? &options : nullptr;
        StringHolder csv;
        stahl_status st;
        if (!counts_list->empty()) {
          st = stahl_sweep_counts_csv(counts_list->c_str(), *mu, *cost,
                                      *bound, sim, &csv.s);
        } else if (!mu_list->empty()) {
          if (counts->empty()) {
            std::fprintf(stderr,
                         "error: --mu-list requires --counts\n");
            return kExitUsage;
          }
          st = stahl_sweep_mu_csv(counts->c_str(), mu_list->c_str(), *cost,
                                  *bound, sim, &csv.s);
        } else {
          std::fprintf(stderr,
                       "error: one of --counts-list or --mu-list is "
                       "required\n");
          return kExitUsage;
        }
        if (st != STAHL_OK) return ReportError(st);
        if (!Emit(*out, csv.s)) return kExitFailure;
        return kExitOk;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return action ? action() : kExitUsage;
}
