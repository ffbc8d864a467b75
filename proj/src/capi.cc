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

#include "stahlsearch.h"

#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stahl/construct.hpp"
#include "stahl/error.hpp"
#include "stahl/io.hpp"
#include "stahl/simulate.hpp"
#include "stahl/types.hpp"
#include "stahl/verify.hpp"

struct stahl_config {
  stahl::MarketConfig config;
};
struct stahl_profile {
  stahl::StrategyProfile profile;
};
struct stahl_report {
  stahl::VerificationReport report;
};
struct stahl_sim {
  stahl::SimulationResult result;
};

namespace {

thread_local std::string g_last_error;

stahl_status StatusOf(stahl::ErrorCode code) {
  using stahl::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return STAHL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInvalidConfig: return STAHL_ERR_INVALID_CONFIG;
    case ErrorCode::kInvalidStrategy: return STAHL_ERR_INVALID_STRATEGY;
    case ErrorCode::kInvalidProfile: return STAHL_ERR_INVALID_PROFILE;
    case ErrorCode::kConstructFailure: return STAHL_ERR_CONSTRUCT;
    case ErrorCode::kBeliefInconsistent: return STAHL_ERR_BELIEF;
    case ErrorCode::kNumericFailure: return STAHL_ERR_NUMERIC;
    case ErrorCode::kParseError: return STAHL_ERR_PARSE;
    case ErrorCode::kIoError: return STAHL_ERR_IO;
  }
  return STAHL_ERR_INTERNAL;
}

// Runs fn, mapping exceptions onto status codes and the thread-local
// message. fn returns STAHL_OK on its own success path.
template <typename Fn>
stahl_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const stahl::StahlError& e) {
    g_last_error = e.what();
    return StatusOf(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STAHL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return STAHL_ERR_INTERNAL;
  }
}

stahl_status RequireArgs(std::initializer_list<const void*> args) {
  for (const void* a : args) {
    if (a == nullptr) {
      g_last_error = "null argument";
      return STAHL_ERR_INVALID_ARGUMENT;
    }
  }
  return STAHL_OK;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const stahl::GroupSpec* MaybeGroups(const char* groups,
                                    stahl::GroupSpec* storage) {
  if (groups == nullptr || *groups == '\0') return nullptr;
  *storage = stahl::ParseGroups(groups);
  return storage;
}

std::vector<int> ParseCountsRow(const std::string& text) {
  std::vector<int> row;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, '+')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      row.push_back(v);
    } catch (const std::exception&) {
      stahl::Fail(stahl::ErrorCode::kParseError,
                  "bad store count '" + tok + "' in '" + text + "'");
    }
  }
  if (row.empty()) {
    stahl::Fail(stahl::ErrorCode::kParseError,
                "empty store-count row in '" + text + "'");
  }
  return row;
}

stahl::SimOptions ToSimOptions(const stahl_sim_options* options) {
  stahl::SimOptions opts;
  if (options != nullptr) {
    opts.replications = options->replications;
    opts.seed = options->seed;
    opts.threads = options->threads;
    opts.agent_mode = options->agent_mode != 0;
    opts.agents = options->agents;
    opts.histogram_bins = options->histogram_bins;
  }
  return opts;
}

}  // namespace

extern "C" {

const char* stahl_version(void) { return "stahlsearch 1.0.0"; }

const char* stahl_last_error(void) { return g_last_error.c_str(); }

void stahl_string_free(char* s) { std::free(s); }

stahl_status stahl_config_parse(const char* text, stahl_config** out) {
  if (auto st = RequireArgs({text, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = new stahl_config{stahl::ConfigFromText(text)};
    return STAHL_OK;
  });
}

stahl_status stahl_config_load(const char* path, stahl_config** out) {
  if (auto st = RequireArgs({path, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = new stahl_config{stahl::ConfigFromText(stahl::ReadTextFile(path))};
    return STAHL_OK;
  });
}

stahl_status stahl_config_to_text(const stahl_config* config, char** out) {
  if (auto st = RequireArgs({config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::ConfigToText(config->config));
    return STAHL_OK;
  });
}

stahl_status stahl_config_describe(const stahl_config* config, char** out) {
  if (auto st = RequireArgs({config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::DescribeConfig(config->config));
    return STAHL_OK;
  });
}

void stahl_config_free(stahl_config* config) { delete config; }

stahl_status stahl_construct(const stahl_config* config, const char* groups,
                             stahl_profile** out) {
  if (auto st = RequireArgs({config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::GroupSpec storage;
    const stahl::GroupSpec* spec = MaybeGroups(groups, &storage);
    stahl::ConstructedEquilibrium eq = stahl::Construct(config->config, spec);
    *out = new stahl_profile{std::move(eq.profile)};
    return STAHL_OK;
  });
}

stahl_status stahl_construct_summary(const stahl_config* config,
                                     const char* groups, char** out) {
  if (auto st = RequireArgs({config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::GroupSpec storage;
    const stahl::GroupSpec* spec = MaybeGroups(groups, &storage);
    stahl::ConstructedEquilibrium eq = stahl::Construct(config->config, spec);
    *out = CopyString(stahl::DescribeConstruction(eq, config->config));
    return STAHL_OK;
  });
}

stahl_status stahl_profile_parse(const char* text, stahl_profile** out) {
  if (auto st = RequireArgs({text, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = new stahl_profile{stahl::ProfileFromText(text)};
    return STAHL_OK;
  });
}

stahl_status stahl_profile_load(const char* path, stahl_profile** out) {
  if (auto st = RequireArgs({path, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out =
        new stahl_profile{stahl::ProfileFromText(stahl::ReadTextFile(path))};
    return STAHL_OK;
  });
}

stahl_status stahl_profile_to_text(const stahl_profile* profile, char** out) {
  if (auto st = RequireArgs({profile, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::ProfileToText(profile->profile));
    return STAHL_OK;
  });
}

stahl_status stahl_profile_save(const stahl_profile* profile,
                                const char* path) {
  if (auto st = RequireArgs({profile, path}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::WriteTextFile(path, stahl::ProfileToText(profile->profile));
    return STAHL_OK;
  });
}

void stahl_profile_free(stahl_profile* profile) { delete profile; }

stahl_tolerances stahl_tolerances_default(void) {
  stahl::Tolerances tol;
  stahl_tolerances out;
  out.deviation_rel = tol.deviation_rel;
  out.profit_rel = tol.profit_rel;
  out.grid = tol.grid;
  return out;
}

stahl_status stahl_verify(const stahl_profile* profile,
                          const stahl_config* config,
                          const stahl_tolerances* tolerances,
                          stahl_report** out) {
  if (auto st = RequireArgs({profile, config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::Tolerances tol;
    if (tolerances != nullptr) {
      tol.deviation_rel = tolerances->deviation_rel;
      tol.profit_rel = tolerances->profit_rel;
      tol.grid = tolerances->grid;
    }
    *out = new stahl_report{
        stahl::Verify(profile->profile, config->config, tol)};
    return STAHL_OK;
  });
}

int stahl_report_passed(const stahl_report* report) {
  return report != nullptr && report->report.passed ? 1 : 0;
}

stahl_status stahl_report_text(const stahl_report* report, char** out) {
  if (auto st = RequireArgs({report, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::ReportToText(report->report));
    return STAHL_OK;
  });
}

void stahl_report_free(stahl_report* report) { delete report; }

stahl_sim_options stahl_sim_options_default(void) {
  stahl::SimOptions opts;
  stahl_sim_options out;
  out.replications = opts.replications;
  out.seed = opts.seed;
  out.threads = opts.threads;
  out.agent_mode = opts.agent_mode ? 1 : 0;
  out.agents = opts.agents;
  out.histogram_bins = opts.histogram_bins;
  return out;
}

stahl_status stahl_simulate(const stahl_profile* profile,
                            const stahl_config* config,
                            const stahl_sim_options* options,
                            stahl_sim** out) {
  if (auto st = RequireArgs({profile, config, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = new stahl_sim{stahl::Simulate(profile->profile, config->config,
                                         ToSimOptions(options))};
    return STAHL_OK;
  });
}

stahl_status stahl_sim_summary_csv(const stahl_sim* sim, char** out) {
  if (auto st = RequireArgs({sim, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::SimulationSummaryCsv(sim->result));
    return STAHL_OK;
  });
}

stahl_status stahl_sim_histogram_csv(const stahl_sim* sim, char** out) {
  if (auto st = RequireArgs({sim, out}); st != STAHL_OK) return st;
  return Guard([&] {
    *out = CopyString(stahl::SimulationHistogramCsv(sim->result));
    return STAHL_OK;
  });
}

void stahl_sim_free(stahl_sim* sim) { delete sim; }

stahl_status stahl_sweep_counts_csv(const char* counts_list,
                                    double shopper_fraction,
                                    double search_cost, double valuation_bound,
                                    const stahl_sim_options* options,
                                    char** out) {
  if (auto st = RequireArgs({counts_list, out}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::SweepSpec spec;
    spec.mu = shopper_fraction;
    spec.search_cost = search_cost;
    spec.valuation_bound = valuation_bound;
    std::istringstream in(counts_list);
    std::string row;
    while (std::getline(in, row, ',')) {
      if (!row.empty()) spec.counts_axis.push_back(ParseCountsRow(row));
    }
    stahl::SimOptions opts = ToSimOptions(options);
    const stahl::SimOptions* sim =
        (options != nullptr && options->replications > 0) ? &opts : nullptr;
    *out = CopyString(stahl::SweepCsv(stahl::Sweep(spec, sim)));
    return STAHL_OK;
  });
}

stahl_status stahl_sweep_mu_csv(const char* counts, const char* mu_list,
                                double search_cost, double valuation_bound,
                                const stahl_sim_options* options, char** out) {
  if (auto st = RequireArgs({counts, mu_list, out}); st != STAHL_OK) return st;
  return Guard([&] {
    stahl::SweepSpec spec;
    spec.search_cost = search_cost;
    spec.valuation_bound = valuation_bound;
    spec.fixed_counts = ParseCountsRow(counts);
    std::istringstream in(mu_list);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        spec.mu_axis.push_back(v);
      } catch (const std::exception&) {
        stahl::Fail(stahl::ErrorCode::kParseError,
                    "bad shopper fraction '" + tok + "'");
      }
    }
    stahl::SimOptions opts = ToSimOptions(options);
    const stahl::SimOptions* sim =
        (options != nullptr && options->replications > 0) ? &opts : nullptr;
    *out = CopyString(stahl::SweepCsv(stahl::Sweep(spec, sim)));
    return STAHL_OK;
  });
}

}  // extern "C"
