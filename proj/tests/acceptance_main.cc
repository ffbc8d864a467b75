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

// End-to-end acceptance gate: nine criteria covering the closed-form
// examples, randomized property suites, oracle sensitivity, scaling laws,
// and simulator determinism. Prints one [PASS]/[FAIL] line per criterion
// and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "stahl/belief.hpp"
#include "stahl/construct.hpp"
#include "stahl/error.hpp"
#include "stahl/io.hpp"
#include "stahl/numeric.hpp"
#include "stahl/payoff.hpp"
#include "stahl/simulate.hpp"
#include "stahl/types.hpp"
#include "stahl/verify.hpp"

namespace stahl {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void Require(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  Outcome Finish(const std::string& ok_detail) {
    if (out_.pass) out_.detail = ok_detail;
    return out_;
  }

 private:
  Outcome out_;
};

double RelErr(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

double Elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string Fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double MaxGain(const VerificationReport& rep) {
  double g = 0.0;
  for (const Deviation& d : rep.best_deviations) g = std::max(g, d.gain);
  return g;
}

PricingStrategy ShiftSupportBottom(const PricingStrategy& s, double new_lo) {
  ParamCdf tab = ParamCdf::Resample(s.cdf(), 2048);
  std::vector<double> knots = tab.knots();
  std::vector<double> values = tab.knot_values();
  double lo = tab.lo(), hi = tab.hi();
  for (double& p : knots) p = new_lo + (p - lo) * (hi - new_lo) / (hi - lo);
  return PricingStrategy::MixedFull(ParamCdf::Tabulated(knots, values),
                                    s.mass_at_top());
}

PricingStrategy MoveMassToTop(const PricingStrategy& s, double extra) {
  ParamCdf tab = ParamCdf::Resample(s.cdf(), 2048);
  std::vector<double> values = tab.knot_values();
  double scale = (tab.top_value() - extra) / tab.top_value();
  for (double& v : values) v *= scale;
  return PricingStrategy::MixedFull(ParamCdf::Tabulated(tab.knots(), values),
                                    s.mass_at_top() + extra);
}

// ---------------------------------------------------------------------------
// Criterion 1: three equal sellers, shopper fraction 1/4, unit search cost;
// one pure seller and two mixers reproduce the closed-form solution.
// ---------------------------------------------------------------------------
Outcome Criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  MarketConfig cfg;
  cfg.store_counts = {1, 1, 1};
  cfg.shopper_fraction = 0.25;
  cfg.search_cost = 1.0;
  cfg.valuation_bound = 50.0;
  GroupSpec groups;
  groups.full_mixers = {0, 1};
  groups.pure_reserve = {2};
  ConstructedEquilibrium eq = Construct(cfg, &groups);
  double reserve = eq.profile.reserve_price;
  double want_reserve = 1.0 / (1.0 - std::log(2.0));

  ck.Require(RelErr(reserve, want_reserve) < 1e-12,
             "reserve != 1/(1-ln 2)");
  for (int i : {0, 1}) {
    const PricingStrategy& s = eq.profile.strategies[i];
    ck.Require(RelErr(s.support_lo(), reserve / 2.0) < 1e-12,
               "mixing support must start at reserve/2");
    ck.Require(RelErr(s.support_hi(), reserve) < 1e-12,
               "mixing support must end at the reserve");
    for (int g = 1; g < 32; ++g) {
      double p = reserve / 2.0 + (reserve / 2.0) * g / 32.0;
      ck.Require(std::fabs(s.cdf().value(p) - (2.0 - reserve / p)) < 1e-9,
                 "mixing distribution != 2 - reserve/p");
    }
    double e = s.expected_price();
    ck.Require(std::fabs(e - reserve * std::log(2.0)) < 1e-8,
               "mixer expected price != reserve * ln 2");
    ck.Require(std::fabs(e - (reserve - cfg.search_cost)) < 1e-8,
               "mixer expected price != reserve - cost");
  }
  for (int i = 0; i < 3; ++i)
    ck.Require(std::fabs(eq.analytic_profit[i] - reserve / 4.0) < 1e-9,
               "per-seller profit != reserve/4");
  double dt = Elapsed(t0);
  ck.Require(dt < 1.0, "runtime exceeded 1 s");
  return ck.Finish("reserve=" + Fmt(reserve) + " profits=reserve/4, " +
                   Fmt(dt) + " s");
}

// ---------------------------------------------------------------------------
// Criterion 2: counts [3,1,1], shopper fraction 1/6: profit split
// (1/2, 1/6, 1/6) of the reserve, richer than the symmetric 3/4 total;
// verifier passes and a 1e5-replication run agrees within 3 standard errors.
// ---------------------------------------------------------------------------
Outcome Criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  MarketConfig cfg;
  cfg.store_counts = {3, 1, 1};
  cfg.shopper_fraction = 1.0 / 6.0;
  cfg.search_cost = 1.0;
  cfg.valuation_bound = 20.0;
  ConstructedEquilibrium eq = Construct(cfg);
  double reserve = eq.profile.reserve_price;

  double want[3] = {reserve / 2.0, reserve / 6.0, reserve / 6.0};
  for (int i = 0; i < 3; ++i)
    ck.Require(RelErr(eq.analytic_profit[i], want[i]) < 1e-9,
               "profit split != (1/2, 1/6, 1/6) of the reserve");
  double total = eq.analytic_profit[0] + eq.analytic_profit[1] +
                 eq.analytic_profit[2];
  ck.Require(RelErr(total, 5.0 / 6.0 * reserve) < 1e-9,
             "total profit != 5/6 of the reserve");
  ck.Require(total / reserve > 0.75,
             "profit share must beat the symmetric 3/4");

  VerificationReport rep = Verify(eq.profile, cfg);
  ck.Require(rep.passed, "verifier rejected the constructed profile");

  SimOptions opts;
  opts.replications = 100000;
  opts.seed = 20260815;
  opts.threads = 4;
  SimulationResult sim = Simulate(eq.profile, cfg, opts);
  for (int i = 0; i < 3; ++i) {
    double gap = std::fabs(sim.sellers[i].profit_mean - eq.analytic_profit[i]);
    ck.Require(gap <= 3.0 * sim.sellers[i].profit_se + 1e-12,
               "simulated profit off by more than 3 SE");
  }
  ck.Require(sim.first_store_fraction == 1.0,
             "searchers must buy at the first store");
  double dt = Elapsed(t0);
  ck.Require(dt < 30.0, "runtime exceeded 30 s");
  return ck.Finish("total=5/6*reserve, sim within 3 SE, " + Fmt(dt) + " s");
}

// ---------------------------------------------------------------------------
// Criterion 3: worked three-store belief example.
// ---------------------------------------------------------------------------
Outcome Criterion3() {
  Checker ck;
  auto uniform = [](double lo, double hi) {
    return PricingStrategy::MixedFull(
        ParamCdf::Tabulated({lo, hi}, {0.0, 1.0}), 0.0);
  };
  BeliefState b;
  b.entries = {{uniform(1.0, 9.0), 1},
               {uniform(5.0, 9.0), 1},
               {PricingStrategy::Pure(7.0), 1}};
  const double eps = 1e-9;
  const double c = 0.9;

  double at_atom = ContinuationPrice(7.0, b, eps);
  ck.Require(at_atom == 6.0, "continuation after observing 7 must be 6.0");
  double off_atom = ContinuationPrice(7.0 + 1e-4, b, eps);
  ck.Require(std::fabs(off_atom - 19.0 / 3.0) < 1e-12,
             "continuation just above 7 must be 19/3");
  ck.Require(ShouldContinue(7.0, b, c, 2, eps),
             "searcher must keep searching at 7");
  ck.Require(!ShouldContinue(7.0 + 1e-4, b, c, 2, eps),
             "searcher must stop just above 7");
  return ck.Finish("continuation 6.0 / 19/3, decisions continue/stop");
}

// ---------------------------------------------------------------------------
// Randomized market generators (counter-based, reproducible).
// ---------------------------------------------------------------------------
MarketConfig RandomMarket(CounterRng& rng, std::uint64_t& ctr,
                          bool unique_smallest) {
  for (;;) {
    MarketConfig cfg;
    int n = 2 + static_cast<int>(rng.Uniform(ctr++) * 5);  // 2..6 sellers
    cfg.store_counts.resize(n);
    for (int i = 0; i < n; ++i)
      cfg.store_counts[i] = 1 + static_cast<int>(rng.Uniform(ctr++) * 10);
    int min_count = *std::min_element(cfg.store_counts.begin(),
                                      cfg.store_counts.end());
    int at_min = 0;
    for (int c : cfg.store_counts) at_min += c == min_count;
    if (unique_smallest != (at_min == 1)) continue;
    cfg.shopper_fraction = 0.05 + 0.85 * rng.Uniform(ctr++);
    cfg.search_cost = 1.0;
    cfg.valuation_bound = 1e6;
    return cfg;
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: unique-smallest property suite over 20 random markets.
// ---------------------------------------------------------------------------
Outcome Criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  CounterRng rng(20260815, 4);
  std::uint64_t ctr = 0;
  int done = 0;
  while (done < 20) {
    MarketConfig cfg = RandomMarket(rng, ctr, /*unique_smallest=*/true);
    ConstructedEquilibrium eq;
    try {
      eq = Construct(cfg);
    } catch (const StahlError&) {
      continue;  // kappa >= 1 or similar: market out of scope
    }
    if (eq.diagnostics.kappa >= 1.0) continue;
    ++done;

    DerivedConstants d = Derive(cfg);
    int m = d.smallest[0];
    double reserve = eq.profile.reserve_price;

    VerificationReport rep = Verify(eq.profile, cfg);
    ck.Require(rep.passed, "verifier rejected a constructed profile");
    ck.Require(MaxGain(rep) < 1e-6 * reserve,
               "deviation gap above 1e-6 of the reserve");

    const PricingStrategy& sm = eq.profile.strategies[m];
    ck.Require(sm.cdf().value(sm.support_lo()) < 1e-12,
               "smallest seller's distribution must start at 0");
    ck.Require(std::fabs(sm.cdf().value(reserve) - 1.0) < 1e-9,
               "smallest seller's distribution must reach 1");
    ck.Require(sm.mass_at_top() == 0.0,
               "smallest seller must not carry an atom");

    // The mixing second-smallest seller and its reserve atom.
    int j = -1;
    for (int i = 0; i < eq.profile.sellers(); ++i) {
      if (i == m) continue;
      if (eq.profile.strategies[i].mixed()) j = i;
    }
    ck.Require(j >= 0, "a second-smallest seller must mix");
    if (j >= 0) {
      const PricingStrategy& sj = eq.profile.strategies[j];
      double want_mass = (d.searcher_share[j] - d.searcher_share[m]) /
                         (cfg.shopper_fraction + d.searcher_share[j]);
      ck.Require(std::fabs(sj.mass_at_top() - want_mass) < 1e-9,
                 "reserve atom mass formula violated");
      double lo = sj.support_lo();
      for (int g = 1; g < 24; ++g) {
        double p = lo + (reserve - lo) * g / 24.0;
        ck.Require(sj.cdf().value(p) < sm.cdf().value(p),
                   "larger mixer's distribution must sit below");
        ck.Require(sm.density(p) > sj.density(p),
                   "smallest seller must discount more densely");
      }
    }

    double ppb_m = eq.analytic_profit[m] / cfg.store_counts[m];
    for (int i = 0; i < eq.profile.sellers(); ++i) {
      if (i == m) continue;
      ck.Require(ppb_m > eq.analytic_profit[i] / cfg.store_counts[i],
                 "smallest seller must earn the top profit per store");
    }
  }
  double dt = Elapsed(t0);
  ck.Require(dt < 120.0, "runtime exceeded 2 min");
  return ck.Finish("20 random unique-smallest markets, " + Fmt(dt) + " s");
}

// ---------------------------------------------------------------------------
// Criterion 5: symmetric play across unequal sellers always yields an
// impossibility witness and fails verification.
// ---------------------------------------------------------------------------
Outcome Criterion5() {
  Checker ck;
  MarketConfig cfg;
  cfg.store_counts = {3, 1, 1};
  cfg.shopper_fraction = 1.0 / 6.0;
  cfg.search_cost = 1.0;
  cfg.valuation_bound = 20.0;
  CounterRng rng(20260815, 5);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 10; ++trial) {
    double reserve = 2.0 + 3.0 * rng.Uniform(ctr++);
    double lo = reserve * (0.3 + 0.3 * rng.Uniform(ctr++));
    std::vector<double> innards;
    for (int k = 0; k < 4; ++k) innards.push_back(rng.Uniform(ctr++));
    std::sort(innards.begin(), innards.end());
    std::vector<double> knots{lo};
    std::vector<double> values{0.0};
    for (double u : innards) {
      knots.push_back(lo + (reserve - lo) * (0.1 + 0.8 * u));
      values.push_back(u);
    }
    knots.push_back(reserve);
    values.push_back(1.0);
    PricingStrategy shared = PricingStrategy::MixedFull(
        ParamCdf::Tabulated(knots, values), 0.0);
    StrategyProfile profile;
    profile.reserve_price = reserve;
    profile.strategies = {shared, shared, shared};

    SymmetryWitness w = NoSymmetricEquilibriumWitness(profile, cfg);
    ck.Require(w.found, "witness must exist for unequal sellers");
    ck.Require(w.residual > 1e-8, "witness residual too small");
    VerificationReport rep = Verify(profile, cfg);
    ck.Require(!rep.passed, "verifier must reject symmetric play");
  }
  return ck.Finish("10 symmetric profiles witnessed and rejected");
}

// ---------------------------------------------------------------------------
// Criterion 6: perturbed equilibria are rejected with a quantified gain.
// ---------------------------------------------------------------------------
Outcome Criterion6() {
  Checker ck;
  struct Family {
    const char* name;
    MarketConfig cfg;
    GroupSpec groups;
    bool use_groups;
  };
  std::vector<Family> families;
  {
    Family f;
    f.name = "unique-smallest";
    f.cfg.store_counts = {1, 2, 2};
    f.cfg.shopper_fraction = 0.2;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 10.0;
    f.use_groups = false;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "shared-smallest";
    f.cfg.store_counts = {3, 1, 1};
    f.cfg.shopper_fraction = 1.0 / 6.0;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 20.0;
    f.use_groups = false;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "pure-reserve-group";
    f.cfg.store_counts = {1, 1, 1};
    f.cfg.shopper_fraction = 0.25;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 50.0;
    f.groups.full_mixers = {0, 1};
    f.groups.pure_reserve = {2};
    f.use_groups = true;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "cutoff-group";
    f.cfg.store_counts = {1, 1, 1};
    f.cfg.shopper_fraction = 0.25;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 50.0;
    f.groups.full_mixers = {0, 1};
    f.groups.cutoffs = {{2, 0.8}};
    f.use_groups = true;
    families.push_back(f);
  }

  for (const Family& f : families) {
    ConstructedEquilibrium eq =
        Construct(f.cfg, f.use_groups ? &f.groups : nullptr);
    double reserve = eq.profile.reserve_price;
    VerificationReport clean = Verify(eq.profile, f.cfg);
    ck.Require(clean.passed,
               std::string(f.name) + ": unperturbed profile must pass");

    // Raise the bottom of every full mixer's support by 2%.
    StrategyProfile lifted = eq.profile;
    for (PricingStrategy& s : lifted.strategies)
      if (s.kind() == StrategyKind::kMixedFull)
        s = ShiftSupportBottom(s, s.support_lo() * 1.02);
    VerificationReport lifted_rep = Verify(lifted, f.cfg);
    ck.Require(!lifted_rep.passed,
               std::string(f.name) + ": lifted bottom must fail");
    ck.Require(MaxGain(lifted_rep) > 1e-4 * reserve,
               std::string(f.name) + ": lifted bottom gain too small");

    // Move 5% of the first full mixer's continuous mass onto the reserve.
    StrategyProfile parked = eq.profile;
    for (PricingStrategy& s : parked.strategies) {
      if (s.kind() == StrategyKind::kMixedFull) {
        s = MoveMassToTop(s, 0.05);
        break;
      }
    }
    VerificationReport parked_rep = Verify(parked, f.cfg);
    ck.Require(!parked_rep.passed,
               std::string(f.name) + ": parked mass must fail");
    ck.Require(MaxGain(parked_rep) > 1e-4 * reserve,
               std::string(f.name) + ": parked mass gain too small");
  }
  return ck.Finish("4 families x 2 perturbations rejected, originals pass");
}

// ---------------------------------------------------------------------------
// Criterion 7: equal profit per store across 20 random markets with two or
// more smallest sellers.
// ---------------------------------------------------------------------------
Outcome Criterion7() {
  Checker ck;
  CounterRng rng(20260815, 7);
  std::uint64_t ctr = 0;
  int done = 0;
  while (done < 20) {
    MarketConfig cfg = RandomMarket(rng, ctr, /*unique_smallest=*/false);
    ConstructedEquilibrium eq;
    try {
      eq = Construct(cfg);
    } catch (const StahlError&) {
      continue;
    }
    if (eq.diagnostics.kappa >= 1.0) continue;
    ++done;

    int total_stores = 0;
    for (int c : cfg.store_counts) total_stores += c;
    double want =
        eq.profile.reserve_price * (1.0 - cfg.shopper_fraction) / total_stores;
    for (int i = 0; i < eq.profile.sellers(); ++i) {
      double ppb = eq.analytic_profit[i] / cfg.store_counts[i];
      ck.Require(RelErr(ppb, want) < 1e-9,
                 "profit per store != reserve (1-mu) / stores");
      ck.Require(RelErr(eq.analytic_profit[i], cfg.store_counts[i] * want) <
                     1e-9,
                 "seller profit != count * profit-per-store");
    }
  }
  return ck.Finish("20 random shared-smallest markets obey the law");
}

// ---------------------------------------------------------------------------
// Criterion 8: scaling the search cost scales every price linearly.
// ---------------------------------------------------------------------------
Outcome Criterion8() {
  Checker ck;
  struct Family {
    const char* name;
    MarketConfig cfg;
    GroupSpec groups;
    bool use_groups;
  };
  std::vector<Family> families;
  {
    Family f;
    f.name = "all-mix";
    f.cfg.store_counts = {1, 1, 1};
    f.cfg.shopper_fraction = 0.25;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 50.0;
    f.use_groups = false;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "unique-smallest";
    f.cfg.store_counts = {1, 2, 2};
    f.cfg.shopper_fraction = 0.2;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 100.0;
    f.use_groups = false;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "shared-smallest";
    f.cfg.store_counts = {3, 1, 1};
    f.cfg.shopper_fraction = 1.0 / 6.0;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 100.0;
    f.use_groups = false;
    families.push_back(f);
  }
  {
    Family f;
    f.name = "cutoff-group";
    f.cfg.store_counts = {1, 1, 1};
    f.cfg.shopper_fraction = 0.25;
    f.cfg.search_cost = 1.0;
    f.cfg.valuation_bound = 100.0;
    f.groups.full_mixers = {0, 1};
    f.groups.cutoffs = {{2, 0.8}};
    f.use_groups = true;
    families.push_back(f);
  }

  for (const Family& f : families) {
    ConstructedEquilibrium base =
        Construct(f.cfg, f.use_groups ? &f.groups : nullptr);
    for (double lambda : {0.1, 10.0}) {
      MarketConfig scaled = f.cfg;
      scaled.search_cost *= lambda;
      scaled.valuation_bound *= lambda;
      ConstructedEquilibrium eq =
          Construct(scaled, f.use_groups ? &f.groups : nullptr);
      ck.Require(RelErr(eq.profile.reserve_price,
                        lambda * base.profile.reserve_price) < 1e-9,
                 std::string(f.name) + ": reserve must scale");
      ck.Require(RelErr(eq.lowest_price, lambda * base.lowest_price) < 1e-9,
                 std::string(f.name) + ": lowest price must scale");
      for (int i = 0; i < eq.profile.sellers(); ++i) {
        ck.Require(RelErr(eq.profile.strategies[i].support_lo(),
                          lambda * base.profile.strategies[i].support_lo()) <
                       1e-9,
                   std::string(f.name) + ": support bottom must scale");
        ck.Require(RelErr(eq.profile.strategies[i].support_hi(),
                          lambda * base.profile.strategies[i].support_hi()) <
                       1e-9,
                   std::string(f.name) + ": support top must scale");
      }
    }
  }
  return ck.Finish("4 families scale linearly under lambda in {0.1, 10}");
}

// ---------------------------------------------------------------------------
// Criterion 9: serial and parallel runs with one seed emit identical CSV.
// ---------------------------------------------------------------------------
Outcome Criterion9() {
  Checker ck;
  MarketConfig cfg;
  cfg.store_counts = {1, 2, 2};
  cfg.shopper_fraction = 0.2;
  cfg.search_cost = 1.0;
  cfg.valuation_bound = 10.0;
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 60000;
  opts.seed = 99;
  opts.threads = 1;
  SimulationResult serial = Simulate(eq.profile, cfg, opts);
  opts.threads = 4;
  SimulationResult parallel = Simulate(eq.profile, cfg, opts);
  ck.Require(SimulationSummaryCsv(serial) == SimulationSummaryCsv(parallel),
             "summary CSV differs between serial and parallel runs");
  ck.Require(
      SimulationHistogramCsv(serial) == SimulationHistogramCsv(parallel),
      "histogram CSV differs between serial and parallel runs");
  return ck.Finish("bit-identical CSV, 1 vs 4 threads, 60000 replications");
}

}  // namespace
}  // namespace stahl

int main() {
  using stahl::Outcome;
  struct Entry {
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"closed-form benchmark (two mixers + pure seller)", stahl::Criterion1},
      {"chain-store benchmark [3,1,1]", stahl::Criterion2},
      {"worked belief example", stahl::Criterion3},
      {"unique-smallest property suite", stahl::Criterion4},
      {"no symmetric equilibrium witness", stahl::Criterion5},
      {"oracle sensitivity to perturbations", stahl::Criterion6},
      {"equal profit-per-store law", stahl::Criterion7},
      {"search-cost homogeneity", stahl::Criterion8},
      {"simulator determinism", stahl::Criterion9},
  };
  int failures = 0;
  for (size_t i = 0; i < sizeof entries / sizeof entries[0]; ++i) {
    Outcome out;
    try {
      out = entries[i].fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s — %s\n", out.pass ? "PASS" : "FAIL",
                i + 1, entries[i].label, out.detail.c_str());
    if (!out.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("acceptance: all 9 criteria passed\n");
  return 0;
}
