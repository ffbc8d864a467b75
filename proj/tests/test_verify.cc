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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "stahl/construct.hpp"
#include "stahl/types.hpp"
#include "stahl/verify.hpp"

namespace stahl {
namespace {

const char* kCheckOrder[] = {
    "support_bound",    "atoms_at_reserve", "common_supremum",
    "interval_coverage", "profit_constancy", "no_deviation",
    "reserve_rational", "belief_consistency", "profit_law",
};

MarketConfig UniqueSmallest122() {
  MarketConfig c;
  c.store_counts = {1, 2, 2};
  c.shopper_fraction = 0.2;
  c.search_cost = 1.0;
  c.valuation_bound = 10.0;
  return c;
}

MarketConfig Extended223() {
  MarketConfig c;
  c.store_counts = {2, 2, 3};
  c.shopper_fraction = 0.3;
  c.search_cost = 0.5;
  c.valuation_bound = 12.0;
  return c;
}

const CheckResult& FindCheck(const VerificationReport& r,
                             const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return c;
  static CheckResult missing;
  REQUIRE(false);
  return missing;
}

// Remap a strategy's continuous part onto [new_lo, old_hi] affinely,
// keeping any atom at the top.
PricingStrategy ShiftSupportBottom(const PricingStrategy& s, double new_lo) {
  ParamCdf tab = ParamCdf::Resample(s.cdf(), 2048);
  std::vector<double> knots = tab.knots();
  std::vector<double> values = tab.knot_values();
  double lo = tab.lo(), hi = tab.hi();
  for (double& p : knots) p = new_lo + (p - lo) * (hi - new_lo) / (hi - lo);
  return PricingStrategy::MixedFull(ParamCdf::Tabulated(knots, values),
                                    s.mass_at_top());
}

// Move `extra` probability mass from the continuous part to an atom at the
// top of the support.
PricingStrategy MoveMassToTop(const PricingStrategy& s, double extra) {
  ParamCdf tab = ParamCdf::Resample(s.cdf(), 2048);
  std::vector<double> values = tab.knot_values();
  double scale = (tab.top_value() - extra) / tab.top_value();
  for (double& v : values) v *= scale;
  return PricingStrategy::MixedFull(ParamCdf::Tabulated(tab.knots(), values),
                                    s.mass_at_top() + extra);
}

TEST_CASE("constructed equilibria pass the audit, checks in fixed order") {
  struct Case {
    MarketConfig cfg;
    const GroupSpec* groups;
  };
  GroupSpec cutoff_groups;
  cutoff_groups.full_mixers = {0, 1};
  cutoff_groups.cutoffs = {{2, 0.8}};
  MarketConfig sym;
  sym.store_counts = {1, 1, 1};
  sym.shopper_fraction = 0.25;
  sym.search_cost = 1.0;
  sym.valuation_bound = 50.0;

  std::vector<Case> cases = {{UniqueSmallest122(), nullptr},
                             {Extended223(), nullptr},
                             {sym, &cutoff_groups}};
  for (const Case& c : cases) {
    ConstructedEquilibrium eq = Construct(c.cfg, c.groups);
    VerificationReport rep = Verify(eq.profile, c.cfg);
    CHECK(rep.passed);
    REQUIRE(rep.checks.size() == 9);
    for (size_t i = 0; i < 9; ++i) CHECK(rep.checks[i].name == kCheckOrder[i]);
    for (const CheckResult& chk : rep.checks) CHECK(chk.passed);
    CHECK(rep.reserve_price == doctest::Approx(eq.profile.reserve_price));
    CHECK(rep.reserve_margin > -1e-9);
    // Best deviations never beat equilibrium profit meaningfully.
    for (const Deviation& d : rep.best_deviations)
      CHECK(d.gain < 1e-6 * rep.reserve_price);
  }
}

TEST_CASE("shifting the support bottom up breaks the equilibrium") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  StrategyProfile bad = eq.profile;
  double new_lo = eq.lowest_price * 1.02;
  bad.strategies[0] = ShiftSupportBottom(bad.strategies[0], new_lo);
  bad.strategies[1] = ShiftSupportBottom(bad.strategies[1], new_lo);
  VerificationReport rep = Verify(bad, cfg);
  CHECK_FALSE(rep.passed);
  // Undercutting the inflated bottom is now profitable enough to report.
  double best_gain = 0.0;
  for (const Deviation& d : rep.best_deviations)
    best_gain = std::max(best_gain, d.gain);
  CHECK(best_gain > 1e-4 * rep.reserve_price);
}

TEST_CASE("moving mixing mass onto the reserve breaks the equilibrium") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  StrategyProfile bad = eq.profile;
  bad.strategies[0] = MoveMassToTop(bad.strategies[0], 0.05);
  VerificationReport rep = Verify(bad, cfg);
  CHECK_FALSE(rep.passed);
  double best_gain = 0.0;
  for (const Deviation& d : rep.best_deviations)
    best_gain = std::max(best_gain, d.gain);
  CHECK(best_gain > 1e-4 * rep.reserve_price);
}

TEST_CASE("named checks flag hand-broken profiles") {
  MarketConfig cfg = Extended223();
  ConstructedEquilibrium eq = Construct(cfg);
  double reserve = eq.profile.reserve_price;

  // A support reaching above the reserve trips the support bound.
  StrategyProfile above = eq.profile;
  above.strategies[2] = PricingStrategy::Pure(reserve * 1.05);
  VerificationReport rep = Verify(above, cfg);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(FindCheck(rep, "support_bound").passed);

  // An atom parked inside the support trips the atom rule.
  StrategyProfile interior_atom = eq.profile;
  interior_atom.strategies[2] =
      PricingStrategy::Pure(0.5 * (eq.lowest_price + reserve));
  rep = Verify(interior_atom, cfg);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(FindCheck(rep, "atoms_at_reserve").passed);

  // Everyone pure at the reserve: undercutting grabs every shopper.
  StrategyProfile all_pure = eq.profile;
  for (int i = 0; i < 3; ++i)
    all_pure.strategies[i] = PricingStrategy::Pure(reserve);
  rep = Verify(all_pure, cfg);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(FindCheck(rep, "no_deviation").passed);
  double best_gain = 0.0;
  for (const Deviation& d : rep.best_deviations)
    best_gain = std::max(best_gain, d.gain);
  CHECK(best_gain > 1e-4 * reserve);
}

TEST_CASE("symmetric play across unequal sellers is witnessed impossible") {
  MarketConfig cfg;
  cfg.store_counts = {3, 1, 1};
  cfg.shopper_fraction = 1.0 / 6.0;
  cfg.search_cost = 1.0;
  cfg.valuation_bound = 20.0;
  // A symmetric profile: every seller mixes over the same distribution.
  MarketConfig helper;
  helper.store_counts = {1, 1, 1};
  helper.shopper_fraction = cfg.shopper_fraction;
  helper.search_cost = cfg.search_cost;
  helper.valuation_bound = cfg.valuation_bound;
  ConstructedEquilibrium sym = Construct(helper);
  StrategyProfile profile = sym.profile;

  SymmetryWitness w = NoSymmetricEquilibriumWitness(profile, cfg);
  CHECK(w.found);
  CHECK(w.residual > 1e-8);
  // The witness names two sellers with different store counts.
  CHECK(cfg.store_counts[w.seller_a] != cfg.store_counts[w.seller_b]);
  double src_a = 0.0, src_b = 0.0;
  {
    DerivedConstants d = Derive(cfg);
    src_a = d.searcher_share[w.seller_a];
    src_b = d.searcher_share[w.seller_b];
  }
  CHECK(w.residual ==
        doctest::Approx(std::fabs((w.price_p - w.price_q) * (src_a - src_b)))
            .epsilon(1e-9));

  // Equal sellers admit symmetric play: no witness exists.
  MarketConfig equal;
  equal.store_counts = {2, 2};
  equal.shopper_fraction = 0.3;
  equal.search_cost = 1.0;
  equal.valuation_bound = 20.0;
  ConstructedEquilibrium eq = Construct(equal);
  SymmetryWitness none = NoSymmetricEquilibriumWitness(eq.profile, equal);
  CHECK_FALSE(none.found);
}

}  // namespace
}  // namespace stahl
