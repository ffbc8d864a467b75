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

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "stahl/construct.hpp"
#include "stahl/error.hpp"
#include "stahl/payoff.hpp"
#include "stahl/simulate.hpp"
#include "stahl/types.hpp"

namespace stahl {
namespace {

MarketConfig UniqueSmallest122() {
  MarketConfig c;
  c.store_counts = {1, 2, 2};
  c.shopper_fraction = 0.2;
  c.search_cost = 1.0;
  c.valuation_bound = 10.0;
  return c;
}

bool SameResults(const SimulationResult& a, const SimulationResult& b) {
  if (a.sellers.size() != b.sellers.size()) return false;
  for (size_t i = 0; i < a.sellers.size(); ++i) {
    if (a.sellers[i].profit_mean != b.sellers[i].profit_mean) return false;
    if (a.sellers[i].profit_se != b.sellers[i].profit_se) return false;
    if (a.sellers[i].quantity_mean != b.sellers[i].quantity_mean) return false;
  }
  if (a.mean_searches != b.mean_searches) return false;
  if (a.first_store_fraction != b.first_store_fraction) return false;
  if (a.searcher_price_mean != b.searcher_price_mean) return false;
  if (a.histogram != b.histogram) return false;
  return true;
}

TEST_CASE("equilibrium play: searchers buy where they land") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 20000;
  opts.seed = 7;
  SimulationResult r = Simulate(eq.profile, cfg, opts);
  // Every posted price is weakly below the reserve: exactly one search.
  CHECK(r.mean_searches == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.first_store_fraction == doctest::Approx(1.0).epsilon(1e-12));
  // Quantities sum to one by conservation.
  double q = 0.0;
  for (const SellerStats& s : r.sellers) q += s.quantity_mean;
  CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("overpriced market: searchers exhaust stores and recall") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  double reserve = eq.profile.reserve_price;
  StrategyProfile sticky = eq.profile;
  for (int i = 0; i < 3; ++i)
    sticky.strategies[i] = PricingStrategy::Pure(reserve * 2.0);
  sticky.reserve_price = reserve;
  SimOptions opts;
  opts.replications = 500;
  opts.seed = 3;
  SimulationResult r = Simulate(sticky, cfg, opts);
  // Nothing clears the reserve; a chain's stores share one price, so a
  // searcher samples one store per seller before giving up.
  CHECK(r.mean_searches == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.first_store_fraction == doctest::Approx(0.0));
  // All prices equal: recall still pays the posted price.
  CHECK(r.searcher_price_mean == doctest::Approx(reserve * 2.0).epsilon(1e-12));
}

TEST_CASE("identical seeds reproduce bit-identical results") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 30000;
  opts.seed = 42;
  SimulationResult a = Simulate(eq.profile, cfg, opts);
  SimulationResult b = Simulate(eq.profile, cfg, opts);
  CHECK(SameResults(a, b));
  opts.seed = 43;
  SimulationResult c = Simulate(eq.profile, cfg, opts);
  CHECK_FALSE(SameResults(a, c));
}

TEST_CASE("thread count never changes the numbers") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 30000;
  opts.seed = 11;
  opts.threads = 1;
  SimulationResult serial = Simulate(eq.profile, cfg, opts);
  opts.threads = 4;
  SimulationResult parallel = Simulate(eq.profile, cfg, opts);
  CHECK(SameResults(serial, parallel));
}

TEST_CASE("simulated profits agree with the analytic equilibrium") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 100000;
  opts.seed = 5;
  opts.threads = 4;
  SimulationResult r = Simulate(eq.profile, cfg, opts);
  for (int i = 0; i < 3; ++i) {
    double gap = std::fabs(r.sellers[i].profit_mean - eq.analytic_profit[i]);
    CHECK(gap < 3.0 * r.sellers[i].profit_se + 1e-9);
  }
  // Searchers pay the mixers' posted prices: mean within a few SE of the
  // share-weighted expected price.
  DerivedConstants d = Derive(cfg);
  double expect = 0.0;
  for (int i = 0; i < 3; ++i)
    expect += d.searcher_share[i] * eq.profile.strategies[i].expected_price();
  expect /= 1.0 - cfg.shopper_fraction;
  CHECK(r.searcher_price_mean == doctest::Approx(expect).epsilon(2e-3));
}

TEST_CASE("price histogram holds one unit of mass") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 5000;
  opts.seed = 9;
  opts.histogram_bins = 32;
  SimulationResult r = Simulate(eq.profile, cfg, opts);
  REQUIRE(r.histogram.size() == 32);
  double mass = std::accumulate(r.histogram.begin(), r.histogram.end(), 0.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.hist_lo <= eq.lowest_price);
  CHECK(r.hist_hi >= eq.profile.reserve_price);
}

TEST_CASE("agent mode tracks the expected-flow quantities") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions flow_opts;
  flow_opts.replications = 40000;
  flow_opts.seed = 13;
  SimulationResult flow = Simulate(eq.profile, cfg, flow_opts);
  SimOptions agent_opts = flow_opts;
  agent_opts.agent_mode = true;
  agent_opts.agents = 400;
  SimulationResult agents = Simulate(eq.profile, cfg, agent_opts);
  CHECK(agents.mean_searches == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(agents.sellers[i].quantity_mean ==
          doctest::Approx(flow.sellers[i].quantity_mean).epsilon(0.05));
  }
}

TEST_CASE("simulation rejects empty work") {
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  SimOptions opts;
  opts.replications = 0;
  CHECK_THROWS_AS(Simulate(eq.profile, cfg, opts), StahlError);
  opts.replications = 10;
  opts.agent_mode = true;
  opts.agents = 0;
  CHECK_THROWS_AS(Simulate(eq.profile, cfg, opts), StahlError);
}

TEST_CASE("sweep over store counts matches single-market analytics") {
  SweepSpec spec;
  spec.mu = 0.2;
  spec.search_cost = 1.0;
  spec.valuation_bound = 10.0;
  spec.counts_axis = {{1, 2, 2}};
  std::vector<SweepRow> rows = Sweep(spec, nullptr);
  REQUIRE(rows.size() == 1);
  const SweepRow& row = rows[0];
  CHECK(row.ok);
  MarketConfig cfg = UniqueSmallest122();
  ConstructedEquilibrium eq = Construct(cfg);
  CHECK(row.reserve_price == doctest::Approx(eq.profile.reserve_price));
  CHECK(row.lowest_price == doctest::Approx(eq.lowest_price));
  CHECK(row.shopper_price ==
        doctest::Approx(ExpectedMinimumPrice(eq.profile)).epsilon(1e-9));
  double total = 0.0;
  for (double pi : eq.analytic_profit) total += pi;
  CHECK(row.total_profit == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("price of search dispersion: ratio to the reserve rises") {
  // More size dispersion at fixed store total raises what a searcher pays
  // relative to the reserve price.
  SweepSpec spec;
  spec.mu = 0.25;
  spec.search_cost = 0.8;
  spec.valuation_bound = 30.0;
  spec.counts_axis = {
      {1, 1, 1, 1, 1, 1}, {2, 1, 1, 1, 1}, {3, 1, 1, 1}, {4, 1, 1}};
  std::vector<SweepRow> rows = Sweep(spec, nullptr);
  REQUIRE(rows.size() == 4);
  double prev = 0.0;
  for (const SweepRow& row : rows) {
    REQUIRE(row.ok);
    double ratio = row.searcher_price / row.reserve_price;
    CHECK(ratio >= prev - 1e-12);
    prev = ratio;
  }
}

TEST_CASE("sweep rows capture per-market failures") {
  SweepSpec spec;
  spec.mu = 0.2;
  spec.search_cost = 1.0;
  spec.valuation_bound = 5.0;  // the second market solves above this bound
  spec.counts_axis = {{1, 2, 2}, {2, 2}};
  std::vector<SweepRow> rows = Sweep(spec, nullptr);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK_FALSE(rows[1].error.empty());
}

TEST_CASE("sweep demands exactly one axis") {
  SweepSpec spec;
  spec.mu = 0.2;
  spec.search_cost = 1.0;
  spec.valuation_bound = 10.0;
  CHECK_THROWS_AS(Sweep(spec, nullptr), StahlError);  // no axis
  spec.counts_axis = {{2, 2}};
  spec.mu_axis = {0.2, 0.3};
  spec.fixed_counts = {2, 2};
  CHECK_THROWS_AS(Sweep(spec, nullptr), StahlError);  // both axes
}

TEST_CASE("sweep over the shopper fraction with simulation columns") {
  SweepSpec spec;
  spec.search_cost = 1.0;
  spec.valuation_bound = 10.0;
  spec.fixed_counts = {1, 2, 2};
  spec.mu_axis = {0.2, 0.4};
  SimOptions opts;
  opts.replications = 20000;
  opts.seed = 21;
  std::vector<SweepRow> rows = Sweep(spec, &opts);
  REQUIRE(rows.size() == 2);
  for (const SweepRow& row : rows) {
    REQUIRE(row.ok);
    CHECK(row.sim_searcher_price ==
          doctest::Approx(row.searcher_price).epsilon(0.02));
    CHECK(row.sim_total_profit ==
          doctest::Approx(row.total_profit).epsilon(0.02));
  }
}

}  // namespace
}  // namespace stahl
