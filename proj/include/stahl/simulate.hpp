// Copyright 2026 The StahlSearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STAHL_SIMULATE_HPP_
#define STAHL_SIMULATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stahl/types.hpp"

namespace stahl {

struct SimOptions {
  std::uint64_t replications = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  // Consumer masses flow as expectations by default (variance from prices
  // only). Agent mode instead walks discrete searchers through the market,
  // for timeline demonstrations.
  bool agent_mode = false;
  int agents = 1000;
  int histogram_bins = 64;
};

struct SellerStats {
  double profit_mean = 0.0;
  double profit_se = 0.0;
  double quantity_mean = 0.0;
};

struct SimulationResult {
  std::vector<SellerStats> sellers;
  double mean_searches = 0.0;        // stores sampled per unit of searcher
                                     // mass; chains share a price, so at
                                     // most one store per seller
  double first_store_fraction = 0.0; // searcher mass buying where it lands
  double searcher_price_mean = 0.0;  // mean price paid per unit searcher mass
  double hist_lo = 0.0, hist_hi = 0.0;
  std::vector<double> histogram;     // mean mass of price paid per bin
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
};

// Replays the market: per replication every seller draws one price from its
// strategy (counter-based RNG; stream = replication, counter = draw index,
// so results are independent of threading). Shoppers buy at the minimum,
// ties split by store count. Searchers start proportional to store counts
// and keep sampling, at search_cost per extra store, until a price weakly
// below the reserve (or the cost itself); having seen everything, they
// recall the cheapest. Quantities always sum to one per replication.
SimulationResult Simulate(const StrategyProfile& profile,
                          const MarketConfig& config, const SimOptions& opts);

// --------------------------------------------------------------------------
// Sweeps: construct the default equilibrium across a family of markets and
// tabulate prices paid. Exactly one axis varies: store count vectors, or the
// shopper fraction.
// --------------------------------------------------------------------------

struct SweepSpec {
  double mu = 0.0;
  double search_cost = 0.0;
  double valuation_bound = 0.0;
  std::vector<std::vector<int>> counts_axis;  // one row per entry, or...
  std::vector<double> mu_axis;                // ...one row per entry
  std::vector<int> fixed_counts;
};

struct SweepRow {
  std::vector<int> counts;
  double mu = 0.0;
  double search_cost = 0.0;
  bool ok = false;
  std::string error;
  double reserve_price = 0.0;
  double lowest_price = 0.0;
  double searcher_price = 0.0;  // expected price paid by a searcher
  double shopper_price = 0.0;   // expected minimum price
  double total_profit = 0.0;
  // Filled only when the sweep runs with replications > 0.
  double sim_searcher_price = 0.0;
  double sim_total_profit = 0.0;
};

std::vector<SweepRow> Sweep(const SweepSpec& spec, const SimOptions* sim);

}  // namespace stahl

#endif  // STAHL_SIMULATE_HPP_
