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

#ifndef STAHL_BELIEF_HPP_
#define STAHL_BELIEF_HPP_

#include <utility>
#include <vector>

#include "stahl/types.hpp"

namespace stahl {

// What a searcher believes about the market: a multiset of strategies with
// store counts, but no identification of which store runs which strategy.
struct BeliefEntry {
  PricingStrategy strategy;
  int count = 0;  // number of stores playing it
};

struct BeliefState {
  std::vector<BeliefEntry> entries;

  int total() const {
    int t = 0;
    for (const BeliefEntry& e : entries) t += e.count;
    return t;
  }
};

// Beliefs implied by a profile when searchers know the distribution of play:
// strategies deduplicated, counts = stores running them.
BeliefState TruthfulBeliefs(const StrategyProfile& profile,
                            const MarketConfig& config);

// Posterior over which believed strategy generated an observed price.
// Weights are count * likelihood; atoms within atom_eps of the observation
// dominate densities. Errors if the observation has zero likelihood under
// every entry. Returns (entry index, probability) pairs.
std::vector<std::pair<int, double>> Posterior(double observed,
                                              const BeliefState& beliefs,
                                              double atom_eps);

// Expected price at the next store after observing `observed` at the current
// one: the posterior-weighted average over generating strategies s of the
// mean expected price among the remaining total-1 stores (the count of s
// reduced by one). Errors when beliefs hold a single store.
double ContinuationPrice(double observed, const BeliefState& beliefs,
                         double atom_eps);

// Whether an optimal searcher keeps searching: true iff stores remain, the
// best observed price still exceeds the search cost, and the continuation
// price undercuts best_observed - search_cost strictly (indifference stops).
bool ShouldContinue(double best_observed, const BeliefState& beliefs,
                    double search_cost, int stores_left, double atom_eps);

struct ReserveRationalityReport {
  bool sufficient_ok = false;  // min expected price >= reserve - cost - tol
  bool exact_ok = false;       // no grid price makes continuing profitable
  double min_margin = 0.0;     // min over sellers of E[price] - (reserve - c)
  std::vector<double> violation_prices;
};

// Checks that stopping at any observable price weakly below the profile's
// reserve price is sequentially rational under truthful beliefs.
ReserveRationalityReport ReserveRational(const StrategyProfile& profile,
                                         const MarketConfig& config,
                                         int grid = 1000);

}  // namespace stahl

#endif  // STAHL_BELIEF_HPP_
