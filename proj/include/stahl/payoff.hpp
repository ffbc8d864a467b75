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

#ifndef STAHL_PAYOFF_HPP_
#define STAHL_PAYOFF_HPP_

#include "stahl/types.hpp"

namespace stahl {

struct ProfitBreakdown {
  double price = 0.0;
  double shopper_win_prob = 0.0;  // tie-adjusted probability of the cheapest price
  double shopper_revenue = 0.0;   // price * shopper_fraction * shopper_win_prob
  double searcher_revenue = 0.0;  // price * searcher share, zero off reserve
  double total = 0.0;
  bool off_reserve = false;  // price exceeds both the reserve price and c
};

// P(seller's price > p) under the profile.
double Survival(const StrategyProfile& profile, int seller, double p);

// How to treat rival atoms sitting exactly at the evaluated price. A mixing
// seller puts zero mass on any single price, so the payoff relevant along
// its support is the one-sided limit: kFromBelow wins mass parked at p,
// kFromAbove loses it. kExact keeps the tie-splitting payoff (the right
// object at the seller's own atom).
enum class Approach { kExact, kFromBelow, kFromAbove };

// Probability that seller's stores carry the cheapest price when it deviates
// to (or realizes) p. Rival atoms within 1e-9 * reserve of p tie; ties are
// split proportionally to store counts, averaged over which rivals realize
// the atom.
double WinProbability(const StrategyProfile& profile,
                      const MarketConfig& config, int seller, double p,
                      Approach side = Approach::kExact);

// One-shot expected profit of the seller posting p against the profile.
// Searchers arriving first at the seller buy iff p is weakly below the
// reserve price or the search cost; revenue from searchers who could return
// after sampling everything is not modelled here (the simulator covers it).
ProfitBreakdown ExpectedProfit(const StrategyProfile& profile,
                               const MarketConfig& config, int seller,
                               double p, Approach side = Approach::kExact);

// The side appropriate for evaluating seller's payoff at a price on its own
// support: exact at its own atoms, from below where a rival atom coincides
// with p (from above when p is the bottom of its mixing support, which
// prices approach from the right).
Approach SupportSide(const StrategyProfile& profile, int seller, double p);

// Expected profit of the seller under its own mixed strategy (the value a
// best response is compared against).
double StrategyProfit(const StrategyProfile& profile,
                      const MarketConfig& config, int seller);

// Profit divided by the seller's store count. Errors if profit varies on the
// strategy's support by more than rel_tol (the profile is then no
// equilibrium candidate).
double ProfitPerBranch(const StrategyProfile& profile,
                       const MarketConfig& config, int seller,
                       double rel_tol = 1e-6);

// E[min posted price] across sellers: what a shopper pays.
double ExpectedMinimumPrice(const StrategyProfile& profile);

}  // namespace stahl

#endif  // STAHL_PAYOFF_HPP_
