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

#ifndef STAHL_VERIFY_HPP_
#define STAHL_VERIFY_HPP_

#include <string>
#include <vector>

#include "stahl/types.hpp"

namespace stahl {

struct Tolerances {
  double deviation_rel = 1e-6;  // max profit gain, relative to the reserve
  double profit_rel = 1e-6;     // on-support profit variation, relative
  int grid = 10000;             // best-response price grid size
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // magnitude of the worst violation found (0 if none)
  std::string evidence;
};

struct Deviation {
  int seller = 0;
  double price = 0.0;
  double gain = 0.0;
};

struct VerificationReport {
  bool passed = false;
  double reserve_price = 0.0;
  double lowest_price = 0.0;
  std::vector<CheckResult> checks;
  std::vector<Deviation> best_deviations;  // one per seller
  // Advisory only: min over sellers of E[price] - (reserve - search cost).
  double reserve_margin = 0.0;
};

// Best response against the profile for one seller: scans a log-spaced price
// grid over (search_cost/100, valuation_bound], every atom, support endpoint
// and kink (including prices epsilon below rival atoms, where undercutting
// pays), then polishes the leading cells with golden-section search.
// Returns (price, profit).
std::pair<double, double> BruteForceBestResponse(const StrategyProfile& profile,
                                                 const MarketConfig& config,
                                                 int seller, int grid = 10000);

// Full equilibrium audit. Checks, in report order:
//   support_bound        no support mass above the reserve price
//   atoms_at_reserve     atoms only at the reserve price
//   common_supremum      every seller's support supremum is the reserve
//   interval_coverage    supports tile [lowest, reserve] with >= 2 sellers
//                        mixing over every subinterval
//   profit_constancy     profit constant on each seller's own support
//   no_deviation         no profitable deviation per the brute-force oracle
//   reserve_rational     stopping at observed prices <= reserve is optimal
//   belief_consistency   truthful beliefs well-formed (counts match stores)
//   profit_law           the profit pattern implied by the market's shape:
//                        equal sizes -> equal profits; several smallest ->
//                        equal profit per store; unique smallest -> greatest
//                        profit per store at the smallest seller, equal
//                        elsewhere
VerificationReport Verify(const StrategyProfile& profile,
                          const MarketConfig& config,
                          const Tolerances& tol = Tolerances());

// Constructive impossibility witness for symmetric play across unequal
// sellers: two sellers of different sizes and two support prices whose
// equal-profit conditions cannot both hold. The residual equals
// (p - q) * (share_i - share_j) and is bounded away from zero.
struct SymmetryWitness {
  bool found = false;
  int seller_a = 0, seller_b = 0;
  double price_p = 0.0, price_q = 0.0;
  double residual = 0.0;
};

SymmetryWitness NoSymmetricEquilibriumWitness(const StrategyProfile& profile,
                                              const MarketConfig& config);

}  // namespace stahl

#endif  // STAHL_VERIFY_HPP_
