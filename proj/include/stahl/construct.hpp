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

#ifndef STAHL_CONSTRUCT_HPP_
#define STAHL_CONSTRUCT_HPP_

#include <string>
#include <vector>

#include "stahl/types.hpp"

namespace stahl {

// How the mixing sellers of an equilibrium family are arranged. Cutoff
// prices are expressed as fractions of the reserve price (which is solved
// for only afterwards); valid fractions lie strictly between the
// lowest-price fraction and 1.
struct CutoffSpec {
  int seller = 0;
  double fraction = 0.0;
};

struct GroupSpec {
  std::vector<int> full_mixers;
  std::vector<int> pure_reserve;
  std::vector<CutoffSpec> cutoffs;
};

struct ConstructDiagnostics {
  double kappa = 0.0;                 // E[lowest mixing distribution]/reserve
  double expectation_residual = 0.0;  // |E[F] - (reserve - c)| after solving
};

struct ConstructedEquilibrium {
  StrategyProfile profile;
  std::vector<double> analytic_profit;
  double lowest_price = 0.0;
  ConstructDiagnostics diagnostics;
};

// Bottom of the mixing support when all n sellers mix symmetrically:
//   reserve * (1-mu) / ((n-1) mu + 1).
double LowestPriceSymmetric(double reserve_price, int sellers, double mu);

// Same, for a mixing subgame where each mixing seller carries searcher share
// sigma and shoppers have mass mu: reserve * sigma / (mu + sigma).
double LowestPrice(double reserve_price, double sigma, double mu);

// Value at p of the distribution shared by a mixing group (full mixers plus
// cutoff sellers below their cutoffs) with per-seller searcher share sigma.
// Solves the equal-profit condition; see ConstructOriginal for the rules.
double GroupCdfValue(double p, const GroupSpec& groups, double reserve_price,
                     double mu, double sigma);

// Reserve price for a symmetric n-seller market with the given group
// structure: the price making searchers indifferent between stopping and one
// more search, E[F] = reserve - search_cost.
double SolveReservePrice(const GroupSpec& groups, double mu, int sellers,
                         double search_cost);

// Equilibria with all sellers the same size; groups partition all sellers
// and need at least two full mixers.
ConstructedEquilibrium ConstructOriginal(const MarketConfig& config,
                                         const GroupSpec& groups);

// Markets where at least two sellers share the smallest size: larger sellers
// price purely at the reserve; groups partition the smallest sellers.
ConstructedEquilibrium ConstructExtended(const MarketConfig& config,
                                         const GroupSpec& groups);

// Markets with a unique smallest seller: it mixes over the full support with
// no atom; groups partition the second-smallest sellers (at least one full
// mixer, each of which carries an atom at the reserve); everyone larger
// prices purely at the reserve.
ConstructedEquilibrium ConstructUniqueSmallest(const MarketConfig& config,
                                               const GroupSpec& j_groups);

// Default arrangement: every smallest seller a full mixer when two or more
// share the smallest size; with a unique smallest seller, the first
// second-smallest seller mixes and its peers price purely.
GroupSpec DefaultGroups(const MarketConfig& config);

// Dispatch on the config's shape, using DefaultGroups when groups is null.
ConstructedEquilibrium Construct(const MarketConfig& config,
                                 const GroupSpec* groups = nullptr);

}  // namespace stahl

#endif  // STAHL_CONSTRUCT_HPP_
