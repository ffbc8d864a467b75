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

#include "stahl/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stahl/error.hpp"

namespace stahl {

BeliefState TruthfulBeliefs(const StrategyProfile& profile,
                            const MarketConfig& config) {
  BeliefState b;
  for (int i = 0; i < profile.sellers(); ++i) {
    const PricingStrategy& s = profile.strategies[i];
    bool merged = false;
    for (BeliefEntry& e : b.entries) {
      if (e.strategy == s) {
        e.count += config.store_counts[i];
        merged = true;
        break;
      }
    }
    if (!merged) b.entries.push_back({s, config.store_counts[i]});
  }
  return b;
}

std::vector<std::pair<int, double>> Posterior(double observed,
                                              const BeliefState& beliefs,
                                              double atom_eps) {
  if (beliefs.entries.empty())
    Fail(ErrorCode::kBeliefInconsistent, "posterior: empty beliefs");
  std::vector<double> weights(beliefs.entries.size(), 0.0);
  double total = 0.0;
  bool any_atom = false;
  for (size_t i = 0; i < beliefs.entries.size(); ++i) {
    double m = beliefs.entries[i].strategy.atom_mass_near(observed, atom_eps);
    if (m > 0.0) {
      weights[i] = beliefs.entries[i].count * m;
      any_atom = true;
    }
  }
  if (!any_atom) {
    for (size_t i = 0; i < beliefs.entries.size(); ++i)
      weights[i] =
          beliefs.entries[i].count * beliefs.entries[i].strategy.density(observed);
  }
  for (double w : weights) total += w;
  if (!(total > 0.0))
    Fail(ErrorCode::kBeliefInconsistent,
         "posterior: observed price has zero likelihood under every believed "
         "strategy");
  std::vector<std::pair<int, double>> out;
  for (size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0)
      out.emplace_back(static_cast<int>(i), weights[i] / total);
  return out;
}

double ContinuationPrice(double observed, const BeliefState& beliefs,
                         double atom_eps) {
  const int total = beliefs.total();
  if (total <= 1)
    Fail(ErrorCode::kBeliefInconsistent,
         "continuation: needs at least two believed stores");
  std::vector<double> means(beliefs.entries.size());
  for (size_t i = 0; i < beliefs.entries.size(); ++i)
    means[i] = beliefs.entries[i].strategy.expected_price();

  double value = 0.0;
  for (const auto& [idx, prob] : Posterior(observed, beliefs, atom_eps)) {
    // One store (the visited one) is removed from the generating strategy's
    // count; the next store is uniform over the remaining total-1.
    double sum = 0.0;
    for (size_t j = 0; j < beliefs.entries.size(); ++j) {
      int count = beliefs.entries[j].count;
      if (static_cast<int>(j) == idx) count -= 1;
      sum += count * means[j];
    }
    value += prob * sum / (total - 1);
  }
  return value;
}

bool ShouldContinue(double best_observed, const BeliefState& beliefs,
                    double search_cost, int stores_left, double atom_eps) {
  if (stores_left <= 0) return false;
  if (best_observed <= search_cost) return false;
  return ContinuationPrice(best_observed, beliefs, atom_eps) <
         best_observed - search_cost;
}

ReserveRationalityReport ReserveRational(const StrategyProfile& profile,
                                         const MarketConfig& config,
                                         int grid) {
  ReserveRationalityReport out;
  const double reserve = profile.reserve_price;
  const double tol = 1e-9 * reserve;
  const double atom_eps = 1e-9 * reserve;

  double min_margin = std::numeric_limits<double>::infinity();
  for (const PricingStrategy& s : profile.strategies)
    min_margin = std::min(min_margin, s.expected_price() -
                                          (reserve - config.search_cost));
  out.min_margin = min_margin;
  out.sufficient_ok = min_margin >= -tol;

  BeliefState beliefs = TruthfulBeliefs(profile, config);
  double lo = profile.strategies[0].support_lo();
  for (const PricingStrategy& s : profile.strategies)
    lo = std::min(lo, s.support_lo());

  out.exact_ok = true;
  for (int g = 0; g <= grid; ++g) {
    double p = lo + (reserve - lo) * g / grid;
    bool observable = false;
    for (const BeliefEntry& e : beliefs.entries)
      if (e.strategy.density(p) > 0.0 ||
          e.strategy.atom_mass_near(p, atom_eps) > 0.0)
        observable = true;
    if (!observable) continue;
    // Equilibrium constructions sit exactly at indifference when the reserve
    // itself is observed, so only a gain clearing the roundoff band counts.
    double continuation = ContinuationPrice(p, beliefs, atom_eps);
    if (continuation < p - config.search_cost - tol) {
      out.exact_ok = false;
      out.violation_prices.push_back(p);
      if (out.violation_prices.size() >= 8) break;
    }
  }
  return out;
}

}  // namespace stahl
