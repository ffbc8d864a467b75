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

#ifndef STAHL_TYPES_HPP_
#define STAHL_TYPES_HPP_

#include <string>
#include <vector>

namespace stahl {

// Market primitives. A market has n >= 2 sellers; seller i operates
// store_counts[i] identical stores. A fraction shopper_fraction of consumers
// observe all prices and buy at the cheapest store; the rest search
// sequentially at cost search_cost per additional store, starting from a
// store drawn proportionally to store counts. valuation_bound caps every
// admissible price.
struct MarketConfig {
  std::vector<int> store_counts;
  double shopper_fraction = 0.0;  // in (0,1)
  double search_cost = 0.0;       // > 0
  double valuation_bound = 0.0;   // finite, > search_cost

  int sellers() const { return static_cast<int>(store_counts.size()); }
  int total_stores() const;
};

// Returns the config unchanged iff all invariants hold, else throws
// StahlError(kInvalidConfig).
MarketConfig Validate(MarketConfig config);

// Quantities implied by a config. searcher_share[i] is the mass of searchers
// whose first visit lands on seller i: (1 - shopper_fraction) * n_i / N.
struct DerivedConstants {
  int total_stores = 0;
  std::vector<double> searcher_share;
  std::vector<int> smallest;         // sellers attaining the minimum count
  std::vector<int> second_smallest;  // sellers attaining the next count up
  int min_stores = 0;
  int second_min_stores = 0;  // 0 when all sellers share one size
};

DerivedConstants Derive(const MarketConfig& config);

// ---------------------------------------------------------------------------
// Price distributions.
//
// The closed-form families all share one piecewise representation. On a
// segment starting at `lo`, the survival of the distribution (probability of
// pricing strictly above p, counting any terminal atom) is
//
//   S(p) = (u1/p - u2)^e1 * (r1/p - r2)^e2
//
// with the second factor absent when e2 == 0. The CDF is 1 - S(p).
//   kGroupMix      one factor, e1 = 1/k for k sellers-minus-one still mixing;
//                  the shared distribution of a symmetric mixing group.
//   kSecondMix     one factor; the distribution of second-smallest sellers
//                  mixing against a unique smallest rival.
//   kSmallestMix   both factors; the unique smallest seller's distribution.
//   kTabulated     piecewise-linear CDF on explicit knots.
// ---------------------------------------------------------------------------

enum class CdfFamily { kGroupMix, kSmallestMix, kSecondMix, kTabulated };

struct CdfSegment {
  double lo = 0.0;
  double u1 = 0.0, u2 = 0.0, e1 = 0.0;
  double r1 = 0.0, r2 = 0.0, e2 = 0.0;
};

class ParamCdf {
 public:
  ParamCdf() = default;

  static ParamCdf ClosedForm(CdfFamily family, double lo, double hi,
                             std::vector<CdfSegment> segments);
  static ParamCdf Tabulated(std::vector<double> knots,
                            std::vector<double> values);
  // Piecewise-linear resampling of any distribution; the fallback used for
  // profiles not born from the closed forms.
  static ParamCdf Resample(const ParamCdf& src, int knots = 4096);

  CdfFamily family() const { return family_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // CDF of the part of the distribution below any terminal atom; clamped to
  // [0, top_value()] outside the support. Nondecreasing with value(lo) = 0.
  double value(double p) const;
  // Total mass below the terminal atom, i.e. value(hi).
  double top_value() const;
  double density(double p) const;
  // Inverse CDF for u in [0, top_value()], solved to 1e-10 in u when no
  // closed form exists.
  double quantile(double u) const;
  // Integral of p over the continuous part: E[price * 1{price <= hi}].
  double partial_expectation() const;

  const std::vector<CdfSegment>& segments() const { return segments_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_values() const { return knot_values_; }

  bool operator==(const ParamCdf& other) const;

 private:
  void Check() const;
  int SegmentAt(double p) const;
  double SegmentEnd(int s) const;

  CdfFamily family_ = CdfFamily::kTabulated;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<CdfSegment> segments_;
  std::vector<double> seg_start_value_;  // CDF at each segment start + at hi
  std::vector<double> knots_, knot_values_;
};

// ---------------------------------------------------------------------------
// Seller strategies.
//   kPurePoint  all stores at one price.
//   kMixedFull  mixing over [cdf.lo, cdf.hi] with an optional atom of
//               mass_at_top at atom_price == cdf.hi.
//   kCutoff     mixing over [cdf.lo, cdf.hi] (the cutoff price) plus an atom
//               of mass_at_top at atom_price, the profile's reserve price
//               above the cutoff. Continuity pins mass_at_top = 1 -
//               cdf.value(cutoff).
// ---------------------------------------------------------------------------

enum class StrategyKind { kPurePoint, kMixedFull, kCutoff };

class PricingStrategy {
 public:
  PricingStrategy() = default;

  static PricingStrategy Pure(double price);
  static PricingStrategy MixedFull(ParamCdf cdf, double mass_at_top);
  static PricingStrategy Cutoff(ParamCdf cdf_below, double reserve_price);

  StrategyKind kind() const { return kind_; }
  double price() const { return price_; }
  const ParamCdf& cdf() const { return cdf_; }
  double mass_at_top() const { return mass_at_top_; }
  double atom_price() const { return atom_price_; }
  double cutoff_price() const { return cdf_.hi(); }

  bool mixed() const { return kind_ != StrategyKind::kPurePoint; }
  double support_lo() const;
  double support_hi() const;  // includes the atom location

  // P(price > p), counting atoms above p.
  double survival(double p) const;
  // Mass of an atom within eps of p (0 when none).
  double atom_mass_near(double p, double eps) const;
  double density(double p) const;
  double expected_price() const;
  // Inverse-CDF sampling from u in [0,1): atoms drawn first by mass.
  double sample(double u) const;

  void Validate() const;
  bool operator==(const PricingStrategy& other) const;

 private:
  StrategyKind kind_ = StrategyKind::kPurePoint;
  double price_ = 0.0;
  ParamCdf cdf_;
  double mass_at_top_ = 0.0;
  double atom_price_ = 0.0;
};

// A strategy per seller plus the searchers' reserve price. Structural
// well-formedness is enforced here; equilibrium properties (supports within
// (0, reserve_price], atoms only at the reserve price, ...) are the
// verifier's job, so that off-equilibrium candidates can be represented and
// rejected with evidence.
struct StrategyProfile {
  std::vector<PricingStrategy> strategies;
  double reserve_price = 0.0;

  int sellers() const { return static_cast<int>(strategies.size()); }
};

void ValidateShape(const StrategyProfile& profile, const MarketConfig& config);

}  // namespace stahl

#endif  // STAHL_TYPES_HPP_
