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

#include "stahl/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stahl/error.hpp"
#include "stahl/numeric.hpp"

namespace stahl {

namespace {
constexpr double kConsistencyTol = 1e-9;
}

int MarketConfig::total_stores() const {
  int n = 0;
  for (int k : store_counts) n += k;
  return n;
}

MarketConfig Validate(MarketConfig config) {
  if (config.sellers() < 2)
    Fail(ErrorCode::kInvalidConfig, "config: need at least 2 sellers");
  for (int k : config.store_counts)
    if (k < 1) Fail(ErrorCode::kInvalidConfig, "config: store counts must be >= 1");
  if (!(config.shopper_fraction > 0.0) || !(config.shopper_fraction < 1.0))
    Fail(ErrorCode::kInvalidConfig, "config: shopper fraction must lie in (0,1)");
  if (!(config.search_cost > 0.0))
    Fail(ErrorCode::kInvalidConfig, "config: search cost must be positive");
  if (!std::isfinite(config.valuation_bound) ||
      !(config.valuation_bound > config.search_cost))
    Fail(ErrorCode::kInvalidConfig,
         "config: valuation bound must be finite and exceed the search cost");
  return config;
}

DerivedConstants Derive(const MarketConfig& config) {
  DerivedConstants d;
  d.total_stores = config.total_stores();
  const double searchers = 1.0 - config.shopper_fraction;
  d.searcher_share.reserve(config.sellers());
  for (int k : config.store_counts)
    d.searcher_share.push_back(searchers * k / d.total_stores);

  int lo = *std::min_element(config.store_counts.begin(),
                             config.store_counts.end());
  int second = std::numeric_limits<int>::max();
  for (int k : config.store_counts)
    if (k > lo) second = std::min(second, k);
  d.min_stores = lo;
  d.second_min_stores =
      (second == std::numeric_limits<int>::max()) ? 0 : second;
  for (int i = 0; i < config.sellers(); ++i) {
    if (config.store_counts[i] == lo) d.smallest.push_back(i);
    if (d.second_min_stores != 0 && config.store_counts[i] == second)
      d.second_smallest.push_back(i);
  }
  return d;
}

// --------------------------------------------------------------------------
// ParamCdf
// --------------------------------------------------------------------------

namespace {

double SegSurvival(const CdfSegment& s, double p) {
  double a = s.u1 / p - s.u2;
  if (a < 0.0) a = 0.0;
  double v = std::pow(a, s.e1);
  if (s.e2 != 0.0) {
    double b = s.r1 / p - s.r2;
    if (b < 0.0) b = 0.0;
    v *= std::pow(b, s.e2);
  }
  return v;
}

double SegDensity(const CdfSegment& s, double p) {
  // f = -dS/dp with S = (u1/p-u2)^e1 (r1/p-r2)^e2:
  //   f = (1/p^2) [ e1 u1 U^(e1-1) R^e2 + e2 r1 U^e1 R^(e2-1) ]
  double u = s.u1 / p - s.u2;
  if (u < 0.0) u = 0.0;
  double out = s.e1 * s.u1 * std::pow(u, s.e1 - 1.0);
  if (s.e2 != 0.0) {
    double r = s.r1 / p - s.r2;
    if (r < 0.0) r = 0.0;
    out = out * std::pow(r, s.e2) +
          s.e2 * s.r1 * std::pow(u, s.e1) * std::pow(r, s.e2 - 1.0);
  }
  return out / (p * p);
}

}  // namespace

ParamCdf ParamCdf::ClosedForm(CdfFamily family, double lo, double hi,
                              std::vector<CdfSegment> segments) {
  if (family == CdfFamily::kTabulated)
    Fail(ErrorCode::kInvalidStrategy, "cdf: tabulated family needs knots");
  ParamCdf c;
  c.family_ = family;
  c.lo_ = lo;
  c.hi_ = hi;
  c.segments_ = std::move(segments);
  c.Check();
  return c;
}

ParamCdf ParamCdf::Tabulated(std::vector<double> knots,
                             std::vector<double> values) {
  ParamCdf c;
  c.family_ = CdfFamily::kTabulated;
  if (knots.size() < 2 || knots.size() != values.size())
    Fail(ErrorCode::kInvalidStrategy, "cdf: tabulated needs matching knots/values");
  c.lo_ = knots.front();
  c.hi_ = knots.back();
  c.knots_ = std::move(knots);
  c.knot_values_ = std::move(values);
  c.Check();
  return c;
}

ParamCdf ParamCdf::Resample(const ParamCdf& src, int knots) {
  if (knots < 2) Fail(ErrorCode::kInvalidArgument, "cdf: need >= 2 knots");
  std::vector<double> ks(knots), vs(knots);
  for (int i = 0; i < knots; ++i) {
    double t = static_cast<double>(i) / (knots - 1);
    ks[i] = src.lo() + t * (src.hi() - src.lo());
    vs[i] = src.value(ks[i]);
  }
  vs[0] = 0.0;
  for (int i = 1; i < knots; ++i) vs[i] = std::max(vs[i], vs[i - 1]);
  return Tabulated(std::move(ks), std::move(vs));
}

void ParamCdf::Check() const {
  if (!(lo_ > 0.0) || !(hi_ > lo_))
    Fail(ErrorCode::kInvalidStrategy, "cdf: support must satisfy 0 < lo < hi");
  if (family_ == CdfFamily::kTabulated) {
    double prev_k = -1.0, prev_v = -1e-15;
    for (size_t i = 0; i < knots_.size(); ++i) {
      if (knots_[i] <= prev_k)
        Fail(ErrorCode::kInvalidStrategy, "cdf: knots must increase");
      if (knot_values_[i] < prev_v - 1e-12)
        Fail(ErrorCode::kInvalidStrategy, "cdf: tabulated CDF must be nondecreasing");
      if (knot_values_[i] < 0.0 || knot_values_[i] > 1.0 + 1e-12)
        Fail(ErrorCode::kInvalidStrategy, "cdf: tabulated CDF out of [0,1]");
      prev_k = knots_[i];
      prev_v = knot_values_[i];
    }
    if (std::fabs(knot_values_.front()) > 1e-12)
      Fail(ErrorCode::kInvalidStrategy, "cdf: CDF must start at zero");
    return;
  }
  if (segments_.empty())
    Fail(ErrorCode::kInvalidStrategy, "cdf: closed form needs segments");
  double prev = -1.0;
  for (const CdfSegment& s : segments_) {
    if (s.lo <= prev)
      Fail(ErrorCode::kInvalidStrategy, "cdf: segments must increase");
    prev = s.lo;
  }
  if (std::fabs(segments_.front().lo - lo_) > kConsistencyTol * hi_)
    Fail(ErrorCode::kInvalidStrategy, "cdf: first segment must start at lo");
  if (segments_.back().lo >= hi_)
    Fail(ErrorCode::kInvalidStrategy, "cdf: segment past the support");
  if (std::fabs(SegSurvival(segments_.front(), lo_) - 1.0) > 1e-7)
    Fail(ErrorCode::kInvalidStrategy, "cdf: survival at lo must equal 1");
  // Cache CDF at segment starts (and at hi) for quantile routing, and check
  // monotonicity/continuity across the pieces.
  auto* self = const_cast<ParamCdf*>(this);
  self->seg_start_value_.clear();
  for (size_t s = 0; s < segments_.size(); ++s) {
    double end = (s + 1 < segments_.size()) ? segments_[s + 1].lo : hi_;
    double v0 = 1.0 - SegSurvival(segments_[s], segments_[s].lo);
    double v1 = 1.0 - SegSurvival(segments_[s], end);
    if (v1 < v0 - 1e-9)
      Fail(ErrorCode::kInvalidStrategy, "cdf: segment not nondecreasing");
    if (s > 0) {
      double prev_end = 1.0 - SegSurvival(segments_[s - 1], segments_[s].lo);
      if (std::fabs(prev_end - v0) > 1e-7)
        Fail(ErrorCode::kInvalidStrategy, "cdf: discontinuity between segments");
    }
    self->seg_start_value_.push_back(std::max(0.0, v0));
  }
  self->seg_start_value_.push_back(
      std::min(1.0, 1.0 - SegSurvival(segments_.back(), hi_)));
}

int ParamCdf::SegmentAt(double p) const {
  int s = static_cast<int>(segments_.size()) - 1;
  while (s > 0 && p < segments_[s].lo) --s;
  return s;
}

double ParamCdf::SegmentEnd(int s) const {
  return (s + 1 < static_cast<int>(segments_.size())) ? segments_[s + 1].lo
                                                      : hi_;
}

double ParamCdf::value(double p) const {
  if (p <= lo_) return 0.0;
  if (family_ == CdfFamily::kTabulated) {
    if (p >= hi_) return knot_values_.back();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), p);
    size_t i = it - knots_.begin() - 1;
    double t = (p - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return knot_values_[i] + t * (knot_values_[i + 1] - knot_values_[i]);
  }
  if (p >= hi_) return seg_start_value_.back();
  double v = 1.0 - SegSurvival(segments_[SegmentAt(p)], p);
  return std::clamp(v, 0.0, 1.0);
}

double ParamCdf::top_value() const {
  if (family_ == CdfFamily::kTabulated) return knot_values_.back();
  return seg_start_value_.back();
}

double ParamCdf::density(double p) const {
  if (p < lo_ || p > hi_) return 0.0;
  if (family_ == CdfFamily::kTabulated) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), p);
    size_t i = (it == knots_.end()) ? knots_.size() - 2 : (it - knots_.begin() - 1);
    return (knot_values_[i + 1] - knot_values_[i]) / (knots_[i + 1] - knots_[i]);
  }
  return SegDensity(segments_[SegmentAt(p)], p);
}

double ParamCdf::quantile(double u) const {
  const double top = top_value();
  if (u < -1e-12 || u > top + 1e-12)
    Fail(ErrorCode::kInvalidArgument, "cdf: quantile argument out of range");
  u = std::clamp(u, 0.0, top);
  if (family_ == CdfFamily::kTabulated) {
    auto it = std::lower_bound(knot_values_.begin(), knot_values_.end(), u);
    if (it == knot_values_.begin()) return lo_;
    size_t i = it - knot_values_.begin() - 1;
    while (i + 1 < knot_values_.size() && knot_values_[i + 1] <= knot_values_[i])
      ++i;  // skip flat stretches
    if (i + 1 >= knots_.size()) return hi_;
    double span = knot_values_[i + 1] - knot_values_[i];
    if (span <= 0.0) return knots_[i];
    double t = (u - knot_values_[i]) / span;
    return knots_[i] + t * (knots_[i + 1] - knots_[i]);
  }
  int s = 0;
  while (s + 1 < static_cast<int>(segments_.size()) &&
         u > seg_start_value_[s + 1])
    ++s;
  const CdfSegment& seg = segments_[s];
  if (seg.e2 == 0.0) {
    // (u1/p - u2)^e1 = 1-u  =>  p = u1 / ((1-u)^(1/e1) + u2)
    double base = std::pow(1.0 - u, 1.0 / seg.e1);
    return std::clamp(seg.u1 / (base + seg.u2), lo_, hi_);
  }
  double a = seg.lo, b = SegmentEnd(s);
  return InvertMonotone([this](double p) { return value(p); }, u, a, b,
                        1e-13 * hi_);
}

double ParamCdf::partial_expectation() const {
  if (family_ == CdfFamily::kTabulated) {
    double e = 0.0;
    for (size_t i = 0; i + 1 < knots_.size(); ++i) {
      double f = (knot_values_[i + 1] - knot_values_[i]) /
                 (knots_[i + 1] - knots_[i]);
      e += f * 0.5 * (knots_[i + 1] * knots_[i + 1] - knots_[i] * knots_[i]);
    }
    return e;
  }
  double e = 0.0;
  for (size_t s = 0; s < segments_.size(); ++s) {
    const CdfSegment& seg = segments_[s];
    double a = std::max(seg.lo, lo_);
    double b = SegmentEnd(static_cast<int>(s));
    if (seg.e1 == 1.0 && seg.e2 == 0.0) {
      // F = 1 + u2 - u1/p on the segment, so the integrand p*f is u1/p.
      e += seg.u1 * std::log(b / a);
      continue;
    }
    // Stieltjes by parts keeps the integrand bounded at edge singularities.
    double fa = value(a), fb = (b >= hi_) ? top_value() : value(b);
    e += b * fb - a * fa -
         Integrate([this](double p) { return value(p); }, a, b, 1e-12 * hi_);
  }
  return e;
}

bool ParamCdf::operator==(const ParamCdf& o) const {
  if (family_ != o.family_ || lo_ != o.lo_ || hi_ != o.hi_) return false;
  if (family_ == CdfFamily::kTabulated)
    return knots_ == o.knots_ && knot_values_ == o.knot_values_;
  if (segments_.size() != o.segments_.size()) return false;
  for (size_t i = 0; i < segments_.size(); ++i) {
    const CdfSegment &a = segments_[i], &b = o.segments_[i];
    if (a.lo != b.lo || a.u1 != b.u1 || a.u2 != b.u2 || a.e1 != b.e1 ||
        a.r1 != b.r1 || a.r2 != b.r2 || a.e2 != b.e2)
      return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// PricingStrategy
// --------------------------------------------------------------------------

PricingStrategy PricingStrategy::Pure(double price) {
  PricingStrategy s;
  s.kind_ = StrategyKind::kPurePoint;
  s.price_ = price;
  s.Validate();
  return s;
}

PricingStrategy PricingStrategy::MixedFull(ParamCdf cdf, double mass_at_top) {
  PricingStrategy s;
  s.kind_ = StrategyKind::kMixedFull;
  s.cdf_ = std::move(cdf);
  s.mass_at_top_ = mass_at_top;
  s.atom_price_ = s.cdf_.hi();
  s.Validate();
  return s;
}

PricingStrategy PricingStrategy::Cutoff(ParamCdf cdf_below,
                                        double reserve_price) {
  PricingStrategy s;
  s.kind_ = StrategyKind::kCutoff;
  s.cdf_ = std::move(cdf_below);
  s.mass_at_top_ = 1.0 - s.cdf_.top_value();
  s.atom_price_ = reserve_price;
  s.Validate();
  return s;
}

void PricingStrategy::Validate() const {
  switch (kind_) {
    case StrategyKind::kPurePoint:
      if (!(price_ > 0.0) || !std::isfinite(price_))
        Fail(ErrorCode::kInvalidStrategy, "strategy: price must be positive");
      return;
    case StrategyKind::kMixedFull: {
      if (mass_at_top_ < 0.0 || mass_at_top_ >= 1.0)
        Fail(ErrorCode::kInvalidStrategy,
             "strategy: top mass must lie in [0,1)");
      double total = cdf_.top_value() + mass_at_top_;
      if (std::fabs(total - 1.0) > kConsistencyTol)
        Fail(ErrorCode::kInvalidStrategy,
             "strategy: CDF plus top mass must equal 1");
      return;
    }
    case StrategyKind::kCutoff: {
      if (!(mass_at_top_ > 0.0) || mass_at_top_ >= 1.0)
        Fail(ErrorCode::kInvalidStrategy,
             "strategy: cutoff mass must lie in (0,1)");
      if (!(atom_price_ > cdf_.hi()))
        Fail(ErrorCode::kInvalidStrategy,
             "strategy: cutoff atom must sit above the cutoff price");
      double total = cdf_.top_value() + mass_at_top_;
      if (std::fabs(total - 1.0) > kConsistencyTol)
        Fail(ErrorCode::kInvalidStrategy,
             "strategy: CDF plus cutoff mass must equal 1");
      return;
    }
  }
}

double PricingStrategy::support_lo() const {
  return mixed() ? cdf_.lo() : price_;
}

double PricingStrategy::support_hi() const {
  if (!mixed()) return price_;
  return (mass_at_top_ > 0.0) ? atom_price_ : cdf_.hi();
}

double PricingStrategy::survival(double p) const {
  if (kind_ == StrategyKind::kPurePoint) return price_ > p ? 1.0 : 0.0;
  if (p >= atom_price_) return 0.0;
  if (p >= cdf_.hi()) return mass_at_top_;
  return 1.0 - cdf_.value(p);
}

double PricingStrategy::atom_mass_near(double p, double eps) const {
  if (kind_ == StrategyKind::kPurePoint)
    return std::fabs(p - price_) <= eps ? 1.0 : 0.0;
  if (mass_at_top_ > 0.0 && std::fabs(p - atom_price_) <= eps)
    return mass_at_top_;
  return 0.0;
}

double PricingStrategy::density(double p) const {
  return mixed() ? cdf_.density(p) : 0.0;
}

double PricingStrategy::expected_price() const {
  if (kind_ == StrategyKind::kPurePoint) return price_;
  return cdf_.partial_expectation() + mass_at_top_ * atom_price_;
}

double PricingStrategy::sample(double u) const {
  if (kind_ == StrategyKind::kPurePoint) return price_;
  if (u < mass_at_top_) return atom_price_;
  return cdf_.quantile(u - mass_at_top_);
}

bool PricingStrategy::operator==(const PricingStrategy& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == StrategyKind::kPurePoint) return price_ == o.price_;
  return mass_at_top_ == o.mass_at_top_ && atom_price_ == o.atom_price_ &&
         cdf_ == o.cdf_;
}

void ValidateShape(const StrategyProfile& profile, const MarketConfig& config) {
  if (profile.sellers() != config.sellers())
    Fail(ErrorCode::kInvalidProfile,
         "profile: strategy count does not match seller count");
  if (!(profile.reserve_price > 0.0) || !std::isfinite(profile.reserve_price))
    Fail(ErrorCode::kInvalidProfile, "profile: reserve price must be positive");
  for (const PricingStrategy& s : profile.strategies) {
    s.Validate();
    // Admissible prices live in (0, valuation_bound]: nobody values the good
    // above the bound, and the replay assumes every buyer buys.
    if (s.support_hi() > config.valuation_bound * (1.0 + kConsistencyTol) ||
        !(s.support_lo() > 0.0))
      Fail(ErrorCode::kInvalidProfile,
           "profile: prices must lie in (0, valuation_bound]");
  }
}

}  // namespace stahl
