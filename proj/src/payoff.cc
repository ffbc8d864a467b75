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

#include "stahl/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "stahl/error.hpp"
#include "stahl/numeric.hpp"

namespace stahl {

double Survival(const StrategyProfile& profile, int seller, double p) {
  return profile.strategies.at(seller).survival(p);
}

double WinProbability(const StrategyProfile& profile,
                      const MarketConfig& config, int seller, double p,
                      Approach side) {
  const double eps = 1e-9 * profile.reserve_price;
  const int n = profile.sellers();
  const int own_stores = config.store_counts.at(seller);
  const int total = config.total_stores();

  // W[t] = P(every rival prices weakly above p, with the tying rivals holding
  // exactly t stores). Rivals pricing strictly below p kill the sale and are
  // simply never counted.
  std::vector<double> w(total + 1, 0.0);
  w[0] = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j == seller) continue;
    const PricingStrategy& s = profile.strategies[j];
    double tie = s.atom_mass_near(p, eps);
    double above = s.survival(p);
    // survival() counts an atom sitting strictly above p; if that atom is the
    // one tying with p, reclassify its mass from "above" to "tie".
    double atom_at = (s.kind() == StrategyKind::kPurePoint) ? s.price()
                                                            : s.atom_price();
    if (tie > 0.0 && p < atom_at) above = std::max(0.0, above - tie);
    if (side == Approach::kFromBelow) {
      above += tie;
      tie = 0.0;
    } else if (side == Approach::kFromAbove) {
      tie = 0.0;
    }
    const int nj = config.store_counts[j];
    for (int t = total; t >= 0; --t) {
      double acc = w[t] * above;
      if (t >= nj) acc += w[t - nj] * tie;
      w[t] = acc;
    }
  }
  double alpha = 0.0;
  for (int t = 0; t <= total; ++t)
    if (w[t] != 0.0) alpha += w[t] * own_stores / (own_stores + t);
  return alpha;
}

ProfitBreakdown ExpectedProfit(const StrategyProfile& profile,
                               const MarketConfig& config, int seller,
                               double p, Approach side) {
  DerivedConstants d = Derive(config);
  ProfitBreakdown out;
  out.price = p;
  out.shopper_win_prob = WinProbability(profile, config, seller, p, side);
  out.shopper_revenue = p * config.shopper_fraction * out.shopper_win_prob;
  out.off_reserve = p > profile.reserve_price && p > config.search_cost;
  out.searcher_revenue = out.off_reserve ? 0.0 : p * d.searcher_share[seller];
  out.total = out.shopper_revenue + out.searcher_revenue;
  return out;
}

Approach SupportSide(const StrategyProfile& profile, int seller, double p) {
  const double eps = 1e-9 * profile.reserve_price;
  const PricingStrategy& own = profile.strategies.at(seller);
  if (own.atom_mass_near(p, eps) > 0.0) return Approach::kExact;
  bool rival_atom = false;
  for (int j = 0; j < profile.sellers() && !rival_atom; ++j) {
    rival_atom =
        j != seller && profile.strategies[j].atom_mass_near(p, eps) > 0.0;
  }
  if (!rival_atom) return Approach::kExact;
  return (own.mixed() && p <= own.cdf().lo() + eps) ? Approach::kFromAbove
                                                    : Approach::kFromBelow;
}

namespace {

// Prices where some rival's win-probability factor has a kink: support
// endpoints, segment boundaries, cutoffs and atoms.
std::vector<double> KinkPrices(const StrategyProfile& profile, int seller) {
  std::set<double> ks;
  for (int j = 0; j < profile.sellers(); ++j) {
    if (j == seller) continue;
    const PricingStrategy& s = profile.strategies[j];
    if (!s.mixed()) {
      ks.insert(s.price());
      continue;
    }
    ks.insert(s.cdf().lo());
    ks.insert(s.cdf().hi());
    ks.insert(s.atom_price());
    for (const CdfSegment& seg : s.cdf().segments()) ks.insert(seg.lo);
  }
  return {ks.begin(), ks.end()};
}

}  // namespace

double StrategyProfit(const StrategyProfile& profile,
                      const MarketConfig& config, int seller) {
  const PricingStrategy& own = profile.strategies.at(seller);
  if (!own.mixed())
    return ExpectedProfit(profile, config, seller, own.price()).total;

  DerivedConstants d = Derive(config);
  const double mu = config.shopper_fraction;
  const double src = d.searcher_share[seller];
  // Integrate over quantiles rather than prices: mixing groups of three or
  // more have F' ~ (hi-p)^(-1/2) at the top, which starves a price-domain
  // quadrature, while the quantile-domain integrand stays bounded.
  const ParamCdf& cdf = own.cdf();
  auto integrand = [&](double u) {
    double p = cdf.quantile(u);
    double pi = p * mu * WinProbability(profile, config, seller, p);
    if (p <= profile.reserve_price || p <= config.search_cost) pi += p * src;
    return pi;
  };

  std::vector<double> cuts = KinkPrices(profile, seller);
  double lo = cdf.lo(), hi = cdf.hi();
  std::vector<double> pts{0.0};
  for (double k : cuts)
    if (k > lo && k < hi) pts.push_back(cdf.value(k));
  for (const CdfSegment& seg : cdf.segments())
    if (seg.lo > lo && seg.lo < hi) pts.push_back(cdf.value(seg.lo));
  pts.push_back(cdf.top_value());
  std::sort(pts.begin(), pts.end());

  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += Integrate(integrand, pts[i], pts[i + 1],
                       1e-11 * profile.reserve_price);
  if (own.mass_at_top() > 0.0)
    total += own.mass_at_top() *
             ExpectedProfit(profile, config, seller, own.atom_price()).total;
  return total;
}

double ProfitPerBranch(const StrategyProfile& profile,
                       const MarketConfig& config, int seller,
                       double rel_tol) {
  const PricingStrategy& own = profile.strategies.at(seller);
  std::vector<double> samples;
  if (!own.mixed()) {
    samples.push_back(ExpectedProfit(profile, config, seller, own.price()).total);
  } else {
    const int kGrid = 257;
    double lo = own.cdf().lo(), hi = own.cdf().hi();
    for (int i = 0; i < kGrid; ++i) {
      double p = i + 1 == kGrid ? hi : lo + (hi - lo) * i / (kGrid - 1);
      samples.push_back(
          ExpectedProfit(profile, config, seller, p,
                         SupportSide(profile, seller, p))
              .total);
    }
    if (own.mass_at_top() > 0.0)
      samples.push_back(
          ExpectedProfit(profile, config, seller, own.atom_price()).total);
  }
  double mn = *std::min_element(samples.begin(), samples.end());
  double mx = *std::max_element(samples.begin(), samples.end());
  if (mx - mn > rel_tol * std::fabs(mx))
    Fail(ErrorCode::kInvalidProfile,
         "profit varies on the strategy's own support; not an equilibrium "
         "candidate");
  return 0.5 * (mn + mx) / config.store_counts.at(seller);
}

double ExpectedMinimumPrice(const StrategyProfile& profile) {
  double lo = profile.strategies[0].support_lo();
  double hi = profile.strategies[0].support_hi();
  for (const PricingStrategy& s : profile.strategies) {
    lo = std::min(lo, s.support_lo());
    hi = std::max(hi, s.support_hi());
  }
  auto surv_all = [&](double p) {
    double v = 1.0;
    for (int j = 0; j < profile.sellers(); ++j) v *= Survival(profile, j, p);
    return v;
  };
  // E[min] = lo + Integral of P(min > p) over [lo, hi].
  std::set<double> cut{lo, hi};
  for (const PricingStrategy& s : profile.strategies) {
    if (!s.mixed()) continue;
    for (const CdfSegment& seg : s.cdf().segments()) cut.insert(seg.lo);
    cut.insert(s.cdf().hi());
  }
  std::vector<double> pts;
  for (double k : cut)
    if (k >= lo && k <= hi) pts.push_back(k);
  double e = lo;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    e += Integrate(surv_all, pts[i], pts[i + 1], 1e-11 * hi);
  return e;
}

}  // namespace stahl
