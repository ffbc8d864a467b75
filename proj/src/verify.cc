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

#include "stahl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

#include "stahl/belief.hpp"
#include "stahl/error.hpp"
#include "stahl/numeric.hpp"
#include "stahl/payoff.hpp"

namespace stahl {

namespace {

std::string Describe(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::vector<double> SpecialPrices(const StrategyProfile& profile,
                                  const MarketConfig& config) {
  const double eps = 1e-9 * profile.reserve_price;
  std::set<double> pts;
  pts.insert(profile.reserve_price);
  pts.insert(config.search_cost);
  for (const PricingStrategy& s : profile.strategies) {
    if (!s.mixed()) {
      pts.insert(s.price());
      pts.insert(s.price() - eps);
      continue;
    }
    pts.insert(s.cdf().lo());
    pts.insert(s.cdf().hi());
    for (const CdfSegment& seg : s.cdf().segments()) pts.insert(seg.lo);
    if (s.mass_at_top() > 0.0) {
      pts.insert(s.atom_price());
      pts.insert(s.atom_price() - eps);
    }
  }
  std::vector<double> out;
  for (double p : pts)
    if (p > 0.0 && p <= config.valuation_bound) out.push_back(p);
  return out;
}

}  // namespace

std::pair<double, double> BruteForceBestResponse(const StrategyProfile& profile,
                                                 const MarketConfig& config,
                                                 int seller, int grid) {
  if (grid < 1000) grid = 1000;
  const double lo = config.search_cost / 100.0;
  const double hi = config.valuation_bound;
  const double log_lo = std::log(lo), log_hi = std::log(hi);

  auto profit = [&](double p) {
    return ExpectedProfit(profile, config, seller, p).total;
  };

  std::vector<double> prices;
  prices.reserve(grid + 32);
  for (int i = 1; i <= grid; ++i)
    prices.push_back(std::exp(log_lo + (log_hi - log_lo) * i / grid));
  for (double p : SpecialPrices(profile, config)) prices.push_back(p);
  std::sort(prices.begin(), prices.end());

  std::vector<double> values(prices.size());
  for (size_t i = 0; i < prices.size(); ++i) values[i] = profit(prices[i]);

  // Polish around the three best cells; the profit is smooth between kinks,
  // so a local golden-section pass recovers interior optima the grid misses.
  std::vector<size_t> order(prices.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + std::min<size_t>(3, order.size()),
                    order.end(),
                    [&](size_t a, size_t b) { return values[a] > values[b]; });

  double best_p = prices[order[0]], best_v = values[order[0]];
  for (size_t r = 0; r < std::min<size_t>(3, order.size()); ++r) {
    size_t i = order[r];
    double a = (i == 0) ? prices[i] : prices[i - 1];
    double b = (i + 1 == prices.size()) ? prices[i] : prices[i + 1];
    if (b <= a) continue;
    double p = GoldenMax(profit, a, b, 1e-13 * hi);
    double v = profit(p);
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  }
  return {best_p, best_v};
}

namespace {

struct SupportInfo {
  double lowest;   // infimum of the union of supports
  bool degenerate; // nobody mixes over an interval
};

SupportInfo UnionSupport(const StrategyProfile& profile) {
  SupportInfo info{profile.reserve_price, true};
  for (const PricingStrategy& s : profile.strategies) {
    info.lowest = std::min(info.lowest, s.support_lo());
    if (s.mixed()) info.degenerate = false;
  }
  return info;
}

}  // namespace

VerificationReport Verify(const StrategyProfile& profile,
                          const MarketConfig& config, const Tolerances& tol) {
  MarketConfig cfg = Validate(config);
  ValidateShape(profile, cfg);

  VerificationReport report;
  const double reserve = profile.reserve_price;
  const double eps = 1e-9 * reserve;
  report.reserve_price = reserve;
  SupportInfo sup = UnionSupport(profile);
  report.lowest_price = sup.lowest;
  const int n = profile.sellers();

  // (a) support_bound
  {
    CheckResult c{"support_bound", true, 0.0, ""};
    for (int i = 0; i < n; ++i) {
      double excess = profile.strategies[i].support_hi() - reserve;
      if (excess > c.worst) {
        c.worst = excess;
        c.evidence = "seller " + std::to_string(i) + " prices " +
                     Describe(excess) + " above the reserve";
      }
    }
    c.passed = c.worst <= eps;
    report.checks.push_back(c);
  }

  // (b) atoms_at_reserve
  {
    CheckResult c{"atoms_at_reserve", true, 0.0, ""};
    for (int i = 0; i < n; ++i) {
      const PricingStrategy& s = profile.strategies[i];
      double where = 0.0, mass = 0.0;
      if (s.kind() == StrategyKind::kPurePoint) {
        where = s.price();
        mass = 1.0;
      } else if (s.mass_at_top() > 0.0) {
        where = s.atom_price();
        mass = s.mass_at_top();
      } else {
        continue;
      }
      if (std::fabs(where - reserve) > eps && mass > c.worst) {
        c.worst = mass;
        c.evidence = "seller " + std::to_string(i) + " holds mass " +
                     Describe(mass) + " at " + Describe(where);
      }
    }
    c.passed = c.worst == 0.0;
    report.checks.push_back(c);
  }

  // (c) common_supremum
  {
    CheckResult c{"common_supremum", true, 0.0, ""};
    for (int i = 0; i < n; ++i) {
      double gap = std::fabs(profile.strategies[i].support_hi() - reserve);
      if (gap > c.worst) {
        c.worst = gap;
        c.evidence = "seller " + std::to_string(i) + " support tops out at " +
                     Describe(profile.strategies[i].support_hi());
      }
    }
    c.passed = c.worst <= eps;
    report.checks.push_back(c);
  }

  // (d) interval_coverage
  {
    CheckResult c{"interval_coverage", true, 0.0, ""};
    if (!sup.degenerate && sup.lowest < reserve - eps) {
      const int kGrid = 1000;
      int worst_count = n;
      double worst_at = 0.0;
      for (int g = 0; g < kGrid; ++g) {
        double p = sup.lowest +
                   (reserve - sup.lowest) * (g + 0.5) / kGrid;
        int cover = 0;
        for (const PricingStrategy& s : profile.strategies)
          if (s.mixed() && s.density(p) > 0.0) ++cover;
        if (cover < worst_count) {
          worst_count = cover;
          worst_at = p;
        }
      }
      if (worst_count < 2) {
        c.passed = false;
        c.worst = 2 - worst_count;
        c.evidence = "only " + std::to_string(worst_count) +
                     " sellers mix at " + Describe(worst_at);
      }
    }
    report.checks.push_back(c);
  }

  // (e) profit_constancy
  std::vector<double> measured(n, 0.0);
  {
    CheckResult c{"profit_constancy", true, 0.0, ""};
    for (int i = 0; i < n; ++i) {
      const PricingStrategy& s = profile.strategies[i];
      if (!s.mixed()) {
        measured[i] = ExpectedProfit(profile, cfg, i, s.price()).total;
        continue;
      }
      const int kGrid = 200;
      double mn = 0.0, mx = 0.0;
      for (int g = 0; g <= kGrid; ++g) {
        double p = g == kGrid ? s.cdf().hi()
                              : s.cdf().lo() +
                                    (s.cdf().hi() - s.cdf().lo()) * g / kGrid;
        // One-sided where rival atoms coincide with the grid point: mixing
        // puts no mass on a single price, so the tie-split payoff there is
        // not the equal-profit object.
        double v =
            ExpectedProfit(profile, cfg, i, p, SupportSide(profile, i, p))
                .total;
        if (g == 0) mn = mx = v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (s.mass_at_top() > 0.0) {
        double v = ExpectedProfit(profile, cfg, i, s.atom_price()).total;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      measured[i] = 0.5 * (mn + mx);
      double rel = (mx - mn) / std::max(std::fabs(mx), 1e-300);
      if (rel > c.worst) {
        c.worst = rel;
        c.evidence = "seller " + std::to_string(i) +
                     " profit varies by relative " + Describe(rel);
      }
    }
    c.passed = c.worst <= tol.profit_rel;
    report.checks.push_back(c);
  }

  // (f) no_deviation (concurrently per seller)
  {
    CheckResult c{"no_deviation", true, 0.0, ""};
    std::vector<std::future<std::pair<double, double>>> futs;
    futs.reserve(n);
    for (int i = 0; i < n; ++i)
      futs.push_back(std::async(std::launch::async, [&, i] {
        return BruteForceBestResponse(profile, cfg, i, tol.grid);
      }));
    for (int i = 0; i < n; ++i) {
      auto [bp, bv] = futs[i].get();
      double current = StrategyProfit(profile, cfg, i);
      double gain = bv - current;
      report.best_deviations.push_back({i, bp, gain});
      if (gain > c.worst) {
        c.worst = gain;
        c.evidence = "seller " + std::to_string(i) + " gains " +
                     Describe(gain) + " at price " + Describe(bp);
      }
    }
    c.passed = c.worst <= tol.deviation_rel * reserve;
    report.checks.push_back(c);
  }

  // (g) reserve_rational
  {
    CheckResult c{"reserve_rational", true, 0.0, ""};
    ReserveRationalityReport r = ReserveRational(profile, cfg);
    report.reserve_margin = r.min_margin;
    if (!r.exact_ok) {
      c.passed = false;
      c.worst = static_cast<double>(r.violation_prices.size());
      c.evidence = "continuing search pays after observing " +
                   Describe(r.violation_prices.front());
    }
    report.checks.push_back(c);
  }

  // (h) belief_consistency
  {
    CheckResult c{"belief_consistency", true, 0.0, ""};
    BeliefState b = TruthfulBeliefs(profile, cfg);
    if (b.total() != cfg.total_stores()) {
      c.passed = false;
      c.worst = std::fabs(b.total() - cfg.total_stores());
      c.evidence = "believed store counts do not match the market";
    }
    for (size_t x = 0; x < b.entries.size() && c.passed; ++x)
      for (size_t y = x + 1; y < b.entries.size() && c.passed; ++y)
        if (b.entries[x].strategy == b.entries[y].strategy) {
          c.passed = false;
          c.evidence = "duplicate strategy entries in beliefs";
        }
    report.checks.push_back(c);
  }

  // (i) profit_law
  {
    CheckResult c{"profit_law", true, 0.0, ""};
    DerivedConstants d = Derive(cfg);
    auto rel_gap = [](double x, double y) {
      return std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1e-300});
    };
    if (d.second_min_stores == 0) {
      for (int i = 1; i < n; ++i)
        c.worst = std::max(c.worst, rel_gap(measured[i], measured[0]));
      if (c.worst > tol.profit_rel) {
        c.passed = false;
        c.evidence = "equal-size market without equal profits";
      }
    } else {
      std::vector<double> ppb(n);
      for (int i = 0; i < n; ++i) ppb[i] = measured[i] / cfg.store_counts[i];
      if (d.smallest.size() >= 2) {
        for (int i = 1; i < n; ++i)
          c.worst = std::max(c.worst, rel_gap(ppb[i], ppb[0]));
        if (c.worst > tol.profit_rel) {
          c.passed = false;
          c.evidence = "profit per store differs across sellers";
        }
      } else {
        int m = d.smallest.front();
        double rest = -1.0;
        for (int i = 0; i < n; ++i) {
          if (i == m) continue;
          if (rest < 0.0) rest = ppb[i];
          c.worst = std::max(c.worst, rel_gap(ppb[i], rest));
        }
        if (c.worst > tol.profit_rel) {
          c.passed = false;
          c.evidence = "non-smallest sellers earn unequal profit per store";
        } else if (ppb[m] <= rest * (1.0 + tol.profit_rel)) {
          c.passed = false;
          c.worst = rel_gap(ppb[m], rest);
          c.evidence = "smallest seller does not earn strictly more per store";
        }
      }
    }
    report.checks.push_back(c);
  }

  report.passed = true;
  for (const CheckResult& c : report.checks) report.passed &= c.passed;
  return report;
}

SymmetryWitness NoSymmetricEquilibriumWitness(const StrategyProfile& profile,
                                              const MarketConfig& config) {
  MarketConfig cfg = Validate(config);
  ValidateShape(profile, cfg);
  SymmetryWitness w;
  for (const PricingStrategy& s : profile.strategies)
    if (!(s == profile.strategies[0]))
      Fail(ErrorCode::kInvalidArgument,
           "symmetry witness needs a symmetric profile");
  if (!profile.strategies[0].mixed()) return w;

  DerivedConstants d = Derive(cfg);
  int big = 0, small = 0;
  for (int i = 0; i < cfg.sellers(); ++i) {
    if (cfg.store_counts[i] > cfg.store_counts[big]) big = i;
    if (cfg.store_counts[i] < cfg.store_counts[small]) small = i;
  }
  if (cfg.store_counts[big] == cfg.store_counts[small]) return w;

  const ParamCdf& cdf = profile.strategies[0].cdf();
  double top = cdf.top_value();
  double p = cdf.quantile(0.25 * top);
  double q = cdf.quantile(0.75 * top);
  if (p == q) return w;

  auto pi = [&](int i, double x) {
    return ExpectedProfit(profile, cfg, i, x).total;
  };
  w.found = true;
  w.seller_a = big;
  w.seller_b = small;
  w.price_p = p;
  w.price_q = q;
  w.residual = std::fabs((pi(big, p) - pi(big, q)) - (pi(small, p) - pi(small, q)));
  (void)d;
  return w;
}

}  // namespace stahl
