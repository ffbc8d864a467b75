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

// Equilibrium construction.
//
// All equilibria here share one template. Some sellers ("full mixers") mix
// continuously over a common interval [p_lo, reserve]; some price purely at
// the reserve; some mix below a personal cutoff and park their remaining
// mass at the reserve. Writing sigma for the searcher mass a mixing seller
// serves and mu for the shopper mass, a seller posting p earns
//
//   profit(p) = p * (mu * P(every rival prices above p) + sigma).
//
// A rival still mixing at p prices above it with probability 1 - F(p); a
// cutoff rival already past its cutoff does so with exactly its reserve
// mass; a pure-reserve rival always does. Equal profit on the support pins
// F segment by segment: with m(p) sellers still mixing at p and A(p) the
// product of passed cutoff masses,
//
//   p * (sigma + mu * (1 - F(p))^(m(p)-1) * A(p)) = reserve * sigma,
//
// the right side being the profit from searchers alone at the reserve.
// Solving gives (1-F(p))^(m(p)-1) = sigma (reserve - p) / (mu A(p) p) --
// the kGroupMix closed form. F is continuous at each cutoff because the
// cutoff mass is defined as the survival there, and the support bottom
// solves p_lo (sigma + mu) = reserve * sigma.
//
// With a unique smallest seller the equal-profit conditions split: the
// smallest seller (share src_m) must keep every second-smallest mixer
// (share src_j) indifferent, and vice versa. Writing G for the shared
// second-smallest distribution (q(p) of them still mixing at p, passed
// cutoffs contributing the product A(p)) and F for the smallest seller's:
//
//   p (src_m + mu (1-G)^q A)              = p_lo (src_m + mu)
//   p (src_j + mu (1-F) (1-G)^(q-1) A)    = reserve * src_j
//
// so (1-G)^q A = R(p) := (p_lo (src_m + mu) - p src_m) / (mu p) and
// 1-F = src_j (reserve - p) / (mu p (1-G)^(q-1) A). These are the
// kSecondMix and kSmallestMix closed forms. Larger sellers strictly prefer
// the reserve because their searcher share exceeds src_j.
//
// The reserve price makes searchers indifferent: the cheapest mixing
// distribution F must satisfy E[F] = reserve - search_cost. Every formula
// above is homogeneous of degree one in prices, so E[F] = kappa * reserve
// with kappa independent of the reserve, giving reserve = c / (1 - kappa).

#include "stahl/construct.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stahl/error.hpp"
#include "stahl/payoff.hpp"

namespace stahl {

double LowestPrice(double reserve_price, double sigma, double mu) {
  return reserve_price * sigma / (mu + sigma);
}

double LowestPriceSymmetric(double reserve_price, int sellers, double mu) {
  if (sellers < 2) Fail(ErrorCode::kInvalidArgument, "need >= 2 sellers");
  return reserve_price * (1.0 - mu) / ((sellers - 1) * mu + 1.0);
}

namespace {

// Cutoff fractions sorted ascending, with the original seller ids alongside.
struct SortedCutoffs {
  std::vector<double> frac;
  std::vector<int> seller;
};

SortedCutoffs SortCutoffs(const std::vector<CutoffSpec>& specs) {
  std::vector<CutoffSpec> sorted = specs;
  std::sort(sorted.begin(), sorted.end(),
            [](const CutoffSpec& a, const CutoffSpec& b) {
              return a.fraction < b.fraction;
            });
  SortedCutoffs out;
  for (size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i].fraction == sorted[i + 1].fraction)
      Fail(ErrorCode::kConstructFailure,
           "groups: cutoff fractions must be distinct");
  for (const CutoffSpec& s : sorted) {
    out.frac.push_back(s.fraction);
    out.seller.push_back(s.seller);
  }
  return out;
}

// The shared distribution of a symmetric mixing group, normalized to
// reserve = 1. Scaling to a reserve R multiplies lo and u1/r1 by R.
struct GroupLayout {
  double rho = 0.0;  // lowest price as a fraction of the reserve
  std::vector<CdfSegment> segments;
  std::vector<double> cutoff_mass;  // aligned with the sorted cutoffs
};

GroupLayout BuildGroupLayout(double sigma, double mu, int full_mixers,
                             const std::vector<double>& cut_fracs) {
  const int mixer_count = full_mixers;
  const int g = static_cast<int>(cut_fracs.size());
  if (mixer_count < 2)
    Fail(ErrorCode::kConstructFailure,
         "groups: need at least two full mixers");
  GroupLayout out;
  out.rho = sigma / (mu + sigma);
  for (double f : cut_fracs)
    if (!(f > out.rho) || !(f < 1.0))
      Fail(ErrorCode::kConstructFailure,
           "groups: cutoff fraction outside (lowest price, reserve)");

  double passed_mass = 1.0;  // product of cutoff masses already passed
  double start = out.rho;
  for (int s = 0; s <= g; ++s) {
    const int exponent = mixer_count + (g - s) - 1;  // rivals still mixing
    const double coef = sigma / (mu * passed_mass);
    CdfSegment seg;
    seg.lo = start;
    seg.u1 = coef;  // times the reserve once scaled
    seg.u2 = coef;
    seg.e1 = 1.0 / exponent;
    out.segments.push_back(seg);
    if (s == g) break;
    const double x = cut_fracs[s];
    double mass = std::pow(coef * (1.0 - x) / x, seg.e1);
    if (!(mass > 0.0) || !(mass < 1.0))
      Fail(ErrorCode::kConstructFailure,
           "groups: cutoff mass escaped (0,1); inconsistent group spec");
    out.cutoff_mass.push_back(mass);
    passed_mass *= mass;
    start = x;
  }
  return out;
}

ParamCdf ScaleLayout(CdfFamily family, const std::vector<CdfSegment>& segs,
                     double rho, double upto, double reserve) {
  std::vector<CdfSegment> scaled;
  for (const CdfSegment& s : segs) {
    if (s.lo >= upto) break;
    CdfSegment t = s;
    t.lo *= reserve;
    t.u1 *= reserve;
    t.r1 *= reserve;
    scaled.push_back(t);
  }
  return ParamCdf::ClosedForm(family, rho * reserve, upto * reserve,
                              std::move(scaled));
}

void CheckPartition(const GroupSpec& groups, const std::vector<int>& members,
                    const char* what) {
  std::set<int> seen;
  auto add = [&](int i) {
    if (std::find(members.begin(), members.end(), i) == members.end())
      Fail(ErrorCode::kConstructFailure,
           std::string("groups: seller outside the ") + what);
    if (!seen.insert(i).second)
      Fail(ErrorCode::kConstructFailure, "groups: seller assigned twice");
  };
  for (int i : groups.full_mixers) add(i);
  for (int i : groups.pure_reserve) add(i);
  for (const CutoffSpec& c : groups.cutoffs) add(c.seller);
  if (seen.size() != members.size())
    Fail(ErrorCode::kConstructFailure,
         std::string("groups: every seller in the ") + what +
             " needs a group");
}

double ReserveFromKappa(double kappa, double search_cost, double bound) {
  if (!(kappa < 1.0))
    Fail(ErrorCode::kConstructFailure,
         "no valid reserve price: expected mixing price would not leave room "
         "for the search cost");
  double reserve = search_cost / (1.0 - kappa);
  if (reserve > bound)
    Fail(ErrorCode::kConstructFailure,
         "solved reserve price exceeds the valuation bound");
  return reserve;
}

ConstructedEquilibrium BuildGroupEquilibrium(const MarketConfig& config,
                                             const GroupSpec& groups,
                                             const std::vector<int>& mixing_set,
                                             double sigma) {
  const double mu = config.shopper_fraction;
  SortedCutoffs cuts = SortCutoffs(groups.cutoffs);
  GroupLayout layout = BuildGroupLayout(
      sigma, mu, static_cast<int>(groups.full_mixers.size()), cuts.frac);

  ParamCdf unit = ScaleLayout(CdfFamily::kGroupMix, layout.segments,
                              layout.rho, 1.0, 1.0);
  const double kappa = unit.partial_expectation();
  const double reserve =
      ReserveFromKappa(kappa, config.search_cost, config.valuation_bound);

  ConstructedEquilibrium out;
  out.lowest_price = layout.rho * reserve;
  out.diagnostics.kappa = kappa;

  DerivedConstants d = Derive(config);
  out.profile.reserve_price = reserve;
  out.profile.strategies.resize(config.sellers());
  for (int i = 0; i < config.sellers(); ++i)
    out.profile.strategies[i] = PricingStrategy::Pure(reserve);
  for (int i : groups.full_mixers)
    out.profile.strategies[i] = PricingStrategy::MixedFull(
        ScaleLayout(CdfFamily::kGroupMix, layout.segments, layout.rho, 1.0,
                    reserve),
        0.0);
  for (size_t c = 0; c < cuts.frac.size(); ++c)
    out.profile.strategies[cuts.seller[c]] = PricingStrategy::Cutoff(
        ScaleLayout(CdfFamily::kGroupMix, layout.segments, layout.rho,
                    cuts.frac[c], reserve),
        reserve);

  for (int i = 0; i < config.sellers(); ++i)
    out.analytic_profit.push_back(reserve * d.searcher_share[i]);
  (void)mixing_set;

  const int probe = groups.full_mixers.front();
  out.diagnostics.expectation_residual = std::fabs(
      out.profile.strategies[probe].expected_price() -
      (reserve - config.search_cost));
  return out;
}

}  // namespace

double GroupCdfValue(double p, const GroupSpec& groups, double reserve_price,
                     double mu, double sigma) {
  SortedCutoffs cuts = SortCutoffs(groups.cutoffs);
  GroupLayout layout = BuildGroupLayout(
      sigma, mu, static_cast<int>(groups.full_mixers.size()), cuts.frac);
  ParamCdf cdf = ScaleLayout(CdfFamily::kGroupMix, layout.segments,
                             layout.rho, 1.0, reserve_price);
  if (p < cdf.lo() - 1e-9 * reserve_price || p > reserve_price * (1 + 1e-12))
    Fail(ErrorCode::kInvalidArgument, "group cdf: price outside the support");
  return cdf.value(p);
}

double SolveReservePrice(const GroupSpec& groups, double mu, int sellers,
                         double search_cost) {
  if (sellers < 2) Fail(ErrorCode::kInvalidArgument, "need >= 2 sellers");
  SortedCutoffs cuts = SortCutoffs(groups.cutoffs);
  double sigma = (1.0 - mu) / sellers;
  GroupLayout layout = BuildGroupLayout(
      sigma, mu, static_cast<int>(groups.full_mixers.size()), cuts.frac);
  ParamCdf unit = ScaleLayout(CdfFamily::kGroupMix, layout.segments,
                              layout.rho, 1.0, 1.0);
  return search_cost / (1.0 - unit.partial_expectation());
}

ConstructedEquilibrium ConstructOriginal(const MarketConfig& config,
                                         const GroupSpec& groups) {
  MarketConfig cfg = Validate(config);
  for (int k : cfg.store_counts)
    if (k != cfg.store_counts[0])
      Fail(ErrorCode::kConstructFailure,
           "equal-size construction requires all sellers the same size");
  std::vector<int> all(cfg.sellers());
  for (int i = 0; i < cfg.sellers(); ++i) all[i] = i;
  CheckPartition(groups, all, "market");
  return BuildGroupEquilibrium(cfg, groups, all,
                               (1.0 - cfg.shopper_fraction) / cfg.sellers());
}

ConstructedEquilibrium ConstructExtended(const MarketConfig& config,
                                         const GroupSpec& groups) {
  MarketConfig cfg = Validate(config);
  DerivedConstants d = Derive(cfg);
  if (d.smallest.size() < 2)
    Fail(ErrorCode::kConstructFailure,
         "unique smallest seller: use the unique-smallest construction");
  CheckPartition(groups, d.smallest, "smallest-seller set");
  const double sigma =
      (1.0 - cfg.shopper_fraction) * d.min_stores / d.total_stores;
  return BuildGroupEquilibrium(cfg, groups, d.smallest, sigma);
}

ConstructedEquilibrium ConstructUniqueSmallest(const MarketConfig& config,
                                               const GroupSpec& j_groups) {
  MarketConfig cfg = Validate(config);
  DerivedConstants d = Derive(cfg);
  if (d.smallest.size() != 1)
    Fail(ErrorCode::kConstructFailure,
         "this construction needs a unique smallest seller");
  const int m = d.smallest.front();
  CheckPartition(j_groups, d.second_smallest, "second-smallest set");
  if (j_groups.full_mixers.empty())
    Fail(ErrorCode::kConstructFailure,
         "need at least one second-smallest full mixer");

  const double mu = cfg.shopper_fraction;
  const double src_m = d.searcher_share[m];
  const double src_j = d.searcher_share[d.second_smallest.front()];
  const double rho = src_j / (mu + src_j);

  SortedCutoffs cuts = SortCutoffs(j_groups.cutoffs);
  const int oj = static_cast<int>(j_groups.full_mixers.size());
  const int gj = static_cast<int>(cuts.frac.size());
  for (double f : cuts.frac)
    if (!(f > rho) || !(f < 1.0))
      Fail(ErrorCode::kConstructFailure,
           "groups: cutoff fraction outside (lowest price, reserve)");

  // Normalized to reserve = 1: R(x) = (a - b x) / (mu x).
  const double a = rho * (mu + src_m);
  const double b = src_m;
  auto r_of = [&](double x) { return (a - b * x) / (mu * x); };

  std::vector<CdfSegment> j_segs, m_segs;
  std::vector<double> cutoff_mass;
  double passed = 1.0;
  double start = rho;
  for (int s = 0; s <= gj; ++s) {
    const int q = oj + (gj - s);  // second-smallest sellers still mixing
    CdfSegment j;
    j.lo = start;
    j.u1 = a / (mu * passed);
    j.u2 = b / (mu * passed);
    j.e1 = 1.0 / q;
    j_segs.push_back(j);
    CdfSegment mseg;
    mseg.lo = start;
    mseg.u1 = src_j / mu;
    mseg.u2 = src_j / mu;
    mseg.e1 = 1.0;
    if (q > 1) {
      mseg.r1 = a / (mu * passed);
      mseg.r2 = b / (mu * passed);
      mseg.e2 = (1.0 - q) / static_cast<double>(q);
    }
    m_segs.push_back(mseg);
    if (s == gj) break;
    const double x = cuts.frac[s];
    double mass = std::pow(r_of(x) / passed, 1.0 / q);
    if (!(mass > 0.0) || !(mass < 1.0))
      Fail(ErrorCode::kConstructFailure,
           "groups: cutoff mass escaped (0,1); inconsistent group spec");
    cutoff_mass.push_back(mass);
    passed *= mass;
    start = x;
  }
  const double top_mass = std::pow(r_of(1.0) / passed, 1.0 / oj);
  if (!(top_mass > 0.0) || !(top_mass < 1.0))
    Fail(ErrorCode::kConstructFailure,
         "second-smallest reserve mass escaped (0,1)");

  ParamCdf m_unit =
      ScaleLayout(CdfFamily::kSmallestMix, m_segs, rho, 1.0, 1.0);
  const double kappa = m_unit.partial_expectation();
  const double reserve =
      ReserveFromKappa(kappa, cfg.search_cost, cfg.valuation_bound);

  ConstructedEquilibrium out;
  out.lowest_price = rho * reserve;
  out.diagnostics.kappa = kappa;
  out.profile.reserve_price = reserve;
  out.profile.strategies.resize(cfg.sellers());
  for (int i = 0; i < cfg.sellers(); ++i)
    out.profile.strategies[i] = PricingStrategy::Pure(reserve);
  out.profile.strategies[m] = PricingStrategy::MixedFull(
      ScaleLayout(CdfFamily::kSmallestMix, m_segs, rho, 1.0, reserve), 0.0);
  for (int i : j_groups.full_mixers)
    out.profile.strategies[i] = PricingStrategy::MixedFull(
        ScaleLayout(CdfFamily::kSecondMix, j_segs, rho, 1.0, reserve),
        top_mass);
  for (size_t c = 0; c < cuts.frac.size(); ++c)
    out.profile.strategies[cuts.seller[c]] = PricingStrategy::Cutoff(
        ScaleLayout(CdfFamily::kSecondMix, j_segs, rho, cuts.frac[c], reserve),
        reserve);

  for (int i = 0; i < cfg.sellers(); ++i) {
    double profit = (i == m) ? out.lowest_price * (mu + src_m)
                             : reserve * d.searcher_share[i];
    out.analytic_profit.push_back(profit);
  }
  out.diagnostics.expectation_residual =
      std::fabs(out.profile.strategies[m].expected_price() -
                (reserve - cfg.search_cost));
  return out;
}

GroupSpec DefaultGroups(const MarketConfig& config) {
  DerivedConstants d = Derive(config);
  GroupSpec g;
  if (d.smallest.size() >= 2) {
    g.full_mixers = d.smallest;
    return g;
  }
  g.full_mixers.push_back(d.second_smallest.front());
  for (size_t i = 1; i < d.second_smallest.size(); ++i)
    g.pure_reserve.push_back(d.second_smallest[i]);
  return g;
}

ConstructedEquilibrium Construct(const MarketConfig& config,
                                 const GroupSpec* groups) {
  MarketConfig cfg = Validate(config);
  GroupSpec defaulted = groups ? *groups : DefaultGroups(cfg);
  DerivedConstants d = Derive(cfg);
  if (d.second_min_stores == 0) return ConstructOriginal(cfg, defaulted);
  if (d.smallest.size() >= 2) return ConstructExtended(cfg, defaulted);
  return ConstructUniqueSmallest(cfg, defaulted);
}

}  // namespace stahl
