// Copyright 2026 The StahlSearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stahl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stahl/construct.hpp"
#include "stahl/error.hpp"
#include "stahl/numeric.hpp"
#include "stahl/payoff.hpp"

namespace stahl {
namespace {

// Replications are grouped into fixed-size chunks.  Each chunk owns its own
// long double accumulators and chunks are always folded together in index
// order, so the totals are bit-identical no matter how many threads ran.
constexpr std::uint64_t kChunk = 4096;

// The exhaustive-search fallback walks every (visited set, location) state,
// so cap the seller count where that path is even representable.
constexpr int kMaxFlowSellers = 24;

struct ChunkAccum {
  std::vector<long double> revenue;      // per seller, price * quantity sums
  std::vector<long double> revenue_sq;   // per seller, squared per-rep revenue
  std::vector<long double> quantity;     // per seller
  std::vector<long double> histogram;    // mass of price paid per bin
  long double searches = 0.0L;           // visit count weighted by mass
  long double first_store = 0.0L;        // searcher mass buying where it lands
  long double searcher_pay = 0.0L;       // price * searcher mass sums

  ChunkAccum(int sellers, int bins)
      : revenue(static_cast<std::size_t>(sellers), 0.0L),
        revenue_sq(static_cast<std::size_t>(sellers), 0.0L),
        quantity(static_cast<std::size_t>(sellers), 0.0L),
        histogram(static_cast<std::size_t>(bins), 0.0L) {}

  void Fold(const ChunkAccum& other) {
    for (std::size_t i = 0; i < revenue.size(); ++i) {
      revenue[i] += other.revenue[i];
      revenue_sq[i] += other.revenue_sq[i];
      quantity[i] += other.quantity[i];
    }
    for (std::size_t b = 0; b < histogram.size(); ++b) {
      histogram[b] += other.histogram[b];
    }
    searches += other.searches;
    first_store += other.first_store;
    searcher_pay += other.searcher_pay;
  }
};

// Scratch space reused across the replications of one chunk.
struct Scratch {
  std::vector<double> prices;
  std::vector<double> quantity;  // per seller, this replication
  std::vector<double> pay;       // price actually paid, aligned with mass
};

struct HistSpec {
  double lo = 0.0;
  double hi = 1.0;
  int bins = 1;
};

int HistBin(const HistSpec& h, double price) {
  double t = (price - h.lo) / (h.hi - h.lo);
  int b = static_cast<int>(std::floor(t * h.bins));
  return std::clamp(b, 0, h.bins - 1);
}

// Splits one unit of shopper mass across the cheapest posted price,
// store-count-weighted when several sellers tie exactly.
void ShopperDemand(const std::vector<double>& prices,
                   const std::vector<int>& counts, double mass,
                   std::vector<double>* quantity) {
  double min_price = *std::min_element(prices.begin(), prices.end());
  double weight = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prices[i] == min_price) weight += counts[i];
  }
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prices[i] == min_price) {
      (*quantity)[i] += mass * counts[i] / weight;
    }
  }
}

// Deterministic searcher routing: the unit of searcher mass is treated as a
// fluid.  It lands on a store in proportion to store counts, buys if the
// price is weakly below the stopping threshold, and otherwise flows onward,
// again in proportion to the counts of unvisited stores.  Mass that has seen
// every store returns to the cheapest observed price (free recall).
struct FlowResult {
  double searches = 0.0;     // visits weighted by mass
  double first_store = 0.0;  // mass that stops where it lands
  double pay = 0.0;          // sum of price * mass
};

FlowResult SearcherFlow(const std::vector<double>& prices,
                        const std::vector<int>& counts, double threshold,
                        double mass, std::vector<double>* quantity) {
  FlowResult out;
  const int n = static_cast<int>(prices.size());

  bool all_stop = true;
  for (double p : prices) {
    if (p > threshold) all_stop = false;
  }
  double total_counts = 0.0;
  for (int c : counts) total_counts += c;

  if (all_stop) {
    // Fast path: everybody buys at the store they land on.
    for (int i = 0; i < n; ++i) {
      double m = mass * counts[i] / total_counts;
      (*quantity)[i] += m;
      out.pay += m * prices[i];
    }
    out.searches = mass;
    out.first_store = mass;
    return out;
  }

  if (n > kMaxFlowSellers) {
    Fail(ErrorCode::kInvalidProfile,
         "searcher routing above the stopping threshold supports at most " +
             std::to_string(kMaxFlowSellers) + " sellers");
  }

  // State: (set of visited sellers, seller currently being sampled) -> mass.
  // Visiting in rounds keyed by |visited| keeps the walk finite; an ordered
  // map keeps the floating-point summation order reproducible.
  using State = std::pair<std::uint32_t, int>;
  std::map<State, double> layer;
  for (int i = 0; i < n; ++i) {
    double m = mass * counts[i] / total_counts;
    if (m > 0.0) layer[{1u << i, i}] = m;
  }

  for (int round = 1; round <= n && !layer.empty(); ++round) {
    std::map<State, double> next;
    for (const auto& [state, m] : layer) {
      auto [visited, cur] = state;
      out.searches += m;  // this mass just sampled seller `cur`
      if (prices[cur] <= threshold) {
        (*quantity)[cur] += m;
        out.pay += m * prices[cur];
        if (round == 1) out.first_store += m;
        continue;
      }
      double left = 0.0;
      for (int j = 0; j < n; ++j) {
        if (!(visited & (1u << j))) left += counts[j];
      }
      if (left == 0.0) {
        // Saw everything: recall the cheapest price observed so far (all of
        // them, at this point), store-count-weighted across exact ties.
        double best = prices[0];
        for (double p : prices) best = std::min(best, p);
        double weight = 0.0;
        for (int j = 0; j < n; ++j) {
          if (prices[j] == best) weight += counts[j];
        }
        for (int j = 0; j < n; ++j) {
          if (prices[j] == best) {
            double share = m * counts[j] / weight;
            (*quantity)[j] += share;
            out.pay += share * best;
          }
        }
        continue;
      }
      for (int j = 0; j < n; ++j) {
        if (visited & (1u << j)) continue;
        next[{visited | (1u << j), j}] += m * counts[j] / left;
      }
    }
    layer.swap(next);
  }
  return out;
}

// Sampled searcher routing: `agents` discrete searchers follow the same
// rules, each resolving its store choices with its own random draws.
FlowResult AgentSearchers(const std::vector<double>& prices,
                          const std::vector<int>& counts, double threshold,
                          double mass, const CounterRng& rng, int agents,
                          std::vector<double>* quantity) {
  FlowResult out;
  const int n = static_cast<int>(prices.size());
  double total_counts = 0.0;
  for (int c : counts) total_counts += c;
  const double unit = mass / agents;

  // Draw layout within the replication stream: counters [0, n) are the
  // seller price draws; agent a uses counters n + a*(n+1) + step.
  for (int a = 0; a < agents; ++a) {
    std::uint64_t base = static_cast<std::uint64_t>(n) +
                         static_cast<std::uint64_t>(a) *
                             static_cast<std::uint64_t>(n + 1);
    std::uint32_t visited = 0;
    int visits = 0;
    int cur = -1;
    for (int step = 0; step <= n; ++step) {
      double left = 0.0;
      for (int j = 0; j < n; ++j) {
        if (!(visited & (1u << j))) left += counts[j];
      }
      if (left == 0.0) break;
      double u = rng.Uniform(base + static_cast<std::uint64_t>(step)) * left;
      cur = -1;
      for (int j = 0; j < n; ++j) {
        if (visited & (1u << j)) continue;
        u -= counts[j];
        if (u <= 0.0) {
          cur = j;
          break;
        }
      }
      if (cur < 0) {  // guard against roundoff at u ~ left
        for (int j = n - 1; j >= 0; --j) {
          if (!(visited & (1u << j))) {
            cur = j;
            break;
          }
        }
      }
      visited |= 1u << cur;
      ++visits;
      if (prices[cur] <= threshold) break;
      cur = -1;
    }
    out.searches += unit * visits;
    if (cur >= 0) {
      if (visits == 1) out.first_store += unit;
      (*quantity)[cur] += unit;
      out.pay += unit * prices[cur];
    } else {
      // Exhausted: recall the cheapest store; break exact ties by count
      // with one more draw.
      double best = prices[0];
      for (double p : prices) best = std::min(best, p);
      double weight = 0.0;
      for (int j = 0; j < n; ++j) {
        if (prices[j] == best) weight += counts[j];
      }
      double u =
          rng.Uniform(base + static_cast<std::uint64_t>(n)) * weight;
      int pick = -1;
      for (int j = 0; j < n; ++j) {
        if (prices[j] != best) continue;
        u -= counts[j];
        if (u <= 0.0) {
          pick = j;
          break;
        }
      }
      if (pick < 0) {
        for (int j = n - 1; j >= 0; --j) {
          if (prices[j] == best) {
            pick = j;
            break;
          }
        }
      }
      (*quantity)[pick] += unit;
      out.pay += unit * prices[pick];
    }
  }
  return out;
}

void RunChunk(const StrategyProfile& profile, const MarketConfig& config,
              const SimOptions& options, const HistSpec& hist,
              std::uint64_t rep_begin, std::uint64_t rep_end,
              ChunkAccum* acc) {
  const int n = profile.sellers();
  const double mu = config.shopper_fraction;
  const double threshold =
      std::max(profile.reserve_price, config.search_cost);
  Scratch s;
  s.prices.resize(static_cast<std::size_t>(n));
  s.quantity.resize(static_cast<std::size_t>(n));

  for (std::uint64_t rep = rep_begin; rep < rep_end; ++rep) {
    CounterRng rng(options.seed, rep);
    for (int i = 0; i < n; ++i) {
      s.prices[static_cast<std::size_t>(i)] =
          profile.strategies[static_cast<std::size_t>(i)].sample(
              rng.Uniform(static_cast<std::uint64_t>(i)));
    }
    std::fill(s.quantity.begin(), s.quantity.end(), 0.0);

    ShopperDemand(s.prices, config.store_counts, mu, &s.quantity);
    double min_price = *std::min_element(s.prices.begin(), s.prices.end());

    FlowResult flow;
    if (mu < 1.0) {
      flow = options.agent_mode
                 ? AgentSearchers(s.prices, config.store_counts, threshold,
                                  1.0 - mu, rng, options.agents, &s.quantity)
                 : SearcherFlow(s.prices, config.store_counts, threshold,
                                1.0 - mu, &s.quantity);
    }

    double total_q = 0.0;
    for (double q : s.quantity) total_q += q;
    if (std::abs(total_q - 1.0) > 1e-9) {
      Fail(ErrorCode::kNumericFailure,
           "replayed quantities do not sum to one: " +
               std::to_string(total_q));
    }

    for (int i = 0; i < n; ++i) {
      auto k = static_cast<std::size_t>(i);
      double rev = s.prices[k] * s.quantity[k];
      acc->revenue[k] += rev;
      acc->revenue_sq[k] += static_cast<long double>(rev) * rev;
      acc->quantity[k] += s.quantity[k];
    }
    // Histogram of prices actually paid this replication: shopper mass at
    // the minimum plus seller-level searcher purchases.
    acc->histogram[static_cast<std::size_t>(HistBin(hist, min_price))] += mu;
    for (int i = 0; i < n; ++i) {
      auto k = static_cast<std::size_t>(i);
      double searcher_q = s.quantity[k];
      if (s.prices[k] == min_price) {
        double weight = 0.0;
        for (int j = 0; j < n; ++j) {
          if (s.prices[static_cast<std::size_t>(j)] == min_price) {
            weight += config.store_counts[static_cast<std::size_t>(j)];
          }
        }
        searcher_q -= mu * config.store_counts[k] / weight;
      }
      if (searcher_q > 0.0) {
        acc->histogram[static_cast<std::size_t>(HistBin(hist, s.prices[k]))] +=
            searcher_q;
      }
    }
    acc->searches += flow.searches;
    acc->first_store += flow.first_store;
    acc->searcher_pay += flow.pay;
  }
}

HistSpec HistogramBounds(const StrategyProfile& profile, int bins) {
  HistSpec h;
  h.bins = std::max(1, bins);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : profile.strategies) {
    lo = std::min(lo, s.support_lo());
    hi = std::max(hi, s.support_hi());
  }
  if (!(hi > lo)) hi = lo + std::max(1.0, std::abs(lo));
  h.lo = lo;
  h.hi = hi;
  return h;
}

}  // namespace

SimulationResult Simulate(const StrategyProfile& profile,
                          const MarketConfig& config,
                          const SimOptions& options) {
  MarketConfig cfg = Validate(config);
  ValidateShape(profile, cfg);
  if (options.replications == 0) {
    Fail(ErrorCode::kInvalidArgument, "replications must be positive");
  }
  if (options.agent_mode && options.agents <= 0) {
    Fail(ErrorCode::kInvalidArgument,
         "agent mode requires a positive agent count");
  }
  if (options.histogram_bins <= 0) {
    Fail(ErrorCode::kInvalidArgument, "histogram_bins must be positive");
  }

  const int n = profile.sellers();
  const HistSpec hist = HistogramBounds(profile, options.histogram_bins);
  const std::uint64_t reps = options.replications;
  const std::uint64_t chunks = (reps + kChunk - 1) / kChunk;
  const int threads =
      std::max(1, std::min<int>(options.threads,
                                static_cast<int>(std::min<std::uint64_t>(
                                    chunks, 1024))));

  std::vector<ChunkAccum> per_chunk(
      static_cast<std::size_t>(chunks), ChunkAccum(n, hist.bins));

  auto worker = [&](int t) {
    for (std::uint64_t c = static_cast<std::uint64_t>(t); c < chunks;
         c += static_cast<std::uint64_t>(threads)) {
      std::uint64_t lo = c * kChunk;
      std::uint64_t hi = std::min(reps, lo + kChunk);
      RunChunk(profile, cfg, options, hist, lo, hi,
               &per_chunk[static_cast<std::size_t>(c)]);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, worker, t));
    }
    for (auto& f : futures) f.get();  // rethrows worker failures
  }

  ChunkAccum total(n, hist.bins);
  for (const auto& c : per_chunk) total.Fold(c);

  SimulationResult out;
  out.replications = reps;
  out.seed = options.seed;
  out.hist_lo = hist.lo;
  out.hist_hi = hist.hi;
  out.sellers.resize(static_cast<std::size_t>(n));
  const auto r = static_cast<long double>(reps);
  for (int i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    long double mean = total.revenue[k] / r;
    long double var = 0.0L;
    if (reps > 1) {
      var = (total.revenue_sq[k] - total.revenue[k] * total.revenue[k] / r) /
            (r - 1.0L);
      if (var < 0.0L) var = 0.0L;
    }
    out.sellers[k].profit_mean = static_cast<double>(mean);
    out.sellers[k].profit_se = static_cast<double>(std::sqrt(var / r));
    out.sellers[k].quantity_mean = static_cast<double>(total.quantity[k] / r);
  }
  const double searcher_mass = 1.0 - cfg.shopper_fraction;
  if (searcher_mass > 0.0) {
    out.mean_searches =
        static_cast<double>(total.searches / r) / searcher_mass;
    out.first_store_fraction =
        static_cast<double>(total.first_store / r) / searcher_mass;
    out.searcher_price_mean =
        static_cast<double>(total.searcher_pay / r) / searcher_mass;
  }
  out.histogram.resize(static_cast<std::size_t>(hist.bins));
  for (int b = 0; b < hist.bins; ++b) {
    out.histogram[static_cast<std::size_t>(b)] =
        static_cast<double>(total.histogram[static_cast<std::size_t>(b)] / r);
  }
  return out;
}

std::vector<SweepRow> Sweep(const SweepSpec& spec, const SimOptions* sim) {
  const bool counts_axis = !spec.counts_axis.empty();
  const bool mu_axis = !spec.mu_axis.empty();
  if (counts_axis == mu_axis) {
    Fail(ErrorCode::kInvalidArgument,
         "exactly one sweep axis (store counts or shopper fraction) is "
         "required");
  }
  const std::size_t rows =
      counts_axis ? spec.counts_axis.size() : spec.mu_axis.size();

  std::vector<SweepRow> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    SweepRow row;
    row.counts = counts_axis ? spec.counts_axis[r] : spec.fixed_counts;
    row.mu = mu_axis ? spec.mu_axis[r] : spec.mu;
    row.search_cost = spec.search_cost;
    try {
      MarketConfig cfg;
      cfg.store_counts = row.counts;
      cfg.shopper_fraction = row.mu;
      cfg.search_cost = spec.search_cost;
      cfg.valuation_bound = spec.valuation_bound;
      cfg = Validate(cfg);
      DerivedConstants d = Derive(cfg);

      ConstructedEquilibrium eq = Construct(cfg);
      row.reserve_price = eq.profile.reserve_price;
      row.lowest_price = eq.lowest_price;

      double searcher_pay = 0.0;
      double total_profit = 0.0;
      for (int i = 0; i < eq.profile.sellers(); ++i) {
        auto k = static_cast<std::size_t>(i);
        double share = (1.0 - cfg.shopper_fraction) *
                       cfg.store_counts[k] / d.total_stores;
        searcher_pay += share * eq.profile.strategies[k].expected_price();
        total_profit += eq.analytic_profit[k];
      }
      row.searcher_price = cfg.shopper_fraction < 1.0
                               ? searcher_pay / (1.0 - cfg.shopper_fraction)
                               : 0.0;
      row.shopper_price = ExpectedMinimumPrice(eq.profile);
      row.total_profit = total_profit;

      if (sim != nullptr && sim->replications > 0) {
        SimulationResult res = Simulate(eq.profile, cfg, *sim);
        row.sim_searcher_price = res.searcher_price_mean;
        double sim_total = 0.0;
        for (const auto& st : res.sellers) sim_total += st.profit_mean;
        row.sim_total_profit = sim_total;
      }
      row.ok = true;
    } catch (const StahlError& e) {
      row.ok = false;
      row.error = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace stahl
