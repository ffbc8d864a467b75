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

#include "stahl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "stahl/error.hpp"

namespace stahl {
namespace {

// Tokenized view of a "key value..." document with '#' comments.
struct Lines {
  std::vector<std::vector<std::string>> rows;
};

Lines Tokenize(const std::string& text) {
  Lines out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) out.rows.push_back(std::move(tokens));
  }
  return out;
}

void ExpectMagic(const Lines& doc, const std::string& magic, int version) {
  if (doc.rows.empty()) {
    Fail(ErrorCode::kParseError, "empty document, expected " + magic);
  }
  const auto& head = doc.rows.front();
  if (head.size() != 2 || head[0] != magic) {
    Fail(ErrorCode::kParseError,
         "bad header, expected '" + magic + " " + std::to_string(version) +
             "'");
  }
  if (head[1] != std::to_string(version)) {
    Fail(ErrorCode::kParseError,
         "unsupported " + magic + " version '" + head[1] + "', expected " +
             std::to_string(version));
  }
}

double ParseDouble(const std::string& tok) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    Fail(ErrorCode::kParseError, "bad number '" + tok + "'");
  }
}

int ParseInt(const std::string& tok) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    Fail(ErrorCode::kParseError, "bad integer '" + tok + "'");
  }
}

std::string FamilyName(CdfFamily family) {
  switch (family) {
    case CdfFamily::kGroupMix: return "group_mix";
    case CdfFamily::kSmallestMix: return "smallest_mix";
    case CdfFamily::kSecondMix: return "second_mix";
    case CdfFamily::kTabulated: return "tabulated";
  }
  Fail(ErrorCode::kParseError, "unknown distribution family");
}

CdfFamily FamilyFromName(const std::string& name) {
  if (name == "group_mix") return CdfFamily::kGroupMix;
  if (name == "smallest_mix") return CdfFamily::kSmallestMix;
  if (name == "second_mix") return CdfFamily::kSecondMix;
  if (name == "tabulated") return CdfFamily::kTabulated;
  Fail(ErrorCode::kParseError, "unknown distribution family '" + name + "'");
}

void AppendCdf(std::ostringstream* out, const ParamCdf& cdf) {
  if (cdf.family() == CdfFamily::kTabulated) {
    *out << "cdf tabulated " << cdf.knots().size() << "\n";
    for (std::size_t i = 0; i < cdf.knots().size(); ++i) {
      *out << "knot " << FormatDouble(cdf.knots()[i]) << " "
           << FormatDouble(cdf.knot_values()[i]) << "\n";
    }
    return;
  }
  *out << "cdf " << FamilyName(cdf.family()) << " " << FormatDouble(cdf.lo())
       << " " << FormatDouble(cdf.hi()) << " " << cdf.segments().size()
       << "\n";
  for (const auto& s : cdf.segments()) {
    *out << "segment " << FormatDouble(s.lo) << " " << FormatDouble(s.u1)
         << " " << FormatDouble(s.u2) << " " << FormatDouble(s.e1) << " "
         << FormatDouble(s.r1) << " " << FormatDouble(s.r2) << " "
         << FormatDouble(s.e2) << "\n";
  }
}

// Reads one cdf block starting at doc.rows[*row]; advances *row past it.
ParamCdf ReadCdf(const Lines& doc, std::size_t* row) {
  if (*row >= doc.rows.size() || doc.rows[*row][0] != "cdf") {
    Fail(ErrorCode::kParseError, "expected a cdf record");
  }
  const auto& head = doc.rows[*row];
  ++*row;
  if (head.size() >= 3 && head[1] == "tabulated") {
    int k = ParseInt(head[2]);
    std::vector<double> knots, values;
    for (int i = 0; i < k; ++i, ++*row) {
      if (*row >= doc.rows.size() || doc.rows[*row].size() != 3 ||
          doc.rows[*row][0] != "knot") {
        Fail(ErrorCode::kParseError, "expected a knot record");
      }
      knots.push_back(ParseDouble(doc.rows[*row][1]));
      values.push_back(ParseDouble(doc.rows[*row][2]));
    }
    return ParamCdf::Tabulated(std::move(knots), std::move(values));
  }
  if (head.size() != 5) {
    Fail(ErrorCode::kParseError, "malformed cdf record");
  }
  CdfFamily family = FamilyFromName(head[1]);
  double lo = ParseDouble(head[2]);
  double hi = ParseDouble(head[3]);
  int k = ParseInt(head[4]);
  std::vector<CdfSegment> segments;
  for (int i = 0; i < k; ++i, ++*row) {
    if (*row >= doc.rows.size() || doc.rows[*row].size() != 8 ||
        doc.rows[*row][0] != "segment") {
      Fail(ErrorCode::kParseError, "expected a segment record");
    }
    const auto& r = doc.rows[*row];
    CdfSegment s;
    s.lo = ParseDouble(r[1]);
    s.u1 = ParseDouble(r[2]);
    s.u2 = ParseDouble(r[3]);
    s.e1 = ParseDouble(r[4]);
    s.r1 = ParseDouble(r[5]);
    s.r2 = ParseDouble(r[6]);
    s.e2 = ParseDouble(r[7]);
    segments.push_back(s);
  }
  return ParamCdf::ClosedForm(family, lo, hi, std::move(segments));
}

std::string CsvEscape(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string JoinCounts(const std::vector<int>& counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(counts[i]);
  }
  return out;
}

std::vector<int> ParseIndexList(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.push_back(ParseInt(cur));
  }
  return out;
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string ConfigToText(const MarketConfig& config) {
  std::ostringstream out;
  out << "stahl-config 1\n";
  out << "store_counts";
  for (int n : config.store_counts) out << " " << n;
  out << "\n";
  out << "shopper_fraction " << FormatDouble(config.shopper_fraction) << "\n";
  out << "search_cost " << FormatDouble(config.search_cost) << "\n";
  out << "valuation_bound " << FormatDouble(config.valuation_bound) << "\n";
  return out.str();
}

MarketConfig ConfigFromText(const std::string& text) {
  Lines doc = Tokenize(text);
  ExpectMagic(doc, "stahl-config", 1);
  MarketConfig config;
  bool saw_counts = false, saw_mu = false, saw_cost = false, saw_bound = false;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    if (row[0] == "store_counts") {
      config.store_counts.clear();
      for (std::size_t i = 1; i < row.size(); ++i) {
        config.store_counts.push_back(ParseInt(row[i]));
      }
      saw_counts = true;
    } else if (row[0] == "shopper_fraction" && row.size() == 2) {
      config.shopper_fraction = ParseDouble(row[1]);
      saw_mu = true;
    } else if (row[0] == "search_cost" && row.size() == 2) {
      config.search_cost = ParseDouble(row[1]);
      saw_cost = true;
    } else if (row[0] == "valuation_bound" && row.size() == 2) {
      config.valuation_bound = ParseDouble(row[1]);
      saw_bound = true;
    } else {
      Fail(ErrorCode::kParseError, "unknown config record '" + row[0] + "'");
    }
  }
  if (!saw_counts || !saw_mu || !saw_cost || !saw_bound) {
    Fail(ErrorCode::kParseError,
         "config requires store_counts, shopper_fraction, search_cost and "
         "valuation_bound");
  }
  return Validate(std::move(config));
}

std::string ProfileToText(const StrategyProfile& profile) {
  std::ostringstream out;
  out << "stahl-profile 1\n";
  out << "reserve_price " << FormatDouble(profile.reserve_price) << "\n";
  out << "sellers " << profile.sellers() << "\n";
  for (int i = 0; i < profile.sellers(); ++i) {
    const auto& s = profile.strategies[static_cast<std::size_t>(i)];
    switch (s.kind()) {
      case StrategyKind::kPurePoint:
        out << "seller " << i << " pure " << FormatDouble(s.price()) << "\n";
        break;
      case StrategyKind::kMixedFull:
        out << "seller " << i << " mixed " << FormatDouble(s.mass_at_top())
            << "\n";
        AppendCdf(&out, s.cdf());
        break;
      case StrategyKind::kCutoff:
        out << "seller " << i << " cutoff\n";
        AppendCdf(&out, s.cdf());
        break;
    }
  }
  return out.str();
}

StrategyProfile ProfileFromText(const std::string& text) {
  Lines doc = Tokenize(text);
  ExpectMagic(doc, "stahl-profile", 1);
  StrategyProfile profile;
  int sellers = -1;
  std::size_t r = 1;
  while (r < doc.rows.size()) {
    const auto& row = doc.rows[r];
    if (row[0] == "reserve_price" && row.size() == 2) {
      profile.reserve_price = ParseDouble(row[1]);
      ++r;
    } else if (row[0] == "sellers" && row.size() == 2) {
      sellers = ParseInt(row[1]);
      ++r;
    } else if (row[0] == "seller" && row.size() >= 3) {
      int idx = ParseInt(row[1]);
      if (idx != static_cast<int>(profile.strategies.size())) {
        Fail(ErrorCode::kParseError,
             "seller records must appear in order; got index " +
                 std::to_string(idx));
      }
      if (row[2] == "pure" && row.size() == 4) {
        ++r;
        profile.strategies.push_back(
            PricingStrategy::Pure(ParseDouble(row[3])));
      } else if (row[2] == "mixed" && row.size() == 4) {
        double mass = ParseDouble(row[3]);
        ++r;
        ParamCdf cdf = ReadCdf(doc, &r);
        profile.strategies.push_back(
            PricingStrategy::MixedFull(std::move(cdf), mass));
      } else if (row[2] == "cutoff" && row.size() == 3) {
        ++r;
        ParamCdf cdf = ReadCdf(doc, &r);
        profile.strategies.push_back(
            PricingStrategy::Cutoff(std::move(cdf), profile.reserve_price));
      } else {
        Fail(ErrorCode::kParseError, "malformed seller record");
      }
    } else {
      Fail(ErrorCode::kParseError, "unknown profile record '" + row[0] + "'");
    }
  }
  if (sellers < 0 || sellers != profile.sellers()) {
    Fail(ErrorCode::kParseError,
         "profile seller count mismatch: declared " + std::to_string(sellers) +
             ", found " + std::to_string(profile.sellers()));
  }
  for (const auto& s : profile.strategies) s.Validate();
  return profile;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Fail(ErrorCode::kIoError, "cannot open '" + path + "' for reading");
  }
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) {
    Fail(ErrorCode::kIoError, "read failure on '" + path + "'");
  }
  return out.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    Fail(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    Fail(ErrorCode::kIoError, "write failure on '" + path + "'");
  }
}

std::string DescribeConfig(const MarketConfig& config) {
  MarketConfig cfg = Validate(config);
  DerivedConstants d = Derive(cfg);
  std::ostringstream out;
  out << "sellers " << cfg.sellers() << "\n";
  out << "total_stores " << d.total_stores << "\n";
  out << "shopper_fraction " << FormatDouble(cfg.shopper_fraction) << "\n";
  out << "search_cost " << FormatDouble(cfg.search_cost) << "\n";
  out << "valuation_bound " << FormatDouble(cfg.valuation_bound) << "\n";
  for (int i = 0; i < cfg.sellers(); ++i) {
    auto k = static_cast<std::size_t>(i);
    out << "seller " << i << " stores=" << cfg.store_counts[k]
        << " searcher_share=" << FormatDouble(d.searcher_share[k]) << "\n";
  }
  out << "smallest_sellers";
  for (int i : d.smallest) out << " " << i;
  out << "\n";
  return out.str();
}

std::string DescribeConstruction(const ConstructedEquilibrium& eq,
                                 const MarketConfig& config) {
  std::ostringstream out;
  out << "reserve_price " << FormatDouble(eq.profile.reserve_price) << "\n";
  out << "lowest_price " << FormatDouble(eq.lowest_price) << "\n";
  out << "kappa " << FormatDouble(eq.diagnostics.kappa) << "\n";
  out << "expectation_residual "
      << FormatDouble(eq.diagnostics.expectation_residual) << "\n";
  for (int i = 0; i < eq.profile.sellers(); ++i) {
    auto k = static_cast<std::size_t>(i);
    const auto& s = eq.profile.strategies[k];
    out << "seller " << i << " stores=" << config.store_counts[k] << " ";
    switch (s.kind()) {
      case StrategyKind::kPurePoint:
        out << "pure price=" << FormatDouble(s.price());
        break;
      case StrategyKind::kMixedFull:
        out << "mixed support=[" << FormatDouble(s.cdf().lo()) << ","
            << FormatDouble(s.cdf().hi()) << "]"
            << " atom=" << FormatDouble(s.mass_at_top());
        break;
      case StrategyKind::kCutoff:
        out << "cutoff support=[" << FormatDouble(s.cdf().lo()) << ","
            << FormatDouble(s.cdf().hi()) << "]"
            << " atom=" << FormatDouble(s.mass_at_top()) << "@"
            << FormatDouble(s.atom_price());
        break;
    }
    out << " profit=" << FormatDouble(eq.analytic_profit[k])
        << " expected_price=" << FormatDouble(s.expected_price()) << "\n";
  }
  return out.str();
}

std::string ReportToText(const VerificationReport& report) {
  std::ostringstream out;
  out << "verification " << (report.passed ? "PASS" : "FAIL") << "\n";
  out << "reserve_price " << FormatDouble(report.reserve_price) << "\n";
  out << "lowest_price " << FormatDouble(report.lowest_price) << "\n";
  for (const auto& c : report.checks) {
    out << "check " << c.name << " " << (c.passed ? "PASS" : "FAIL")
        << " worst=" << FormatDouble(c.worst);
    if (!c.evidence.empty()) out << " " << c.evidence;
    out << "\n";
  }
  for (const auto& d : report.best_deviations) {
    out << "best_response seller=" << d.seller
        << " price=" << FormatDouble(d.price)
        << " gain=" << FormatDouble(d.gain) << "\n";
  }
  out << "reserve_margin " << FormatDouble(report.reserve_margin) << "\n";
  return out.str();
}

std::string SimulationSummaryCsv(const SimulationResult& result) {
  std::ostringstream out;
  out << "# replications=" << result.replications << " seed=" << result.seed
      << "\n";
  out << "# mean_searches=" << FormatDouble(result.mean_searches)
      << " first_store_fraction="
      << FormatDouble(result.first_store_fraction)
      << " searcher_price_mean=" << FormatDouble(result.searcher_price_mean)
      << "\n";
  out << "seller,profit_mean,profit_se,quantity_mean\n";
  for (std::size_t i = 0; i < result.sellers.size(); ++i) {
    const auto& s = result.sellers[i];
    out << i << "," << FormatDouble(s.profit_mean) << ","
        << FormatDouble(s.profit_se) << "," << FormatDouble(s.quantity_mean)
        << "\n";
  }
  return out.str();
}

std::string SimulationHistogramCsv(const SimulationResult& result) {
  std::ostringstream out;
  out << "# replications=" << result.replications << " seed=" << result.seed
      << "\n";
  out << "bin_lo,bin_hi,mass\n";
  const auto bins = result.histogram.size();
  const double width =
      bins > 0 ? (result.hist_hi - result.hist_lo) / static_cast<double>(bins)
               : 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    double lo = result.hist_lo + width * static_cast<double>(b);
    double hi = (b + 1 == bins) ? result.hist_hi : lo + width;
    out << FormatDouble(lo) << "," << FormatDouble(hi) << ","
        << FormatDouble(result.histogram[b]) << "\n";
  }
  return out.str();
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "counts,shopper_fraction,search_cost,ok,error,reserve_price,"
         "lowest_price,searcher_price,shopper_price,total_profit,"
         "sim_searcher_price,sim_total_profit\n";
  for (const auto& r : rows) {
    out << JoinCounts(r.counts) << "," << FormatDouble(r.mu) << ","
        << FormatDouble(r.search_cost) << "," << (r.ok ? "1" : "0") << ","
        << CsvEscape(r.error) << ",";
    if (r.ok) {
      out << FormatDouble(r.reserve_price) << ","
          << FormatDouble(r.lowest_price) << ","
          << FormatDouble(r.searcher_price) << ","
          << FormatDouble(r.shopper_price) << ","
          << FormatDouble(r.total_profit) << ","
          << FormatDouble(r.sim_searcher_price) << ","
          << FormatDouble(r.sim_total_profit);
    } else {
      out << ",,,,,,";
    }
    out << "\n";
  }
  return out.str();
}

GroupSpec ParseGroups(const std::string& text) {
  GroupSpec groups;
  std::istringstream in(text);
  std::string section;
  while (std::getline(in, section, ';')) {
    if (section.empty()) continue;
    auto eq = section.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kParseError,
           "group section '" + section + "' lacks '='");
    }
    std::string name = section.substr(0, eq);
    std::string body = section.substr(eq + 1);
    if (body.empty())
      Fail(ErrorCode::kParseError, "group section '" + name + "' is empty");
    if (name == "mixers") {
      groups.full_mixers = ParseIndexList(body);
    } else if (name == "pure") {
      groups.pure_reserve = ParseIndexList(body);
    } else if (name == "cutoff") {
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) {
          Fail(ErrorCode::kParseError,
               "cutoff entry '" + item + "' must be seller:fraction");
        }
        CutoffSpec c;
        c.seller = ParseInt(item.substr(0, colon));
        c.fraction = ParseDouble(item.substr(colon + 1));
        groups.cutoffs.push_back(c);
      }
    } else {
      Fail(ErrorCode::kParseError, "unknown group section '" + name + "'");
    }
  }
  return groups;
}

}  // namespace stahl
