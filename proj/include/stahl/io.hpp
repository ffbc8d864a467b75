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

#ifndef STAHL_IO_HPP_
#define STAHL_IO_HPP_

#include <string>
#include <vector>

#include "stahl/construct.hpp"
#include "stahl/simulate.hpp"
#include "stahl/types.hpp"
#include "stahl/verify.hpp"

namespace stahl {

// Doubles are always written with %.17g so that text round trips are exact.
std::string FormatDouble(double x);

// --------------------------------------------------------------------------
// Versioned text formats. Every document opens with "<magic> <version>";
// readers reject unknown magics and versions with kParseError. Lines are
// "key value..." records; blank lines and lines starting with '#' are
// ignored.
//
//   stahl-config 1     market description
//   stahl-profile 1    strategy profile (reserve price + one strategy per
//                      seller, closed-form segments or tabulated knots)
// --------------------------------------------------------------------------

std::string ConfigToText(const MarketConfig& config);
MarketConfig ConfigFromText(const std::string& text);

std::string ProfileToText(const StrategyProfile& profile);
StrategyProfile ProfileFromText(const std::string& text);

// Whole-file helpers; failures surface as kIoError.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

// --------------------------------------------------------------------------
// Human-readable renderings (stable line and field order, one record per
// line, suitable for golden tests).
// --------------------------------------------------------------------------

std::string DescribeConfig(const MarketConfig& config);
std::string DescribeConstruction(const ConstructedEquilibrium& eq,
                                 const MarketConfig& config);
std::string ReportToText(const VerificationReport& report);

// --------------------------------------------------------------------------
// CSV emitters. '#'-prefixed comment lines carry run metadata; the body is
// plain CSV with a header row.
// --------------------------------------------------------------------------

std::string SimulationSummaryCsv(const SimulationResult& result);
std::string SimulationHistogramCsv(const SimulationResult& result);
std::string SweepCsv(const std::vector<SweepRow>& rows);

// Parses a seller-group arrangement of the form
//   "mixers=0,1;pure=2;cutoff=3:0.8,4:0.75"
// where sections are optional and sellers are zero-based indices. Cutoff
// entries give the cutoff price as a fraction of the reserve price.
GroupSpec ParseGroups(const std::string& text);

}  // namespace stahl

#endif  // STAHL_IO_HPP_
