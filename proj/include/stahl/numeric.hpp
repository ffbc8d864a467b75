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

#ifndef STAHL_NUMERIC_HPP_
#define STAHL_NUMERIC_HPP_

#include <cstdint>
#include <functional>

namespace stahl {

// Root of f on the bracket [lo, hi]; f(lo) and f(hi) must have opposite
// signs (a zero endpoint is returned directly). Brent's method.
double BrentRoot(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

// Location of the maximum of f on [lo, hi] by golden-section search.
// f is assumed unimodal on the bracket; for the verifier it is only used to
// polish tiny grid cells, where that holds to working precision.
double GoldenMax(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [lo, hi] to the given
// absolute tolerance.
double Integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol);

// Invert a nondecreasing function g on [lo, hi]: returns p with g(p) = target
// to tolerance x_tol on the argument.
double InvertMonotone(const std::function<double(double)>& g, double target,
                      double lo, double hi, double x_tol);

// SplitMix64 finalizer; the building block of the counter-based generator
// used by the simulator.
std::uint64_t SplitMix64(std::uint64_t x);

// Stateless counter-based RNG: every variate is a pure function of
// (seed, stream, counter). Streams are replication indices, counters are
// draw indices within a replication, so serial and parallel execution see
// identical variates.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(SplitMix64(SplitMix64(seed) ^ stream)) {}

  std::uint64_t Bits(std::uint64_t counter) const {
    return SplitMix64(base_ ^ counter);
  }

  // Uniform double in [0, 1).
  double Uniform(std::uint64_t counter) const {
    return static_cast<double>(Bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
};

}  // namespace stahl

#endif  // STAHL_NUMERIC_HPP_
