// Copyright 2026 The ctcsim Authors
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

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "ctc/core.hpp"

namespace ctc {

/// Largest n for which binomial coefficients are computed exactly.
inline constexpr std::uint64_t kExactBinomialLimit = 60;

/// Exact C(n, k) for n <= 60; every intermediate fits in 64 bits.
inline std::uint64_t exact_binomial(std::uint64_t n, std::uint64_t k) {
  require(n <= kExactBinomialLimit, "exact binomial only defined for n <= 60");
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i stays integral; divide by the gcd first.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(out, i);
    out = (out / g) * (num / (i / g));
  }
  return out;
}

/// ln C(n, k) through lgamma.
inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// C(n, k) as a double: exact below the crossover, log-gamma above.
inline double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (n <= kExactBinomialLimit) return static_cast<double>(exact_binomial(n, k));
  return std::exp(log_binomial(static_cast<double>(n), static_cast<double>(k)));
}

inline std::size_t popcount(Index x) { return static_cast<std::size_t>(std::popcount(x)); }

}  // namespace ctc
