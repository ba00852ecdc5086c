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

#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ctc/clock.hpp"
#include "ctc/state_space.hpp"

namespace ctc {

/// Uniform localisation weights 1/M.
inline std::vector<double> uniform_weights(std::size_t modes) {
  return std::vector<double>(modes, 1.0 / static_cast<double>(modes));
}

/// The chronology-respecting input with its clock advanced by k ticks of dt.
/// k = 0 is the undisturbed input.
inline PureState ticked_input(const ClockSpec& clock, double dt,
                              std::span<const double> c, std::size_t k) {
  const Vector phi = evolved_clock(clock, clock_state(clock, 0.0), dt, k);
  return localized_input(phi, c);
}

/// Probabilities over the loop count k = 0..M, plus export metadata.
struct LoopDistribution {
  std::vector<double> probabilities;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return probabilities.size(); }
  double operator[](std::size_t k) const { return probabilities[k]; }

  double total() const {
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  }

  double expectation() const {
    double e = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k)
      e += static_cast<double>(k) * probabilities[k];
    return e;
  }

  double max_deviation(std::span<const double> other) const {
    require(other.size() == probabilities.size(), "distribution length mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < other.size(); ++k)
      d = std::max(d, std::abs(other[k] - probabilities[k]));
    return d;
  }
};

/// The loop count is only readable when ticks 0..M are pairwise orthogonal,
/// which needs at least M + 1 clock levels at dt = t_perp.
inline void require_readable(const ClockSpec& clock, std::size_t modes) {
  require(clock.levels > modes,
          "loop-count readout needs N > M: with N = M tick M aliases tick 0");
}

/// <Phi^(k)| rho |Phi^(k)> for k = 0..M.
inline LoopDistribution loop_count_readout(const DensityOperator& rho,
                                           const ClockSpec& clock, double dt,
                                           std::span<const double> c) {
  const std::size_t M = rho.num_modes();
  require_readable(clock, M);
  LoopDistribution out;
  for (std::size_t k = 0; k <= M; ++k) {
    const Vector v = ticked_input(clock, dt, c, k).amplitudes();
    out.probabilities.push_back((v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  return out;
}

/// Gram matrix of |Phi^(0)>..|Phi^(M)>; the identity when readable at t_perp.
inline Matrix ticked_gram(const ClockSpec& clock, double dt,
                          std::span<const double> c) {
  const std::size_t M = c.size();
  Matrix g(M + 1, M + 1);
  std::vector<Vector> v;
  for (std::size_t k = 0; k <= M; ++k)
    v.push_back(ticked_input(clock, dt, c, k).amplitudes());
  for (std::size_t a = 0; a <= M; ++a)
    for (std::size_t b = 0; b <= M; ++b) g(a, b) = v[a].dot(v[b]);
  return g;
}

}  // namespace ctc
