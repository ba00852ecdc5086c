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

#include <optional>

#include "ctc/core.hpp"

namespace ctc {

/// Clock on an equally spaced energy ladder E_n = E1 + (n-1) dE, n = 1..N.
///
/// E1 defaults to dE, which makes tr R(t_perp) vanish exactly. Inside a
/// single-clock sector E1 only contributes a global phase; it does change the
/// relative phase between vacuum and clock components of a mode.
struct ClockSpec {
  std::size_t levels = 2;
  std::optional<double> base_energy;
  double spacing = 1.0;
  double hbar = 1.0;

  double e1() const { return base_energy.value_or(spacing); }

  double energy(std::size_t n) const {
    return e1() + static_cast<double>(n - 1) * spacing;
  }

  void validate() const {
    require(levels >= 1, "clock needs at least one level");
    require(spacing > 0.0, "clock level spacing must be positive");
    require(hbar > 0.0, "hbar must be positive");
  }
};

inline double orthogonalisation_time(const ClockSpec& spec) {
  spec.validate();
  return 2.0 * kPi * spec.hbar /
         (static_cast<double>(spec.levels) * spec.spacing);
}

/// Phase exp(-i E_n t / hbar) of energy level n (1-indexed).
inline Complex level_phase(const ClockSpec& spec, std::size_t n, double t) {
  return std::exp(-kI * spec.energy(n) * t / spec.hbar);
}

/// |phi(t)>, length N, components exp(-i E_n t/hbar)/sqrt(N).
inline Vector clock_state(const ClockSpec& spec, double t) {
  spec.validate();
  const double amp = 1.0 / std::sqrt(static_cast<double>(spec.levels));
  Vector out(spec.levels);
  for (std::size_t n = 1; n <= spec.levels; ++n)
    out(n - 1) = amp * level_phase(spec, n, t);
  return out;
}

/// <phi(t)|phi(t+dt)> via the geometric phase sum in units of t_perp.
///
/// Independent of t.
inline Complex overlap(const ClockSpec& spec, double /*t*/, double dt) {
  const double tp = orthogonalisation_time(spec);
  const double n_levels = static_cast<double>(spec.levels);
  Complex sum{0.0, 0.0};
  for (std::size_t n = 1; n <= spec.levels; ++n) {
    const double frac = static_cast<double>(n - 1) / n_levels;
    sum += std::exp(-2.0 * kPi * kI * frac * dt / tp);
  }
  return std::exp(-kI * spec.e1() * dt / spec.hbar) / n_levels * sum;
}

/// R(dt), diagonal in the energy basis.
inline Matrix evolution_operator(const ClockSpec& spec, double dt) {
  spec.validate();
  Matrix r = Matrix::Zero(spec.levels, spec.levels);
  for (std::size_t n = 1; n <= spec.levels; ++n)
    r(n - 1, n - 1) = level_phase(spec, n, dt);
  return r;
}

/// Diagonal of the vacuum-inclusive evolution |0><0| + R(dt), length N+1.
inline Vector vacuum_evolution_phases(const ClockSpec& spec, double dt) {
  spec.validate();
  Vector d(spec.levels + 1);
  d(0) = 1.0;
  for (std::size_t n = 1; n <= spec.levels; ++n) d(n) = level_phase(spec, n, dt);
  return d;
}

/// R-bar(dt) = |0><0| + R(dt) on the (N+1)-dimensional mode space.
inline Matrix vacuum_evolution_operator(const ClockSpec& spec, double dt) {
  return vacuum_evolution_phases(spec, dt).asDiagonal();
}

/// |phi^(k)> = R(dt)^k |phi>.
inline Vector evolved_clock(const ClockSpec& spec, const Vector& phi, double dt,
                            std::size_t k) {
  Vector out = phi;
  for (std::size_t n = 1; n <= spec.levels; ++n)
    out(n - 1) *= level_phase(spec, n, static_cast<double>(k) * dt);
  return out;
}

/// tr R(dt).
inline Complex evolution_trace(const ClockSpec& spec, double dt) {
  Complex sum{0.0, 0.0};
  for (std::size_t n = 1; n <= spec.levels; ++n) sum += level_phase(spec, n, dt);
  return sum;
}

}  // namespace ctc
