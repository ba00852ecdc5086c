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

#include <random>

#include <gtest/gtest.h>

#include "ctc/clock.hpp"

namespace {

using ctc::ClockSpec;
using ctc::Complex;
using ctc::kPi;

ClockSpec make_clock(std::size_t n, double spacing = 1.0,
                     std::optional<double> e1 = std::nullopt) {
  ClockSpec s;
  s.levels = n;
  s.spacing = spacing;
  s.base_energy = e1;
  return s;
}

TEST(OrthogonalisationTime, KnownValues) {
  EXPECT_NEAR(ctc::orthogonalisation_time(make_clock(2, kPi)), 1.0, 1e-15);
  EXPECT_NEAR(ctc::orthogonalisation_time(make_clock(4, 1.0)), kPi / 2, 1e-15);
  EXPECT_NEAR(ctc::orthogonalisation_time(make_clock(1, 0.7)), 2 * kPi / 0.7, 1e-14);
  ClockSpec h = make_clock(3, 2.0);
  h.hbar = 0.5;
  EXPECT_NEAR(ctc::orthogonalisation_time(h), 2 * kPi * 0.5 / 6.0, 1e-15);
}

TEST(ClockSpec, RejectsInvalid) {
  EXPECT_THROW(make_clock(0).validate(), ctc::ContractError);
  EXPECT_THROW(make_clock(2, 0.0).validate(), ctc::ContractError);
  ClockSpec s = make_clock(2);
  s.hbar = -1;
  EXPECT_THROW(s.validate(), ctc::ContractError);
}

TEST(ClockState, InitialAndHalfPeriod) {
  const auto phi0 = ctc::clock_state(make_clock(5), 0.0);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(std::abs(phi0(n) - 1.0 / std::sqrt(5.0)), 0, 1e-15);

  // E1 = 0, dE t = pi.
  const auto phi = ctc::clock_state(make_clock(2, 1.0, 0.0), kPi);
  EXPECT_NEAR(std::abs(phi(0) - 1.0 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(phi(1) + 1.0 / std::sqrt(2.0)), 0, 1e-15);
}

TEST(ClockState, UnitNorm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-50, 50);
  for (int i = 0; i < 50; ++i)
    EXPECT_NEAR(ctc::clock_state(make_clock(1 + i % 8), t(rng)).norm(), 1.0, 1e-12);
}

TEST(Overlap, SpecialDelays) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const ClockSpec s = make_clock(n, 1.3);
    const double tp = ctc::orthogonalisation_time(s);
    EXPECT_NEAR(std::abs(ctc::overlap(s, 0.0, 0.0) - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(ctc::overlap(s, 0.0, n * tp)), 1.0, 1e-12);
    if (n > 1) {
      EXPECT_LT(std::abs(ctc::overlap(s, 0.0, tp)), 1e-12);
    }
  }
}

TEST(Overlap, MatchesDirectInnerProductAndIsTimeIndependent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const ClockSpec s = make_clock(1 + trial % 8, 0.5 + std::abs(u(rng)) / 5, u(rng));
    const double dt = u(rng);
    const Complex ref = ctc::overlap(s, 0.0, dt);
    for (int k = 0; k < 10; ++k) {
      const double t = u(rng);
      const Complex direct =
          ctc::clock_state(s, t).dot(ctc::clock_state(s, t + dt));  // conj on lhs
      EXPECT_TRUE(ctc::approx_equal(direct, ref, 1e-12)) << direct << " vs " << ref;
    }
  }
}

TEST(Overlap, MagnitudePeriodicInDelay) {
  const ClockSpec s = make_clock(5, 0.9);
  const double period = 5 * ctc::orthogonalisation_time(s);
  for (double dt : {0.1, 0.77, 2.3, 5.0})
    EXPECT_NEAR(std::abs(ctc::overlap(s, 0, dt)), std::abs(ctc::overlap(s, 0, dt + period)),
                1e-12);
}

TEST(EvolutionOperator, ActionAndComposition) {
  const ClockSpec s = make_clock(4, 0.8, 0.3);
  const auto r = ctc::evolution_operator(s, 1.7);
  const ctc::Vector lhs = r * ctc::clock_state(s, 0.4);
  EXPECT_LT((lhs - ctc::clock_state(s, 2.1)).norm(), 1e-12);

  const ctc::Matrix ab = ctc::evolution_operator(s, 0.6) * ctc::evolution_operator(s, 1.1);
  EXPECT_LT((ab - r).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(ctc::evolution_operator(s, 0.0).isIdentity(1e-15));
}

TEST(EvolutionOperator, OrthogonalisationDelayTwoLevels) {
  const ClockSpec s = make_clock(2, 1.0, 0.0);
  const auto r = ctc::evolution_operator(s, ctc::orthogonalisation_time(s));
  EXPECT_NEAR(std::abs(r(0, 0) - 1.0), 0, 1e-12);
  EXPECT_NEAR(std::abs(r(1, 1) + 1.0), 0, 1e-12);
}

TEST(VacuumEvolution, VacuumAmplitudeAndTrace) {
  const ClockSpec s = make_clock(3, 1.1);
  for (double dt : {0.0, 0.3, 4.0}) {
    const auto rb = ctc::vacuum_evolution_operator(s, dt);
    EXPECT_EQ(rb.rows(), 4);
    EXPECT_EQ(rb(0, 0), Complex(1.0, 0.0));
    EXPECT_LT((rb.block(1, 1, 3, 3) - ctc::evolution_operator(s, dt)).norm(), 1e-15);
  }
  EXPECT_TRUE(ctc::vacuum_evolution_operator(s, 0.0).isIdentity(1e-15));

  // Default E1 = dE: sum of the N-th roots of unity.
  const double tp = ctc::orthogonalisation_time(s);
  Complex direct{};
  for (int n = 1; n <= 3; ++n) direct += std::exp(Complex(0, -2 * kPi * n / 3.0));
  EXPECT_LT(std::abs(direct), 1e-12);
  EXPECT_LT(std::abs(ctc::vacuum_evolution_operator(s, tp).trace() - 1.0), 1e-12);
  EXPECT_LT(std::abs(ctc::evolution_trace(s, tp)), 1e-12);
}

TEST(ClockAlgebra, EvolvedStatesMutuallyOrthogonal) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const ClockSpec s = make_clock(n, 0.37);
    const double tp = ctc::orthogonalisation_time(s);
    const auto phi = ctc::clock_state(s, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Complex ip = ctc::evolved_clock(s, phi, tp, a).dot(ctc::evolved_clock(s, phi, tp, b));
        if (a == b) {
          EXPECT_NEAR(std::abs(ip), 1.0, 1e-12);
        } else {
          EXPECT_LT(std::abs(ip), 1e-12) << "N=" << n << " a=" << a << " b=" << b;
        }
      }
  }
}

TEST(ClockAlgebra, EvolvedClockWrapsAfterNTicks) {
  // R(t_perp)^N is a pure phase times identity, so tick N aliases tick 0.
  const ClockSpec s = make_clock(3);
  const auto phi = ctc::clock_state(s, 0.0);
  const double tp = ctc::orthogonalisation_time(s);
  EXPECT_NEAR(std::abs(ctc::evolved_clock(s, phi, tp, 3).dot(phi)), 1.0, 1e-12);
}

}  // namespace
