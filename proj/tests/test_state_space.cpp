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
#include <sstream>

#include <gtest/gtest.h>

#include "ctc/state_space.hpp"

namespace {

using ctc::Complex;
using ctc::DensityOperator;
using ctc::Matrix;
using ctc::ModeBasis;
using ctc::PureState;
using ctc::Vector;

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

DensityOperator random_density(std::mt19937_64& rng, ModeBasis b, std::size_t modes) {
  const auto d = static_cast<Eigen::Index>(ctc::checked_pow(b.per_mode_dim, modes));
  Matrix a(d, d);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return {b, modes, rho};
}

TEST(MixedRadix, FirstModeIsMostSignificant) {
  const ctc::MixedRadix rx(3, 3);
  EXPECT_EQ(rx.size(), 27u);
  EXPECT_EQ(rx.stride(0), 9u);
  EXPECT_EQ(rx.stride(2), 1u);
  // index 2*9 + 0*3 + 1 = 19
  EXPECT_EQ(rx.digit(19, 0), 2u);
  EXPECT_EQ(rx.digit(19, 1), 0u);
  EXPECT_EQ(rx.digit(19, 2), 1u);
  EXPECT_EQ(rx.with_digit(19, 1, 2), 25u);
}

TEST(LocalizedInput, SingleMode) {
  Vector phi(3);
  phi << 0.6, Complex(0, 0.8), 0.0;
  const PureState s = ctc::localized_input(phi, std::vector<double>{1.0});
  EXPECT_EQ(s.dim(), 4u);
  EXPECT_EQ(s.amplitudes()(0), Complex(0.0, 0.0));
  EXPECT_LT((s.amplitudes().tail(3) - phi).norm(), 1e-15);
}

TEST(LocalizedInput, TwoModeSuperpositionOfLocalisations) {
  Vector phi(2);
  phi << 1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0));
  const double c1 = 0.3, c2 = 0.7;
  const PureState s = ctc::localized_input(phi, std::vector<double>{c1, c2});

  // Oracle: sqrt(c1) phi (x) |0> + sqrt(c2) |0> (x) phi, by Kronecker product.
  Vector vac = Vector::Zero(3);
  vac(0) = 1;
  Vector ext(3);
  ext << 0, phi(0), phi(1);
  Vector ref(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      ref(3 * i + j) = std::sqrt(c1) * ext(i) * vac(j) + std::sqrt(c2) * vac(i) * ext(j);
  EXPECT_LT((s.amplitudes() - ref).norm(), 1e-15);
}

TEST(LocalizedInput, NormAndContract) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> c(1 + trial % 4);
    double sum = 0;
    for (double& x : c) sum += (x = u(rng));
    for (double& x : c) x /= sum;
    const PureState s = ctc::localized_input(random_vector(rng, 4), c);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  }
  Vector phi = Vector::Ones(2) / std::sqrt(2.0);
  EXPECT_THROW(ctc::localized_input(phi, std::vector<double>{0.5, 0.6}), ctc::ContractError);
  EXPECT_THROW(ctc::localized_input(phi, std::vector<double>{1.5, -0.5}), ctc::ContractError);
}

TEST(Tensor, VacuumAndDimensions) {
  const ModeBasis b{3};
  const PureState v = PureState::basis_vector(b, 1, 0);
  const PureState vv = ctc::tensor(v, v);
  EXPECT_EQ(vv.amplitudes()(0), Complex(1.0, 0.0));
  EXPECT_NEAR(vv.norm(), 1.0, 0);

  const PureState a(b, 2), c(b, 3);
  EXPECT_EQ(ctc::tensor(a, c).dim(), 243u);
  EXPECT_THROW(ctc::tensor(PureState(ModeBasis{2}, 1), v), ctc::ContractError);
}

TEST(PartialTrace, RoundTripProductStates) {
  std::mt19937_64 rng(5);
  const ModeBasis b{3};
  const DensityOperator ra = random_density(rng, b, 1);
  const DensityOperator rb = random_density(rng, b, 2);
  const DensityOperator joint = ctc::tensor(ra, rb);
  const std::vector<std::size_t> second{1, 2}, first{0};
  EXPECT_LT((ctc::partial_trace(joint, second).matrix() - ra.matrix()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LT((ctc::partial_trace(joint, first).matrix() - rb.matrix()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(PartialTrace, TraceAllAndPreservation) {
  std::mt19937_64 rng(9);
  const DensityOperator rho = random_density(rng, ModeBasis{3}, 3);
  const std::vector<std::size_t> all{0, 1, 2};
  const DensityOperator t = ctc::partial_trace(rho, all);
  EXPECT_EQ(t.dim(), 1u);
  EXPECT_LT(std::abs(t.matrix()(0, 0) - rho.trace()), 1e-12);

  const std::vector<std::size_t> middle{1};
  const DensityOperator r = ctc::partial_trace(rho, middle);
  EXPECT_LT(std::abs(r.trace() - 1.0), 1e-12);
  EXPECT_LT(r.hermiticity_defect(), 1e-12);
  EXPECT_GE(r.min_eigenvalue(), -1e-8);
}

TEST(PartialTrace, MaximallyEntangledGivesMaximallyMixed) {
  const ModeBasis b{3};
  PureState psi(b, 2);
  for (int i = 0; i < 3; ++i) psi.amplitudes()(4 * i) = 1 / std::sqrt(3.0);
  const DensityOperator rho = DensityOperator::from_pure(psi);
  const std::vector<std::size_t> second{1};
  const Matrix red = ctc::partial_trace(rho, second).matrix();
  EXPECT_LT((red - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, Linear) {
  std::mt19937_64 rng(13);
  const ModeBasis b{2};
  const auto r1 = random_density(rng, b, 3), r2 = random_density(rng, b, 3);
  const Complex a(0.3, 0.2), c(-1.1, 0.5);
  const DensityOperator mix(b, 3, a * r1.matrix() + c * r2.matrix());
  const std::vector<std::size_t> modes{0, 2};
  const Matrix lhs = ctc::partial_trace(mix, modes).matrix();
  const Matrix rhs = a * ctc::partial_trace(r1, modes).matrix() +
                     c * ctc::partial_trace(r2, modes).matrix();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, RejectsBadIndexSets) {
  const DensityOperator rho(ModeBasis{2}, 2);
  const std::vector<std::size_t> bad{2}, dup{0, 0};
  EXPECT_THROW(ctc::partial_trace(rho, bad), ctc::ContractError);
  EXPECT_THROW(ctc::partial_trace(rho, dup), ctc::ContractError);
}

TEST(WeightedPartialTrace, UniformAndVacuumOnly) {
  std::mt19937_64 rng(17);
  const ModeBasis b{3};
  const DensityOperator rho = random_density(rng, b, 4);
  const auto cv = ctc::trailing_modes(4, 2);
  const auto uniform = ctc::weighted_partial_trace(rho, cv, ctc::WeightProfile::uniform(3));
  EXPECT_LT((uniform.matrix() - ctc::partial_trace(rho, cv).matrix()).cwiseAbs().maxCoeff(),
            1e-15);

  // Vacuum-only: the (j = 00) diagonal block, i.e. rows/cols with CV digits 0.
  const auto vac = ctc::weighted_partial_trace(rho, cv, ctc::WeightProfile{{1.0, 0.0, 0.0}});
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      EXPECT_EQ(vac.matrix()(r, c), rho.matrix()(9 * r, 9 * c));
}

TEST(WeightedPartialTrace, ProductWeights) {
  // Direct oracle over explicit CV strings.
  std::mt19937_64 rng(19);
  const ModeBasis b{3};
  const DensityOperator rho = random_density(rng, b, 3);
  const ctc::WeightProfile w{{0.2, 0.5, 1.3}};
  const auto cv = ctc::trailing_modes(3, 2);
  const Matrix got = ctc::weighted_partial_trace(rho, cv, w).matrix();
  Matrix ref = Matrix::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 3; ++j2)
          ref(a, c) += w.weights[j1] * w.weights[j2] *
                       rho.matrix()(9 * a + 3 * j1 + j2, 9 * c + 3 * j1 + j2);
  EXPECT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(ctc::WeightProfile({{1.0, -0.1, 0.0}}).validate(3), ctc::ContractError);
}

TEST(TraceDistance, Basics) {
  std::mt19937_64 rng(23);
  const ModeBasis b{2};
  const auto rho = random_density(rng, b, 2), sigma = random_density(rng, b, 2);
  EXPECT_NEAR(ctc::trace_distance(rho, rho), 0.0, 1e-15);
  EXPECT_NEAR(ctc::trace_distance(rho, sigma), ctc::trace_distance(sigma, rho), 1e-14);

  const DensityOperator mid(b, 2, 0.5 * (rho.matrix() + sigma.matrix()));
  EXPECT_LE(ctc::trace_distance(rho, mid), ctc::trace_distance(rho, sigma) + 1e-14);

  const auto e0 = DensityOperator::from_pure(PureState::basis_vector(b, 2, 0));
  const auto e3 = DensityOperator::from_pure(PureState::basis_vector(b, 2, 3));
  EXPECT_NEAR(ctc::trace_distance(e0, e3), 1.0, 1e-15);
  EXPECT_THROW(ctc::trace_distance(e0, DensityOperator(b, 1)), ctc::ContractError);
}

TEST(DensityOperator, Validation) {
  std::mt19937_64 rng(29);
  const auto rho = random_density(rng, ModeBasis{2}, 2);
  EXPECT_NO_THROW(rho.validate());
  DensityOperator bad = rho;
  bad.matrix()(0, 1) += 0.1;
  EXPECT_THROW(bad.validate(), ctc::ContractError);
  DensityOperator neg(ModeBasis{2}, 1);
  neg.matrix()(0, 0) = 1.5;
  neg.matrix()(1, 1) = -0.5;
  EXPECT_THROW(neg.validate(), ctc::ContractError);
}

TEST(Snapshot, PureRoundTrip) {
  std::mt19937_64 rng(31);
  const PureState psi(ModeBasis{3}, 2, random_vector(rng, 9));
  std::stringstream ss;
  ctc::write_columns(ss, psi);
  const PureState back = ctc::read_pure_columns(ss);
  EXPECT_EQ(back.num_modes(), 2u);
  EXPECT_EQ((back.amplitudes() - psi.amplitudes()).norm(), 0.0);
}

TEST(Snapshot, DensityRoundTripAndSparseRows) {
  DensityOperator rho(ModeBasis{2}, 1);
  rho.matrix()(0, 0) = 0.25;
  rho.matrix()(1, 1) = 0.75;
  std::stringstream ss;
  ctc::write_columns(ss, rho);
  const std::string text = ss.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  const DensityOperator back = ctc::read_density_columns(ss);
  EXPECT_EQ(back.matrix(), rho.matrix());

  std::istringstream broken("# density modes=1 dim=2\n0 5 1.0 0.0\n");
  EXPECT_THROW(ctc::read_density_columns(broken), ctc::ContractError);
}

}  // namespace
