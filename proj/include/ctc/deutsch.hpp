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

#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ctc/combinatorics.hpp"
#include "ctc/gates.hpp"
#include "ctc/loop_family.hpp"

namespace ctc {

/// Largest chronology-violating dimension the Deutsch channel accepts.
inline constexpr std::size_t kDeutschCvCap = 512;

/// Largest (joint dimension x CV dimension x rank(sigma)) held in memory.
inline constexpr std::size_t kDeutschWorkCap = std::size_t{1} << 24;

/// The pair of maps theta -> tr_CR[U (sigma x theta) U^dag] and
/// theta -> tr_CV[...] for a fixed chronology-respecting input sigma.
///
/// The leading `cr_modes` modes of the sequence are the CR bundle. sigma is
/// split into pure components psi_r, and U (psi_r x I) is propagated once, so
/// each map evaluation is a sum of small Kraus products; the joint density
/// is never formed.
class DeutschChannel {
 public:
  DeutschChannel(const GateSequence& seq, std::size_t cr_modes, const DensityOperator& sigma)
      : basis_(seq.basis), cr_modes_(cr_modes), cv_modes_(seq.num_modes - cr_modes) {
    require(cr_modes >= 1 && cr_modes < seq.num_modes,
            "Deutsch channel needs both CR and CV modes");
    require(sigma.basis() == seq.basis && sigma.num_modes() == cr_modes,
            "sigma does not live on the CR bundle");
    d_cr_ = checked_pow(basis_.per_mode_dim, cr_modes_);
    d_cv_ = checked_pow(basis_.per_mode_dim, cv_modes_);
    if (d_cv_ > kDeutschCvCap)
      throw SizeCapError("CV dimension " + std::to_string(d_cv_) +
                         " exceeds the Deutsch cap " + std::to_string(kDeutschCvCap));

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sigma.matrix() + sigma.matrix().adjoint()));
    std::vector<Vector> components;
    for (Eigen::Index r = 0; r < es.eigenvalues().size(); ++r) {
      const double lam = es.eigenvalues()(r);
      if (lam > 1e-13) components.push_back(std::sqrt(lam) * es.eigenvectors().col(r));
    }
    if (d_cr_ * d_cv_ * d_cv_ * components.size() > kDeutschWorkCap)
      throw SizeCapError("Deutsch channel workspace exceeds the cap");

    const CompiledCircuit circuit(seq);
    const auto dcv = static_cast<Eigen::Index>(d_cv_);
    for (const Vector& psi : components) {
      Matrix x = Matrix::Zero(static_cast<Eigen::Index>(d_cr_ * d_cv_), dcv);
      for (Eigen::Index i = 0; i < psi.size(); ++i)
        for (Eigen::Index a = 0; a < dcv; ++a) x(i * dcv + a, a) = psi(i);
      x = circuit.apply_left(std::move(x));
      std::vector<Matrix> ops;
      for (std::size_t i = 0; i < d_cr_; ++i) {
        ops.push_back(x.block(static_cast<Eigen::Index>(i) * dcv, 0, dcv, dcv));
      }
      kraus_.push_back(std::move(ops));
    }
    for (auto& ops : kraus_) {
      std::vector<bool> nz;
      for (const Matrix& k : ops) nz.push_back(k.cwiseAbs().maxCoeff() > 0.0);
      nonzero_.push_back(std::move(nz));
    }
  }

  std::size_t cr_dim() const { return d_cr_; }
  std::size_t cv_dim() const { return d_cv_; }
  std::size_t cr_modes() const { return cr_modes_; }
  std::size_t cv_modes() const { return cv_modes_; }
  const ModeBasis& basis() const { return basis_; }

  DensityOperator cv_map(const DensityOperator& theta) const {
    check_cv(theta);
    Matrix out = Matrix::Zero(theta.matrix().rows(), theta.matrix().cols());
    for (std::size_t r = 0; r < kraus_.size(); ++r)
      for (std::size_t i = 0; i < d_cr_; ++i) {
        if (!nonzero_[r][i]) continue;
        const Matrix& k = kraus_[r][i];
        out.noalias() += k * theta.matrix() * k.adjoint();
      }
    return {basis_, cv_modes_, std::move(out)};
  }

  DensityOperator cr_map(const DensityOperator& theta) const {
    check_cv(theta);
    const auto dcr = static_cast<Eigen::Index>(d_cr_);
    Matrix out = Matrix::Zero(dcr, dcr);
    for (std::size_t r = 0; r < kraus_.size(); ++r) {
      std::vector<Matrix> applied(d_cr_);
      for (std::size_t i = 0; i < d_cr_; ++i)
        if (nonzero_[r][i]) applied[i] = kraus_[r][i] * theta.matrix();
      for (std::size_t i = 0; i < d_cr_; ++i) {
        if (!nonzero_[r][i]) continue;
        for (std::size_t j = 0; j < d_cr_; ++j) {
          if (!nonzero_[r][j]) continue;
          // tr(K_i theta K_j^dag)
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              (kraus_[r][j].conjugate().cwiseProduct(applied[i])).sum();
        }
      }
    }
    return {basis_, cr_modes_, std::move(out)};
  }

 private:
  void check_cv(const DensityOperator& theta) const {
    require(theta.basis() == basis_ && theta.num_modes() == cv_modes_,
            "theta does not live on the CV bundle");
  }

  ModeBasis basis_;
  std::size_t cr_modes_;
  std::size_t cv_modes_;
  std::size_t d_cr_ = 0;
  std::size_t d_cv_ = 0;
  std::vector<std::vector<Matrix>> kraus_;
  std::vector<std::vector<bool>> nonzero_;
};

/// Channel for the M-mode circuit with the localised clock as CR input.
inline DeutschChannel deutsch_channel(const CircuitSpec& ctx, std::span<const double> c) {
  require(c.size() == ctx.modes, "need one localisation weight per mode");
  const DensityOperator sigma = DensityOperator::from_pure(ticked_input(ctx.clock, ctx.dt, c, 0));
  return {circuit_gates(ctx), ctx.modes, sigma};
}

/// Dense reference for small spaces: conjugates the full joint density.
/// Returns (CR output, CV output).
inline std::pair<DensityOperator, DensityOperator> joint_maps_dense(
    const GateSequence& seq, std::size_t cr_modes, const DensityOperator& sigma,
    const DensityOperator& theta) {
  const DensityOperator joint = apply_gates(tensor(sigma, theta), seq);
  const auto cr = leading_modes(cr_modes);
  const auto cv = trailing_modes(seq.num_modes, seq.num_modes - cr_modes);
  return {partial_trace(joint, cv), partial_trace(joint, cr)};
}

struct EcpSeed {
  double g = 0.5;
  std::vector<double> clock_weights;  // empty: uniform over the N levels

  void validate(std::size_t levels) const {
    require(g >= 0.0 && g <= 1.0, "seed g must lie in [0, 1]");
    if (clock_weights.empty()) return;
    require(clock_weights.size() == levels, "seed needs one weight per clock level");
    double s = 0.0;
    for (double w : clock_weights) {
      require(w >= 0.0, "seed clock weights must be nonnegative");
      s += w;
    }
    require(std::abs(s - 1.0) <= 1e-12, "seed clock weights must sum to 1");
  }
};

/// [g |0><0| + (1 - g) sum_n w_n |n><n|] on each of `modes` modes.
inline DensityOperator seed_state(const EcpSeed& seed, const ModeBasis& basis,
                                  std::size_t modes) {
  const std::size_t levels = basis.clock_levels();
  seed.validate(levels);
  DensityOperator single(basis, 1);
  single.matrix()(0, 0) = seed.g;
  for (std::size_t n = 1; n <= levels; ++n) {
    const double w = seed.clock_weights.empty() ? 1.0 / static_cast<double>(levels)
                                                : seed.clock_weights[n - 1];
    single.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) =
        (1.0 - seed.g) * w;
  }
  DensityOperator out = single;
  for (std::size_t m = 1; m < modes; ++m) out = tensor(out, single);
  return out;
}

/// Pure product seed (sqrt(g)|0> + sqrt(1-g)|phi>)^(x)M. Unlike seed_state it
/// carries clock-vacuum coherence in every mode.
inline DensityOperator coherent_seed_state(double g, const ClockSpec& clock,
                                           std::size_t modes) {
  require(g >= 0.0 && g <= 1.0, "seed g must lie in [0, 1]");
  const ModeBasis basis{clock.levels + 1};
  Vector chi = Vector::Zero(static_cast<Eigen::Index>(basis.per_mode_dim));
  chi(0) = std::sqrt(g);
  chi.tail(static_cast<Eigen::Index>(clock.levels)) = std::sqrt(1.0 - g) * clock_state(clock, 0.0);
  const DensityOperator one(basis, 1, chi * chi.adjoint());
  DensityOperator out = one;
  for (std::size_t m = 1; m < modes; ++m) out = tensor(out, one);
  return out;
}

inline constexpr double kEcpTolerance = 1e-12;
inline constexpr std::size_t kEcpMaxIterations = 10000;

struct EcpResult {
  DensityOperator theta;
  std::size_t iterations = 0;
  double residual = 0.0;   // trace distance between theta and its image
  double last_step = 0.0;  // trace distance between the last two iterates
  bool converged = false;
  std::vector<double> steps;
};

/// Iterates theta <- cv_map(theta) until successive iterates are closer than
/// `tol` in trace distance. A run that hits `max_iter` comes back with
/// converged == false and its last iterate.
inline EcpResult ecp_iterate(const DeutschChannel& channel, DensityOperator theta,
                             double tol = kEcpTolerance,
                             std::size_t max_iter = kEcpMaxIterations) {
  require(tol > 0.0, "ECP tolerance must be positive");
  require(max_iter >= 1, "ECP needs at least one iteration");
  EcpResult res{theta, 0, 0.0, 0.0, false, {}};
  for (std::size_t it = 1; it <= max_iter; ++it) {
    DensityOperator next = channel.cv_map(res.theta);
    const double step = trace_distance(next, res.theta);
    res.steps.push_back(step);
    res.theta = std::move(next);
    res.iterations = it;
    res.last_step = step;
    if (step < tol) {
      res.converged = true;
      break;
    }
  }
  res.residual = trace_distance(res.theta, channel.cv_map(res.theta));
  return res;
}

inline EcpResult ecp_fixed_point(const DeutschChannel& channel, const EcpSeed& seed,
                                 double tol = kEcpTolerance,
                                 std::size_t max_iter = kEcpMaxIterations) {
  return ecp_iterate(channel, seed_state(seed, channel.basis(), channel.cv_modes()), tol,
                     max_iter);
}

namespace detail {

template <class Key>
double max_mismatched_entry(const DensityOperator& theta, Key key) {
  const MixedRadix rx = theta.radix();
  std::vector<Index> k(rx.size());
  for (Index i = 0; i < rx.size(); ++i) k[i] = key(rx, i);
  double out = 0.0;
  for (Index r = 0; r < rx.size(); ++r)
    for (Index c = 0; c < rx.size(); ++c)
      if (k[r] != k[c])
        out = std::max(out, std::abs(theta.matrix()(static_cast<Eigen::Index>(r),
                                                    static_cast<Eigen::Index>(c))));
  return out;
}

}  // namespace detail

/// Largest entry of theta coupling two different vacuum occupation patterns,
/// i.e. any term with a clock-vacuum outer product in some mode.
inline double vacuum_coherence(const DensityOperator& theta) {
  return detail::max_mismatched_entry(theta, [](const MixedRadix& rx, Index i) {
    Index p = 0;
    for (std::size_t m = 0; m < rx.modes(); ++m) p = (p << 1) | (rx.digit(i, m) != 0 ? 1U : 0U);
    return p;
  });
}

/// Largest entry coupling sectors with different numbers of clocks. These
/// are the clock-vacuum terms that cannot be balanced by another mode.
inline double clock_number_coherence(const DensityOperator& theta) {
  return detail::max_mismatched_entry(theta, [](const MixedRadix& rx, Index i) {
    Index n = 0;
    for (std::size_t m = 0; m < rx.modes(); ++m) n += rx.digit(i, m) != 0 ? 1U : 0U;
    return n;
  });
}

// Fixed-point family. alpha in {0,1}^M is a bit string with alpha_1 as its
// most significant bit; |alpha| is its popcount.

struct FixedPointCoefficients {
  std::size_t modes = 1;
  std::vector<double> weights;  // length 2^M, indexed by alpha

  static FixedPointCoefficients concentrated(std::size_t modes, Index alpha) {
    FixedPointCoefficients c{modes, std::vector<double>(Index{1} << modes, 0.0)};
    require(alpha < c.weights.size(), "alpha out of range");
    c.weights[alpha] = 1.0;
    return c;
  }

  double operator[](Index alpha) const { return weights[alpha]; }

  void validate() const {
    require(modes >= 1 && modes <= 30, "coefficient arrays support 1 <= M <= 30");
    require(weights.size() == (Index{1} << modes), "need 2^M coefficients");
    double s = 0.0;
    for (double w : weights) {
      require(w >= 0.0, "coefficients must be nonnegative");
      s += w;
    }
    require(std::abs(s - 1.0) <= 1e-12, "coefficients must sum to 1");
  }
};

inline bool alpha_bit(Index alpha, std::size_t modes, std::size_t m) {
  return ((alpha >> (modes - 1 - m)) & 1U) != 0;
}

/// g_alpha = g^(M - |alpha|) (1 - g)^|alpha|.
inline FixedPointCoefficients ecp_coefficients(double g, std::size_t modes) {
  require(g >= 0.0 && g <= 1.0, "g must lie in [0, 1]");
  require(modes >= 1 && modes <= 30, "coefficient arrays support 1 <= M <= 30");
  FixedPointCoefficients c{modes, std::vector<double>(Index{1} << modes)};
  for (Index a = 0; a < c.weights.size(); ++a) {
    const auto k = static_cast<double>(popcount(a));
    c.weights[a] = std::pow(g, static_cast<double>(modes) - k) * std::pow(1.0 - g, k);
  }
  return c;
}

/// One term of the family: mode m holds |0> when alpha_m = 0, otherwise the
/// clock advanced by alpha_1 + ... + alpha_m ticks.
inline DensityOperator analytic_cv_term(Index alpha, std::size_t modes, const ClockSpec& clock,
                                        double dt) {
  const ModeBasis basis{clock.levels + 1};
  const Vector phi = clock_state(clock, 0.0);
  Vector state = Vector::Ones(1);
  std::size_t ticks = 0;
  for (std::size_t m = 0; m < modes; ++m) {
    Vector mode = Vector::Zero(static_cast<Eigen::Index>(basis.per_mode_dim));
    if (alpha_bit(alpha, modes, m)) {
      ++ticks;
      mode.tail(static_cast<Eigen::Index>(clock.levels)) = evolved_clock(clock, phi, dt, ticks);
    } else {
      mode(0) = 1.0;
    }
    Vector next(state.size() * mode.size());
    for (Eigen::Index i = 0; i < state.size(); ++i)
      next.segment(i * mode.size(), mode.size()) = state(i) * mode;
    state = std::move(next);
  }
  return DensityOperator::from_pure(PureState(basis, modes, state));
}

inline DensityOperator analytic_cv_state(const FixedPointCoefficients& coeffs,
                                         const ClockSpec& clock, double dt) {
  coeffs.validate();
  DensityOperator out(ModeBasis{clock.levels + 1}, coeffs.modes);
  for (Index a = 0; a < coeffs.weights.size(); ++a)
    if (coeffs[a] != 0.0)
      out.matrix() += coeffs[a] * analytic_cv_term(a, coeffs.modes, clock, dt).matrix();
  return out;
}

/// sum_alpha g_alpha |Phi^(|alpha|)><Phi^(|alpha|)|.
inline DensityOperator analytic_cr_state(const FixedPointCoefficients& coeffs,
                                         const ClockSpec& clock, double dt,
                                         std::span<const double> c) {
  coeffs.validate();
  require(c.size() == coeffs.modes, "need one localisation weight per mode");
  std::vector<double> by_k(coeffs.modes + 1, 0.0);
  for (Index a = 0; a < coeffs.weights.size(); ++a) by_k[popcount(a)] += coeffs[a];
  DensityOperator out(ModeBasis{clock.levels + 1}, coeffs.modes);
  for (std::size_t k = 0; k <= coeffs.modes; ++k) {
    if (by_k[k] == 0.0) continue;
    const Vector v = ticked_input(clock, dt, c, k).amplitudes();
    out.matrix() += by_k[k] * v * v.adjoint();
  }
  return out;
}

/// Pr(k) = sum over |alpha| = k of g_alpha.
inline LoopDistribution dctc_probabilities(const FixedPointCoefficients& coeffs) {
  coeffs.validate();
  LoopDistribution out;
  out.probabilities.assign(coeffs.modes + 1, 0.0);
  for (Index a = 0; a < coeffs.weights.size(); ++a) out.probabilities[popcount(a)] += coeffs[a];
  out.metadata["model"] = "dctc";
  out.metadata["M"] = std::to_string(coeffs.modes);
  return out;
}

struct FamilyDecomposition {
  FixedPointCoefficients coeffs;
  double residual = 0.0;  // max-entry distance between theta and the fit
  double min_weight = 0.0;
};

/// Least-squares expansion of theta over the 2^M family terms. The raw
/// weights are kept as fitted (not clipped); `min_weight` exposes negatives.
inline FamilyDecomposition decompose_fixed_point(const DensityOperator& theta,
                                                 const ClockSpec& clock, double dt) {
  const std::size_t M = theta.num_modes();
  require(M <= 8, "family decomposition supports M <= 8");
  const Index terms = Index{1} << M;
  const auto d2 = static_cast<Eigen::Index>(theta.dim() * theta.dim());
  Matrix a(d2, static_cast<Eigen::Index>(terms));
  for (Index t = 0; t < terms; ++t)
    a.col(static_cast<Eigen::Index>(t)) =
        analytic_cv_term(t, M, clock, dt).matrix().reshaped();
  const Vector b = theta.matrix().reshaped();
  const Vector x = a.colPivHouseholderQr().solve(b);

  FamilyDecomposition out;
  out.coeffs.modes = M;
  out.min_weight = 1.0;
  for (Index t = 0; t < terms; ++t) {
    const double w = x(static_cast<Eigen::Index>(t)).real();
    out.coeffs.weights.push_back(w);
    out.min_weight = std::min(out.min_weight, w);
  }
  out.residual = (a * x - b).cwiseAbs().maxCoeff();
  return out;
}

/// C(M,k) g^(M-k) (1-g)^k.
inline double dctc_probability(double g, std::size_t modes, std::size_t k) {
  require(g >= 0.0 && g <= 1.0, "g must lie in [0, 1]");
  require(k <= modes, "loop count k must lie in 0..M");
  return binomial(modes, k) * std::pow(g, static_cast<double>(modes - k)) *
         std::pow(1.0 - g, static_cast<double>(k));
}

inline LoopDistribution dctc_probabilities_ecp(double g, std::size_t modes) {
  LoopDistribution out;
  for (std::size_t k = 0; k <= modes; ++k) out.probabilities.push_back(dctc_probability(g, modes, k));
  out.metadata["model"] = "dctc";
  out.metadata["M"] = std::to_string(modes);
  return out;
}

/// The rescaled form with g = q^(1/M).
inline LoopDistribution dctc_probabilities_rescaled(double q, std::size_t modes) {
  require(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
  return dctc_probabilities_ecp(std::pow(q, 1.0 / static_cast<double>(modes)), modes);
}

struct DeutschRun {
  EcpResult ecp;
  DensityOperator cr_state;
  LoopDistribution distribution;
};

/// ECP on the M-mode circuit followed by the CR readout.
inline DeutschRun run_dctc_ecp(const CircuitSpec& ctx, const EcpSeed& seed,
                               std::span<const double> c, double tol = kEcpTolerance,
                               std::size_t max_iter = kEcpMaxIterations) {
  require_readable(ctx.clock, ctx.modes);
  const DeutschChannel ch = deutsch_channel(ctx, c);
  EcpResult ecp = ecp_fixed_point(ch, seed, tol, max_iter);
  DensityOperator cr = ch.cr_map(ecp.theta);
  LoopDistribution dist = loop_count_readout(cr, ctx.clock, ctx.dt, c);
  dist.metadata["model"] = "dctc";
  return {std::move(ecp), std::move(cr), std::move(dist)};
}

// Wormholes treated separately: each CV mode is its own loop.

struct SeparateOutputs {
  std::vector<DensityOperator> cv_states;  // single-mode T_m
  DensityOperator cr_state;                // D_M from the recursion
  DensityOperator cr_unraveled;            // D_M from the closed expansion
};

inline SeparateOutputs separate_ctc_outputs(std::span<const double> g_list,
                                            const ClockSpec& clock, double dt,
                                            std::span<const double> c) {
  const std::size_t M = g_list.size();
  require(M >= 1 && c.size() == M, "need one g and one localisation weight per mode");
  for (double g : g_list) require(g >= 0.0 && g <= 1.0, "g_m must lie in [0, 1]");
  const ModeBasis basis{clock.levels + 1};

  const Vector rb1 = vacuum_evolution_phases(clock, dt);
  const auto evolve1 = [&](const Matrix& m) -> Matrix {
    return rb1.asDiagonal() * m * rb1.conjugate().asDiagonal();
  };
  // R-bar on every CR mode; diagonal.
  const MixedRadix rx(basis.per_mode_dim, M);
  Vector rbm(static_cast<Eigen::Index>(rx.size()));
  for (Index i = 0; i < rx.size(); ++i) {
    Complex p{1.0, 0.0};
    for (std::size_t m = 0; m < M; ++m) p *= rb1(rx.digit(i, m));
    rbm(static_cast<Eigen::Index>(i)) = p;
  }
  const auto evolve_m = [&](const Matrix& m) -> Matrix {
    return rbm.asDiagonal() * m * rbm.conjugate().asDiagonal();
  };

  Vector phi1 = Vector::Zero(static_cast<Eigen::Index>(basis.per_mode_dim));
  phi1.tail(static_cast<Eigen::Index>(clock.levels)) = clock_state(clock, 0.0);
  Matrix vac = Matrix::Zero(phi1.size(), phi1.size());
  vac(0, 0) = 1.0;

  SeparateOutputs out{{}, DensityOperator(basis, M), DensityOperator(basis, M)};

  Matrix d = phi1 * phi1.adjoint();  // d_0 = |phi><phi|
  const Vector big = ticked_input(clock, dt, c, 0).amplitudes();
  Matrix D = big * big.adjoint();
  for (std::size_t m = 0; m < M; ++m) {
    const double g = g_list[m];
    out.cv_states.emplace_back(basis, 1, g * vac + (1.0 - g) * evolve1(d));
    d = g * d + (1.0 - g) * evolve1(d);
    D = g * D + (1.0 - g) * evolve_m(D);
  }
  out.cr_state.matrix() = D;

  // Closed form: coefficient of k evolutions is the sum over k-subsets S of
  // prod_{m in S} (1 - g_m) prod_{m not in S} g_m.
  std::vector<double> e(M + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t k = m + 2; k-- > 0;)
      e[k] = e[k] * g_list[m] + (k > 0 ? e[k - 1] * (1.0 - g_list[m]) : 0.0);
  Matrix term = big * big.adjoint();
  for (std::size_t k = 0; k <= M; ++k) {
    out.cr_unraveled.matrix() += e[k] * term;
    term = evolve_m(term);
  }
  return out;
}

struct SeparateNumeric {
  std::vector<EcpResult> wormholes;
  DensityOperator cr_state;
};

/// Sequential Deutsch solution: the circuit factorizes into one block per CV
/// mode, and each block gets its own ECP with seed weight g_m.
inline SeparateNumeric separate_ctc_numeric(const CircuitSpec& ctx,
                                            std::span<const double> g_list,
                                            std::span<const double> c,
                                            double tol = kEcpTolerance) {
  require(g_list.size() == ctx.modes && c.size() == ctx.modes,
          "need one g and one localisation weight per mode");
  const GateSequence block = single_wormhole_gates(ctx);
  DensityOperator cr = DensityOperator::from_pure(ticked_input(ctx.clock, ctx.dt, c, 0));
  SeparateNumeric out{{}, cr};
  for (double g : g_list) {
    const DeutschChannel ch(block, ctx.modes, out.cr_state);
    EcpResult r = ecp_fixed_point(ch, EcpSeed{g, {}}, tol);
    out.cr_state = ch.cr_map(r.theta);
    out.wormholes.push_back(std::move(r));
  }
  return out;
}

}  // namespace ctc
