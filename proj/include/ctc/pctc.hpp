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

// Postselected-teleportation loops.
//
// The CR output is W|psi> / |W|psi>| with W = tr_CV U. W is applied as
//
//   W|psi> = sum_j w(j) (<j|_CV (x) I) U (|psi> (x) |j>_CV)
//
// one CV basis string j at a time, each through the sparse gate route, so
// neither U nor W is ever formed. w(j) is a product of per-index weights:
// all ones for the standard loop, (h, (1-h)/N, ...) for a non-maximally
// entangled teleportation pair.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctc/combinatorics.hpp"
#include "ctc/gates.hpp"
#include "ctc/loop_family.hpp"
#include "ctc/state_space.hpp"

namespace ctc {

struct PctcVariant {
  enum class Kind { standard, incomplete, probabilistic };

  Kind kind = Kind::standard;
  double h = 0.0;  // incomplete only
  double p = 1.0;  // probabilistic only

  static PctcVariant standard() { return {}; }
  static PctcVariant incomplete(double h) { return {Kind::incomplete, h, 1.0}; }
  static PctcVariant probabilistic(double p) { return {Kind::probabilistic, 0.0, p}; }

  void validate() const {
    if (kind == Kind::incomplete) require(h >= 0.0 && h <= 1.0, "h must lie in [0, 1]");
  }

  std::string name() const {
    switch (kind) {
      case Kind::standard: return "standard";
      case Kind::incomplete: return "incomplete";
      case Kind::probabilistic: return "probabilistic";
    }
    return "unknown";
  }
};

/// Largest number of CV basis strings the postselected sum will visit.
inline constexpr std::size_t kPostselectionStringCap = std::size_t{1} << 16;

/// Per-CV-string weight of the postselection: the product of per-mode weights.
inline double string_weight(const MixedRadix& cv_rx, Index j,
                            const std::vector<double>& per_index) {
  double w = 1.0;
  for (std::size_t m = 0; m < cv_rx.modes() && w != 0.0; ++m)
    w *= per_index[cv_rx.digit(j, m)];
  return w;
}

/// W|psi> for a sequence whose first cr_modes modes are CR and the rest CV.
/// Summation runs over j in ascending order, so results are bit-reproducible.
inline Vector reduced_operator_apply(const GateSequence& seq, std::size_t cr_modes,
                                     const Vector& psi, const WeightProfile& profile) {
  require(cr_modes <= seq.num_modes, "more CR modes than circuit modes");
  profile.validate(seq.basis.per_mode_dim);
  const MixedRadix cr_rx{seq.basis.per_mode_dim, cr_modes};
  const MixedRadix cv_rx{seq.basis.per_mode_dim, seq.num_modes - cr_modes};
  const MixedRadix rx = seq.radix();
  require(static_cast<std::size_t>(psi.size()) == cr_rx.size(),
          "input dimension does not match the CR bundle");
  const Index d_cv = cv_rx.size();
  if (d_cv > kPostselectionStringCap)
    throw SizeCapError("postselection over " + std::to_string(d_cv) +
                       " CV strings exceeds the cap of " +
                       std::to_string(kPostselectionStringCap));

  SparseState input;
  for (Index a = 0; a < cr_rx.size(); ++a)
    if (psi(static_cast<Eigen::Index>(a)) != Complex{})
      input.emplace(a * d_cv, psi(static_cast<Eigen::Index>(a)));

  Vector out = Vector::Zero(psi.size());
  for (Index j = 0; j < d_cv; ++j) {
    const double w = string_weight(cv_rx, j, profile.weights);
    if (w == 0.0) continue;
    SparseState state;
    for (const auto& [idx, amp] : input) state.emplace(idx + j, amp);
    for (const GateSpec& g : seq.gates) apply_sparse(g, rx, seq.clock, state);
    for (const auto& [idx, amp] : state)
      if (idx % d_cv == j) out(static_cast<Eigen::Index>(idx / d_cv)) += w * amp;
  }
  return out;
}

inline Vector reduced_operator_apply(const GateSequence& seq, std::size_t cr_modes,
                                     const Vector& psi) {
  return reduced_operator_apply(seq, cr_modes, psi,
                                WeightProfile::uniform(seq.basis.per_mode_dim));
}

/// W as a matrix on the CR bundle, column by column.
inline Matrix reduced_operator(const GateSequence& seq, std::size_t cr_modes,
                               const WeightProfile& profile) {
  const std::size_t d_cr = checked_pow(seq.basis.per_mode_dim, cr_modes);
  if (d_cr > kMaterializeCap)
    throw SizeCapError("reduced operator of CR dimension " + std::to_string(d_cr) +
                       " exceeds the cap of " + std::to_string(kMaterializeCap));
  Matrix w(d_cr, d_cr);
  for (std::size_t b = 0; b < d_cr; ++b) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(d_cr));
    e(static_cast<Eigen::Index>(b)) = 1.0;
    w.col(static_cast<Eigen::Index>(b)) = reduced_operator_apply(seq, cr_modes, e, profile);
  }
  return w;
}

inline Matrix reduced_operator(const CircuitSpec& ctx) {
  return reduced_operator(circuit_gates(ctx), ctx.modes,
                          WeightProfile::uniform(ctx.basis().per_mode_dim));
}

/// The circuit a variant runs on: power swaps for the probabilistic variant.
inline CircuitSpec variant_circuit(CircuitSpec ctx, const PctcVariant& variant) {
  variant.validate();
  if (variant.kind == PctcVariant::Kind::probabilistic)
    ctx.swap = SwapVariant::with_power(variant.p);
  return ctx;
}

inline WeightProfile variant_profile(const CircuitSpec& ctx, const PctcVariant& variant) {
  if (variant.kind == PctcVariant::Kind::incomplete)
    return WeightProfile::incomplete_teleportation(ctx.clock.levels, variant.h);
  return WeightProfile::uniform(ctx.basis().per_mode_dim);
}

struct PctcOutput {
  PureState raw;    // W|psi>, unnormalized
  PureState state;  // normalized
};

inline PctcOutput checked_output(PureState raw, const PureState& input) {
  if (raw.norm() <= 1e-12 * input.norm())
    throw PostselectionError("postselection annihilates input: W|psi> = 0");
  PureState state = raw.normalized();
  return {std::move(raw), std::move(state)};
}

inline PctcOutput pctc_output(const CircuitSpec& ctx, const PureState& psi,
                              const PctcVariant& variant = PctcVariant::standard()) {
  const CircuitSpec run = variant_circuit(ctx, variant);
  require(psi.num_modes() == run.modes && psi.basis().per_mode_dim == run.basis().per_mode_dim,
          "input does not live on the CR bundle");
  PureState raw(psi.basis(), psi.num_modes(),
                reduced_operator_apply(circuit_gates(run), run.modes, psi.amplitudes(),
                                       variant_profile(run, variant)));
  return checked_output(std::move(raw), psi);
}

/// Same output, built by applying the single-wormhole operator M times.
/// Valid because U factorizes into one block per CV mode.
inline PctcOutput telescoped_output(const CircuitSpec& ctx, const PureState& psi,
                                    const PctcVariant& variant = PctcVariant::standard()) {
  require(ctx.cr_dispersion.empty() && ctx.cv_dispersion.empty(),
          "telescoping needs a circuit without dispersion gates");
  const CircuitSpec run = variant_circuit(ctx, variant);
  const GateSequence single = single_wormhole_gates(run);
  const WeightProfile profile = variant_profile(run, variant);
  Vector v = psi.amplitudes();
  for (std::size_t m = 0; m < run.modes; ++m)
    v = reduced_operator_apply(single, run.modes, v, profile);
  return checked_output(PureState(psi.basis(), psi.num_modes(), std::move(v)), psi);
}

// Closed forms --------------------------------------------------------------

inline std::vector<double> standard_weights(std::size_t M) {
  std::vector<double> w;
  for (std::size_t k = 0; k <= M; ++k) w.push_back(binomial(M, k));
  return w;
}

inline std::vector<double> incomplete_weights(std::size_t M, std::size_t N, double h) {
  require(h >= 0.0 && h <= 1.0, "h must lie in [0, 1]");
  require(N >= 1, "need N >= 1");
  const double clock_w = (1.0 - h) / static_cast<double>(N);
  std::vector<double> w;
  for (std::size_t k = 0; k <= M; ++k)
    w.push_back(binomial(M, k) * std::pow(h, static_cast<double>(M - k)) *
                std::pow(clock_w, static_cast<double>(k)));
  return w;
}

/// C(M,k) (alpha (1 + tr R(dt)) + beta)^(M-k) beta^k.
inline std::vector<Complex> conjectured_weights(std::size_t M, double p,
                                                const ClockSpec& clock, double dt) {
  const Complex a = swap_alpha(p);
  const Complex b = swap_beta(p);
  const Complex stay = a * (1.0 + evolution_trace(clock, dt)) + b;
  std::vector<Complex> w;
  for (std::size_t k = 0; k <= M; ++k)
    w.push_back(binomial(M, k) * std::pow(stay, static_cast<int>(M - k)) *
                std::pow(b, static_cast<int>(k)));
  return w;
}

/// sum_k w_k |Phi^(k)(dt)>.
template <class Weight>
PureState family_state(std::span<const Weight> weights, const ClockSpec& clock, double dt,
                       std::span<const double> c) {
  require(weights.size() == c.size() + 1, "need M+1 weights");
  PureState out = ticked_input(clock, dt, c, 0);
  out.amplitudes() *= Complex(weights[0]);
  for (std::size_t k = 1; k < weights.size(); ++k)
    out.amplitudes() += Complex(weights[k]) * ticked_input(clock, dt, c, k).amplitudes();
  return out;
}

inline PureState probabilistic_output(const CircuitSpec& ctx, double p,
                                      std::span<const double> c) {
  const auto w = conjectured_weights(ctx.modes, p, ctx.clock, ctx.dt);
  return family_state<Complex>(w, ctx.clock, ctx.dt, c);
}

/// Components of raw on {Phi^(k)}: solves the Gram system, exact when raw lies
/// in their span.
inline std::vector<Complex> family_weights(const PureState& raw, const ClockSpec& clock,
                                           double dt, std::span<const double> c) {
  require_readable(clock, c.size());
  const std::size_t M = c.size();
  Vector rhs(static_cast<Eigen::Index>(M + 1));
  for (std::size_t k = 0; k <= M; ++k)
    rhs(static_cast<Eigen::Index>(k)) =
        ticked_input(clock, dt, c, k).amplitudes().dot(raw.amplitudes());
  const Vector w = ticked_gram(clock, dt, c).colPivHouseholderQr().solve(rhs);
  return {w.data(), w.data() + w.size()};
}

/// |raw - sum_k w_k Phi^(k)|; meaningful at N = M where the family is degenerate.
template <class Weight>
double family_residual(const PureState& raw, std::span<const Weight> weights,
                       const ClockSpec& clock, double dt, std::span<const double> c) {
  return (raw.amplitudes() - family_state(weights, clock, dt, c).amplitudes()).norm();
}

inline std::vector<double> normalized_squares(std::span<const Complex> w) {
  double total = 0.0;
  for (Complex x : w) total += std::norm(x);
  require(total > 0.0, "all weights vanish");
  std::vector<double> out;
  for (Complex x : w) out.push_back(std::norm(x) / total);
  return out;
}

inline std::vector<double> normalized_squares(std::span<const double> w) {
  std::vector<Complex> z(w.begin(), w.end());
  return normalized_squares(std::span<const Complex>(z));
}

/// C(M,k)^2 / C(2M,M).
inline double pctc_probability(std::size_t M, std::size_t k) {
  require(k <= M, "k must lie in 0..M");
  if (2 * M <= kExactBinomialLimit)
    return static_cast<double>(exact_binomial(M, k)) *
           static_cast<double>(exact_binomial(M, k)) /
           static_cast<double>(exact_binomial(2 * M, M));
  return std::exp(2.0 * log_binomial(static_cast<double>(M), static_cast<double>(k)) -
                  log_binomial(2.0 * static_cast<double>(M), static_cast<double>(M)));
}

inline std::vector<double> pctc_probabilities(std::size_t M) {
  std::vector<double> out;
  for (std::size_t k = 0; k <= M; ++k) out.push_back(pctc_probability(M, k));
  return out;
}

/// E[k] as an exact fraction (sum_k k C(M,k)^2, C(2M,M)).
inline std::pair<std::uint64_t, std::uint64_t> pctc_expectation_fraction(std::size_t M) {
  require(2 * M <= kExactBinomialLimit, "exact expectation only for M <= 30");
  std::uint64_t num = 0;
  for (std::size_t k = 0; k <= M; ++k) {
    const std::uint64_t c = exact_binomial(M, k);
    num += k * c * c;
  }
  return {num, exact_binomial(2 * M, M)};
}

inline std::vector<double> incomplete_probabilities(std::size_t M, std::size_t N, double h) {
  return normalized_squares(std::span<const double>(incomplete_weights(M, N, h)));
}

inline double incomplete_probability(std::size_t M, std::size_t N, double h, std::size_t k) {
  require(k <= M, "k must lie in 0..M");
  return incomplete_probabilities(M, N, h)[k];
}

inline std::vector<double> probabilistic_probabilities(std::size_t M, double p,
                                                       const ClockSpec& clock, double dt) {
  return normalized_squares(std::span<const Complex>(conjectured_weights(M, p, clock, dt)));
}

struct ConjectureReport {
  std::size_t modes = 0;
  double p = 0.0;
  double dt = 0.0;
  double max_deviation = 0.0;  // largest |exact - conjectured| over amplitudes
};

/// Exact W|Phi_M> on the power-swap circuit against the conjectured closed form.
/// Both sides are unnormalized, so this also checks the overall scale.
inline ConjectureReport verify_conjecture(const CircuitSpec& ctx, double p,
                                          std::span<const double> c) {
  const CircuitSpec run = variant_circuit(ctx, PctcVariant::probabilistic(p));
  const PureState input = localized_input(clock_state(run.clock, 0.0), c);
  const Vector exact = reduced_operator_apply(circuit_gates(run), run.modes,
                                              input.amplitudes());
  const Vector guess = probabilistic_output(run, p, c).amplitudes();
  return {run.modes, p, run.dt, (exact - guess).cwiseAbs().maxCoeff()};
}

inline ConjectureReport verify_conjecture(std::size_t M, double p) {
  ClockSpec clock;
  clock.levels = M;
  const CircuitSpec ctx = CircuitSpec::orthogonal(M, clock);
  const auto c = uniform_weights(M);
  return verify_conjecture(ctx, p, c);
}

struct PctcRun {
  PctcOutput output;
  std::vector<Complex> weights;
  LoopDistribution distribution;
};

/// Full run on the localized input with readout; needs N > M.
inline PctcRun run_pctc(const CircuitSpec& ctx, const PctcVariant& variant,
                        std::span<const double> c) {
  const PureState input = localized_input(clock_state(ctx.clock, 0.0), c);
  PctcRun r{pctc_output(ctx, input, variant), {}, {}};
  r.weights = family_weights(r.output.raw, ctx.clock, ctx.dt, c);
  r.distribution.probabilities = normalized_squares(std::span<const Complex>(r.weights));
  r.distribution.metadata["model"] = "pctc";
  r.distribution.metadata["variant"] = variant.name();
  if (variant.kind == PctcVariant::Kind::incomplete)
    r.distribution.metadata["h"] = std::to_string(variant.h);
  if (variant.kind == PctcVariant::Kind::probabilistic)
    r.distribution.metadata["p"] = std::to_string(variant.p);
  return r;
}

}  // namespace ctc
