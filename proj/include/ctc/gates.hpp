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

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctc/clock.hpp"
#include "ctc/state_space.hpp"

namespace ctc {

// Gates are symbolic. A sequence is stored in application order, so the
// operator it represents is G_last ... G_2 G_1. For M = 2 the stored order is
//
//   vswap(0,2) vswap(0,3) vswap(1,2) vswap(1,3) evolve(2) evolve(3)
//
// and the unitary is (I I Rb Rb) S_13 S_12 S_03 S_02 (0-indexed modes).

enum class GateKind {
  swap,             // full exchange, vacuum included
  vacuum_swap,      // exchange only when both modes hold a clock
  power_swap,       // alpha(p) I + beta(p) vacuum_swap
  full_power_swap,  // alpha(p) I + beta(p) swap
  clock_evolution,  // |0><0| + R(dt) on a single mode
};

inline Complex swap_alpha(double p) { return 0.5 * (1.0 + std::exp(-kI * kPi * p)); }
inline Complex swap_beta(double p) { return 0.5 * (1.0 - std::exp(-kI * kPi * p)); }

struct GateSpec {
  GateKind kind = GateKind::vacuum_swap;
  std::size_t first = 0;   // 0-indexed
  std::size_t second = 0;  // equals `first` for single-mode gates
  double param = 0.0;      // p for power swaps, dt for clock evolution

  static GateSpec swap(std::size_t i, std::size_t j) {
    return {GateKind::swap, i, j, 0.0};
  }
  static GateSpec vacuum_swap(std::size_t i, std::size_t j) {
    return {GateKind::vacuum_swap, i, j, 0.0};
  }
  static GateSpec power_swap(double p, std::size_t i, std::size_t j) {
    return {GateKind::power_swap, i, j, p};
  }
  static GateSpec full_power_swap(double p, std::size_t i, std::size_t j) {
    return {GateKind::full_power_swap, i, j, p};
  }
  static GateSpec clock_evolution(std::size_t mode, double dt) {
    return {GateKind::clock_evolution, mode, mode, dt};
  }

  bool single_mode() const { return kind == GateKind::clock_evolution; }

  bool operator==(const GateSpec&) const = default;
};

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::swap: return "swap";
    case GateKind::vacuum_swap: return "vacuum_swap";
    case GateKind::power_swap: return "power_swap";
    case GateKind::full_power_swap: return "full_power_swap";
    case GateKind::clock_evolution: return "clock_evolution";
  }
  return "?";
}

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "swap") return GateKind::swap;
  if (s == "vacuum_swap") return GateKind::vacuum_swap;
  if (s == "power_swap") return GateKind::power_swap;
  if (s == "full_power_swap") return GateKind::full_power_swap;
  if (s == "clock_evolution") return GateKind::clock_evolution;
  throw ContractError("unknown gate kind '" + s + "'");
}

/// Where dispersion gates sit relative to the interaction blocks.
enum class DispersionPlacement { before_blocks, between_blocks, after_blocks };

/// Which exchange the dispersion gates use.
enum class DispersionGate { vacuum_power_swap, full_power_swap };

struct SwapVariant {
  std::optional<double> power;  // empty: exact vacuum swap

  static SwapVariant exact() { return {}; }
  static SwapVariant with_power(double p) { return {p}; }
};

struct CircuitSpec {
  std::size_t modes = 2;  // M, per bundle
  ClockSpec clock;
  double dt = 0.0;
  SwapVariant swap;

  // Neighbour-pair exchanges (m, m+1) inside each bundle, p per pair.
  std::vector<double> cr_dispersion;
  std::vector<double> cv_dispersion;
  DispersionPlacement placement = DispersionPlacement::before_blocks;
  DispersionGate dispersion_gate = DispersionGate::vacuum_power_swap;

  /// Circuit with dt equal to the orthogonalisation time.
  static CircuitSpec orthogonal(std::size_t modes, ClockSpec clock) {
    CircuitSpec c;
    c.modes = modes;
    c.clock = clock;
    c.dt = orthogonalisation_time(clock);
    return c;
  }

  std::size_t total_modes() const { return 2 * modes; }
  ModeBasis basis() const { return {clock.levels + 1}; }

  void validate() const {
    require(modes >= 1, "circuit needs M >= 1");
    clock.validate();
    require(clock.levels >= modes, "circuit needs N >= M clock levels");
    require(cr_dispersion.empty() || cr_dispersion.size() == modes - 1,
            "CR dispersion list must have M-1 entries");
    require(cv_dispersion.empty() || cv_dispersion.size() == modes - 1,
            "CV dispersion list must have M-1 entries");
  }
};

/// Gates in application order on a fixed mode space.
struct GateSequence {
  ModeBasis basis;
  std::size_t num_modes = 0;
  ClockSpec clock;
  std::vector<GateSpec> gates;

  MixedRadix radix() const { return {basis.per_mode_dim, num_modes}; }
  std::size_t dim() const { return checked_pow(basis.per_mode_dim, num_modes); }

  void validate() const {
    for (const GateSpec& g : gates) {
      require(g.first < num_modes && g.second < num_modes,
              "gate mode index out of range");
      if (g.single_mode()) {
        require(g.first == g.second, "single-mode gate needs i == j");
      } else {
        require(g.first < g.second, "two-mode gate needs i < j");
      }
    }
  }
};

namespace detail {

inline void append_dispersion(const CircuitSpec& ctx, std::vector<GateSpec>& out) {
  const auto make = [&](double p, std::size_t i) {
    return ctx.dispersion_gate == DispersionGate::full_power_swap
               ? GateSpec::full_power_swap(p, i, i + 1)
               : GateSpec::power_swap(p, i, i + 1);
  };
  for (std::size_t i = 0; i < ctx.cr_dispersion.size(); ++i)
    if (ctx.cr_dispersion[i] != 0.0) out.push_back(make(ctx.cr_dispersion[i], i));
  for (std::size_t i = 0; i < ctx.cv_dispersion.size(); ++i)
    if (ctx.cv_dispersion[i] != 0.0)
      out.push_back(make(ctx.cv_dispersion[i], ctx.modes + i));
}

}  // namespace detail

/// Block m: CR mode m exchanged with CV modes M..2M-1 in turn, then clock
/// evolution on every CV mode.
inline GateSequence circuit_gates(const CircuitSpec& ctx) {
  ctx.validate();
  GateSequence seq{ctx.basis(), ctx.total_modes(), ctx.clock, {}};
  const std::size_t M = ctx.modes;

  const bool has_dispersion = !ctx.cr_dispersion.empty() || !ctx.cv_dispersion.empty();
  if (has_dispersion && ctx.placement == DispersionPlacement::before_blocks)
    detail::append_dispersion(ctx, seq.gates);

  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t j = M; j < 2 * M; ++j) {
      if (ctx.swap.power) {
        seq.gates.push_back(GateSpec::power_swap(*ctx.swap.power, m, j));
      } else {
        seq.gates.push_back(GateSpec::vacuum_swap(m, j));
      }
    }
    if (has_dispersion && ctx.placement == DispersionPlacement::between_blocks &&
        m + 1 < M)
      detail::append_dispersion(ctx, seq.gates);
  }
  for (std::size_t j = M; j < 2 * M; ++j)
    seq.gates.push_back(GateSpec::clock_evolution(j, ctx.dt));

  if (has_dispersion && ctx.placement == DispersionPlacement::after_blocks)
    detail::append_dispersion(ctx, seq.gates);
  seq.validate();
  return seq;
}

/// One wormhole on its own: CR modes 0..M-1 exchanged with a single CV mode
/// (index M), then that mode's clock evolution. The full circuit is the
/// product of M such blocks, one per CV mode, because gates on disjoint
/// mode pairs commute.
inline GateSequence single_wormhole_gates(const CircuitSpec& ctx) {
  ctx.validate();
  GateSequence seq{ctx.basis(), ctx.modes + 1, ctx.clock, {}};
  for (std::size_t m = 0; m < ctx.modes; ++m) {
    if (ctx.swap.power) {
      seq.gates.push_back(GateSpec::power_swap(*ctx.swap.power, m, ctx.modes));
    } else {
      seq.gates.push_back(GateSpec::vacuum_swap(m, ctx.modes));
    }
  }
  seq.gates.push_back(GateSpec::clock_evolution(ctx.modes, ctx.dt));
  return seq;
}

namespace detail {

/// Compiled form of one gate: out[i] = diag[i] * in[i] + off[i] * in[partner[i]].
/// Every gate in the family is a diagonal plus an involutive permutation.
struct CompiledGate {
  std::vector<Complex> diag;
  std::vector<Complex> off;
  std::vector<Index> partner;
  bool diagonal_only = false;
};

inline CompiledGate compile(const GateSpec& g, const MixedRadix& rx,
                            const ClockSpec& clock) {
  CompiledGate c;
  const std::size_t D = rx.size();
  c.diag.assign(D, Complex{1.0, 0.0});

  if (g.kind == GateKind::clock_evolution) {
    c.diagonal_only = true;
    const Vector phases = vacuum_evolution_phases(clock, g.param);
    for (Index i = 0; i < D; ++i) c.diag[i] = phases(rx.digit(i, g.first));
    return c;
  }

  c.off.assign(D, Complex{});
  c.partner.resize(D);
  Complex a{0.0, 0.0}, b{1.0, 0.0};
  if (g.kind == GateKind::power_swap || g.kind == GateKind::full_power_swap) {
    a = swap_alpha(g.param);
    b = swap_beta(g.param);
  }
  const bool vacuum_excluded =
      g.kind == GateKind::vacuum_swap || g.kind == GateKind::power_swap;

  for (Index i = 0; i < D; ++i) {
    const std::size_t x = rx.digit(i, g.first);
    const std::size_t y = rx.digit(i, g.second);
    const bool moves = x != y && !(vacuum_excluded && (x == 0 || y == 0));
    if (!moves) {
      // Fixed by the exchange: alpha + beta = 1.
      c.partner[i] = i;
      c.diag[i] = 1.0;
      c.off[i] = 0.0;
      continue;
    }
    c.partner[i] = rx.with_digit(rx.with_digit(i, g.first, y), g.second, x);
    c.diag[i] = a;
    c.off[i] = b;
  }
  return c;
}

inline void apply_compiled(const CompiledGate& c, Vector& v) {
  if (c.diagonal_only) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= c.diag[static_cast<Index>(i)];
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto u = static_cast<Index>(i);
    const Index p = c.partner[u];
    if (p == u) {
      v(i) *= c.diag[u];
    } else if (p > u) {
      const auto q = static_cast<Eigen::Index>(p);
      const Complex vi = v(i), vq = v(q);
      v(i) = c.diag[u] * vi + c.off[u] * vq;
      v(q) = c.diag[p] * vq + c.off[p] * vi;
    }
  }
}

/// Left-multiplies every column of `m` by the gate.
inline void apply_compiled_rows(const CompiledGate& c, Matrix& m) {
  if (c.diagonal_only) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) *= c.diag[static_cast<Index>(i)];
    return;
  }
  Eigen::RowVectorXcd tmp;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto u = static_cast<Index>(i);
    const Index p = c.partner[u];
    if (p == u) {
      m.row(i) *= c.diag[u];
    } else if (p > u) {
      const auto q = static_cast<Eigen::Index>(p);
      tmp = m.row(i);
      m.row(i) = c.diag[u] * tmp + c.off[u] * m.row(q);
      m.row(q) = c.diag[p] * m.row(q) + c.off[p] * tmp;
    }
  }
}

}  // namespace detail

/// Gates compiled once against a mode space, reusable across many states.
class CompiledCircuit {
 public:
  explicit CompiledCircuit(const GateSequence& seq) : seq_(seq), rx_(seq.radix()) {
    seq_.validate();
    for (const GateSpec& g : seq_.gates) gates_.push_back(detail::compile(g, rx_, seq_.clock));
  }

  const GateSequence& sequence() const { return seq_; }
  std::size_t dim() const { return rx_.size(); }

  Vector apply(Vector v) const {
    require(static_cast<std::size_t>(v.size()) == dim(), "apply: dimension mismatch");
    for (const auto& g : gates_) detail::apply_compiled(g, v);
    return v;
  }

  /// U m, column by column.
  Matrix apply_left(Matrix m) const {
    require(static_cast<std::size_t>(m.rows()) == dim(), "apply: dimension mismatch");
    for (const auto& g : gates_) detail::apply_compiled_rows(g, m);
    return m;
  }

  /// U rho U^dagger.
  Matrix conjugate(const Matrix& rho) const {
    const Matrix left = apply_left(rho);
    return apply_left(left.adjoint()).adjoint();
  }

 private:
  GateSequence seq_;
  MixedRadix rx_;
  std::vector<detail::CompiledGate> gates_;
};

inline PureState apply_gates(const PureState& psi, const GateSequence& seq) {
  require(psi.basis() == seq.basis && psi.num_modes() == seq.num_modes,
          "apply_gates: state and circuit live on different spaces");
  return {psi.basis(), psi.num_modes(), CompiledCircuit(seq).apply(psi.amplitudes())};
}

inline DensityOperator apply_gates(const DensityOperator& rho, const GateSequence& seq) {
  require(rho.basis() == seq.basis && rho.num_modes() == seq.num_modes,
          "apply_gates: operator and circuit live on different spaces");
  return {rho.basis(), rho.num_modes(), CompiledCircuit(seq).conjugate(rho.matrix())};
}

/// Full unitary; refuses above kMaterializeCap.
inline Matrix materialize(const GateSequence& seq) {
  const std::size_t d = seq.dim();
  if (d > kMaterializeCap)
    throw SizeCapError("refusing to materialize a " + std::to_string(d) +
                       "-dimensional unitary (cap " +
                       std::to_string(kMaterializeCap) + ")");
  const auto n = static_cast<Eigen::Index>(d);
  return CompiledCircuit(seq).apply_left(Matrix::Identity(n, n));
}

inline Matrix circuit_unitary(const CircuitSpec& ctx) { return materialize(circuit_gates(ctx)); }

// Sparse amplitudes keyed by basis index. std::map keeps iteration order,
// and with it every summation order, deterministic.
using SparseState = std::map<Index, Complex>;

inline void apply_sparse(const GateSpec& g, const MixedRadix& rx,
                         const ClockSpec& clock, SparseState& state) {
  if (g.kind == GateKind::clock_evolution) {
    const Vector phases = vacuum_evolution_phases(clock, g.param);
    for (auto& [idx, amp] : state) amp *= phases(rx.digit(idx, g.first));
    return;
  }
  Complex a{0.0, 0.0}, b{1.0, 0.0};
  if (g.kind == GateKind::power_swap || g.kind == GateKind::full_power_swap) {
    a = swap_alpha(g.param);
    b = swap_beta(g.param);
  }
  const bool vacuum_excluded =
      g.kind == GateKind::vacuum_swap || g.kind == GateKind::power_swap;
  SparseState out;
  for (const auto& [idx, amp] : state) {
    const std::size_t x = rx.digit(idx, g.first);
    const std::size_t y = rx.digit(idx, g.second);
    if (x == y || (vacuum_excluded && (x == 0 || y == 0))) {
      out[idx] += amp;
      continue;
    }
    const Index moved = rx.with_digit(rx.with_digit(idx, g.first, y), g.second, x);
    if (a != Complex{}) out[idx] += a * amp;
    if (b != Complex{}) out[moved] += b * amp;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == Complex{}; });
  state = std::move(out);
}

inline SparseState apply_sparse(const GateSequence& seq, SparseState state) {
  const MixedRadix rx = seq.radix();
  for (const GateSpec& g : seq.gates) apply_sparse(g, rx, seq.clock, state);
  return state;
}

inline SparseState to_sparse(const Vector& v) {
  SparseState s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != Complex{}) s.emplace(static_cast<Index>(i), v(i));
  return s;
}

// Text format: one gate per line, "kind i j param", 1-indexed modes.
// Single-mode gates repeat the mode: "clock_evolution 3 3 1.0".

inline void write_gates(std::ostream& os, const GateSequence& seq) {
  char buf[128];
  for (const GateSpec& g : seq.gates) {
    std::snprintf(buf, sizeof buf, "%s %zu %zu %.17g\n", to_string(g.kind),
                  g.first + 1, g.second + 1, g.param);
    os << buf;
  }
}

inline std::vector<GateSpec> read_gates(std::istream& is) {
  std::vector<GateSpec> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    long long i = 0, j = 0;
    double param = 0.0;
    if (!(ls >> kind >> i >> j >> param) || i < 1 || j < 1)
      throw ContractError("gate line " + std::to_string(lineno) + ": expected 'kind i j param'");
    out.push_back({gate_kind_from_string(kind), static_cast<std::size_t>(i - 1),
                   static_cast<std::size_t>(j - 1), param});
  }
  return out;
}

}  // namespace ctc
