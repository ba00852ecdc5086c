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

// Neighbour-mode power swaps inside each bundle, and a check of whether the
// loop outputs notice them.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ctc/deutsch.hpp"
#include "ctc/pctc.hpp"

namespace ctc {

inline CircuitSpec dispersive_circuit(CircuitSpec ctx, std::vector<double> p_cr,
                                      std::vector<double> p_cv,
                                      DispersionPlacement placement =
                                          DispersionPlacement::before_blocks) {
  require(p_cr.size() + 1 == ctx.modes && p_cv.size() + 1 == ctx.modes,
          "dispersion needs M-1 exponents per bundle");
  ctx.cr_dispersion = std::move(p_cr);
  ctx.cv_dispersion = std::move(p_cv);
  ctx.placement = placement;
  ctx.validate();
  return ctx;
}

/// Same exponent on every neighbour pair of both bundles.
inline CircuitSpec dispersive_circuit(const CircuitSpec& ctx, double p,
                                      DispersionPlacement placement =
                                          DispersionPlacement::before_blocks) {
  const std::vector<double> ps(ctx.modes - 1, p);
  return dispersive_circuit(ctx, ps, ps, placement);
}

enum class Prescription { dctc_ecp, pctc };

inline const char* to_string(Prescription p) {
  return p == Prescription::dctc_ecp ? "dctc_ecp" : "pctc";
}

inline const char* to_string(DispersionPlacement p) {
  switch (p) {
    case DispersionPlacement::before_blocks: return "before_blocks";
    case DispersionPlacement::between_blocks: return "between_blocks";
    case DispersionPlacement::after_blocks: return "after_blocks";
  }
  return "unknown";
}

inline DispersionPlacement placement_from_string(const std::string& s) {
  if (s == "before_blocks") return DispersionPlacement::before_blocks;
  if (s == "between_blocks") return DispersionPlacement::between_blocks;
  if (s == "after_blocks") return DispersionPlacement::after_blocks;
  throw ContractError("unknown placement '" + s + "'");
}

inline constexpr double kDispersionThreshold = 1e-10;

struct DispersionCase {
  std::size_t modes = 2;
  std::size_t levels = 0;  // 0: M + 1, so the loop count is readable
  double p = 0.37;
  Prescription prescription = Prescription::pctc;
  double g = 0.4;  // ECP seed
  DispersionPlacement placement = DispersionPlacement::before_blocks;
  bool in_cr = true;
  bool in_cv = true;
};

struct DispersionRow {
  DispersionCase config;
  double deviation = 0.0;  // trace distance (D-CTC) or overlap deficit (P-CTC)
  double distribution_deviation = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
};

/// 1 - |<a|b>| for unit vectors, as |a - e^{i theta} b|^2 / 2 with the phase
/// aligned. Exact zero for identical inputs, and no cancellation near zero.
inline double overlap_deficit(const Vector& a, const Vector& b) {
  const Complex ov = b.dot(a);
  const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex{1.0, 0.0};
  return 0.5 * (a - phase * b).squaredNorm();
}

namespace detail {

struct PrescriptionOutput {
  DensityOperator cr;
  Vector pure;  // P-CTC only
  std::vector<double> distribution;  // empty when unreadable
};

inline PrescriptionOutput run_prescription(const CircuitSpec& ctx, const DispersionCase& dc) {
  const auto c = uniform_weights(ctx.modes);
  const bool readable = ctx.clock.levels > ctx.modes;
  if (dc.prescription == Prescription::pctc) {
    const PureState in = localized_input(clock_state(ctx.clock, 0.0), c);
    const PctcOutput out = pctc_output(ctx, in);
    std::vector<double> dist;
    if (readable)
      dist = normalized_squares(
          std::span<const Complex>(family_weights(out.raw, ctx.clock, ctx.dt, c)));
    return {DensityOperator::from_pure(out.state), out.state.amplitudes(), std::move(dist)};
  }
  const DeutschChannel ch = deutsch_channel(ctx, c);
  const EcpResult ecp = ecp_fixed_point(ch, EcpSeed{dc.g, {}});
  DensityOperator cr = ch.cr_map(ecp.theta);
  std::vector<double> dist;
  if (readable) dist = loop_count_readout(cr, ctx.clock, ctx.dt, c).probabilities;
  return {std::move(cr), Vector{}, std::move(dist)};
}

}  // namespace detail

inline DispersionRow dispersion_invariance_check(const DispersionCase& dc) {
  require(dc.modes >= 2 && dc.modes <= 3, "dispersion check supports M = 2, 3");
  ClockSpec clock;
  clock.levels = dc.levels == 0 ? dc.modes + 1 : dc.levels;
  const CircuitSpec base = CircuitSpec::orthogonal(dc.modes, clock);
  const std::vector<double> ps(dc.modes - 1, dc.p);
  const std::vector<double> none(dc.modes - 1, 0.0);
  const CircuitSpec disp = dispersive_circuit(base, dc.in_cr ? ps : none,
                                              dc.in_cv ? ps : none, dc.placement);

  const auto a = detail::run_prescription(base, dc);
  const auto b = detail::run_prescription(disp, dc);
  DispersionRow row{dc};
  row.deviation = dc.prescription == Prescription::pctc ? overlap_deficit(a.pure, b.pure)
                                                       : trace_distance(a.cr, b.cr);
  if (!a.distribution.empty()) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.distribution.size(); ++k)
      d = std::max(d, std::abs(a.distribution[k] - b.distribution[k]));
    row.distribution_deviation = d;
  }
  row.passed = row.deviation < kDispersionThreshold;
  return row;
}

}  // namespace ctc
