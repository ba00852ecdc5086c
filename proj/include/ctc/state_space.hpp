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

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ctc/core.hpp"

namespace ctc {

/// Per-mode basis: index 0 is the vacuum, 1..N the clock levels.
struct ModeBasis {
  std::size_t per_mode_dim = 2;

  std::size_t clock_levels() const { return per_mode_dim - 1; }
  bool operator==(const ModeBasis&) const = default;

  void validate() const {
    require(per_mode_dim >= 2, "mode basis needs vacuum plus >= 1 level");
  }
};

/// Pure state over `num_modes` vacuum-inclusive modes.
class PureState {
 public:
  PureState(ModeBasis basis, std::size_t num_modes)
      : basis_(basis), num_modes_(num_modes),
        amps_(Vector::Zero(static_cast<Eigen::Index>(
            checked_pow(basis.per_mode_dim, num_modes)))) {
    basis_.validate();
  }

  PureState(ModeBasis basis, std::size_t num_modes, Vector amps)
      : basis_(basis), num_modes_(num_modes), amps_(std::move(amps)) {
    basis_.validate();
    require(static_cast<std::size_t>(amps_.size()) ==
                checked_pow(basis.per_mode_dim, num_modes),
            "amplitude vector length does not match (N+1)^modes");
  }

  /// Basis vector with every mode in the given digit string.
  static PureState basis_vector(ModeBasis basis, std::size_t num_modes,
                                Index idx) {
    PureState s(basis, num_modes);
    require(idx < s.dim(), "basis index out of range");
    s.amps_(static_cast<Eigen::Index>(idx)) = 1.0;
    return s;
  }

  const ModeBasis& basis() const { return basis_; }
  std::size_t num_modes() const { return num_modes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  MixedRadix radix() const { return {basis_.per_mode_dim, num_modes_}; }

  const Vector& amplitudes() const { return amps_; }
  Vector& amplitudes() { return amps_; }

  double norm() const { return amps_.norm(); }

  PureState normalized() const {
    const double n = norm();
    require(n > 0.0, "cannot normalize the zero vector");
    return {basis_, num_modes_, amps_ / n};
  }

 private:
  ModeBasis basis_;
  std::size_t num_modes_;
  Vector amps_;
};

/// Density operator over `num_modes` vacuum-inclusive modes.
class DensityOperator {
 public:
  DensityOperator(ModeBasis basis, std::size_t num_modes)
      : basis_(basis), num_modes_(num_modes) {
    basis_.validate();
    const auto d =
        static_cast<Eigen::Index>(checked_pow(basis.per_mode_dim, num_modes));
    mat_ = Matrix::Zero(d, d);
  }

  DensityOperator(ModeBasis basis, std::size_t num_modes, Matrix mat)
      : basis_(basis), num_modes_(num_modes), mat_(std::move(mat)) {
    basis_.validate();
    const auto d = checked_pow(basis.per_mode_dim, num_modes);
    require(static_cast<std::size_t>(mat_.rows()) == d &&
                static_cast<std::size_t>(mat_.cols()) == d,
            "density matrix side does not match (N+1)^modes");
  }

  static DensityOperator from_pure(const PureState& psi) {
    return {psi.basis(), psi.num_modes(),
            psi.amplitudes() * psi.amplitudes().adjoint()};
  }

  const ModeBasis& basis() const { return basis_; }
  std::size_t num_modes() const { return num_modes_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  MixedRadix radix() const { return {basis_.per_mode_dim, num_modes_}; }

  const Matrix& matrix() const { return mat_; }
  Matrix& matrix() { return mat_; }

  Complex trace() const { return mat_.trace(); }

  double hermiticity_defect() const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    const Matrix h = 0.5 * (mat_ + mat_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Hermitian within 1e-10, unit trace within 1e-10, eigenvalues >= -1e-8.
  void validate() const {
    require(hermiticity_defect() <= 1e-10, "density operator is not Hermitian");
    require(std::abs(trace() - Complex{1.0, 0.0}) <= 1e-10,
            "density operator trace is not 1");
    require(min_eigenvalue() >= -1e-8, "density operator is not PSD");
  }

 private:
  ModeBasis basis_;
  std::size_t num_modes_;
  Matrix mat_;
};

/// Nonnegative per-index weights: w[0] for the vacuum, w[n] for level n.
struct WeightProfile {
  std::vector<double> weights;

  static WeightProfile uniform(std::size_t per_mode_dim, double w = 1.0) {
    return {std::vector<double>(per_mode_dim, w)};
  }

  /// Weights of the non-maximally entangled teleportation pair:
  /// vacuum h, each clock level (1-h)/N.
  static WeightProfile incomplete_teleportation(std::size_t levels, double h) {
    require(h >= 0.0 && h <= 1.0, "h must lie in [0, 1]");
    WeightProfile p{std::vector<double>(levels + 1,
                                        (1.0 - h) / static_cast<double>(levels))};
    p.weights[0] = h;
    return p;
  }

  void validate(std::size_t per_mode_dim) const {
    require(weights.size() == per_mode_dim,
            "weight profile length must equal the per-mode dimension");
    for (double w : weights) require(w >= 0.0, "weights must be nonnegative");
  }
};

/// sum_m sqrt(c_m) |0>^(m-1) (x) |phi> (x) |0>^(M-m).
inline PureState localized_input(const Vector& clock, std::span<const double> c) {
  require(!c.empty(), "need at least one mode");
  double total = 0.0;
  for (double w : c) {
    require(w >= 0.0, "localization weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, "localization weights must sum to 1");

  const ModeBasis basis{static_cast<std::size_t>(clock.size()) + 1};
  PureState out(basis, c.size());
  const MixedRadix rx = out.radix();
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double amp = std::sqrt(c[m]);
    for (std::size_t n = 1; n < basis.per_mode_dim; ++n)
      out.amplitudes()(static_cast<Eigen::Index>(rx.stride(m) * n)) +=
          amp * clock(static_cast<Eigen::Index>(n - 1));
  }
  return out;
}

namespace detail {

template <class Mat>
Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// Kronecker product; the modes of `a` come first (most significant).
inline PureState tensor(const PureState& a, const PureState& b) {
  require(a.basis() == b.basis(), "tensor: mode bases differ");
  Vector out(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  return {a.basis(), a.num_modes() + b.num_modes(), std::move(out)};
}

inline DensityOperator tensor(const DensityOperator& a,
                              const DensityOperator& b) {
  require(a.basis() == b.basis(), "tensor: mode bases differ");
  return {a.basis(), a.num_modes() + b.num_modes(),
          detail::kron(a.matrix(), b.matrix())};
}

namespace detail {

/// Splits every full index into (kept-modes index, traced-modes index).
struct TraceSplit {
  std::vector<Index> keep;
  std::vector<Index> traced;
  std::size_t keep_modes = 0;
  std::size_t traced_modes = 0;
  std::vector<std::size_t> traced_mode_list;
};

inline TraceSplit split_modes(const MixedRadix& rx,
                              std::span<const std::size_t> modes_to_trace) {
  std::vector<bool> is_traced(rx.modes(), false);
  for (std::size_t m : modes_to_trace) {
    require(m < rx.modes(), "partial trace: mode index out of range");
    require(!is_traced[m], "partial trace: duplicate mode index");
    is_traced[m] = true;
  }
  TraceSplit s;
  for (std::size_t m = 0; m < rx.modes(); ++m) {
    if (is_traced[m]) {
      ++s.traced_modes;
      s.traced_mode_list.push_back(m);
    } else {
      ++s.keep_modes;
    }
  }
  s.keep.resize(rx.size());
  s.traced.resize(rx.size());
  const Index d = rx.radix();
  for (Index idx = 0; idx < rx.size(); ++idx) {
    Index k = 0, t = 0;
    for (std::size_t m = 0; m < rx.modes(); ++m) {
      const Index dig = rx.digit(idx, m);
      if (is_traced[m]) {
        t = t * d + dig;
      } else {
        k = k * d + dig;
      }
    }
    s.keep[idx] = k;
    s.traced[idx] = t;
  }
  return s;
}

}  // namespace detail

/// sum_j w(j) <j| op |j> over the listed modes, w(j) = prod of per-digit
/// weights. Uniform unit weights give the ordinary partial trace.
inline DensityOperator weighted_partial_trace(
    const DensityOperator& op, std::span<const std::size_t> modes_to_trace,
    const WeightProfile& weights) {
  weights.validate(op.basis().per_mode_dim);
  const MixedRadix rx = op.radix();
  const detail::TraceSplit s = detail::split_modes(rx, modes_to_trace);
  const MixedRadix traced_rx(rx.radix(), s.traced_modes);

  std::vector<double> string_weight(traced_rx.size(), 1.0);
  for (Index t = 0; t < traced_rx.size(); ++t)
    for (std::size_t m = 0; m < s.traced_modes; ++m)
      string_weight[t] *= weights.weights[traced_rx.digit(t, m)];

  // Group full indices by traced string.
  std::vector<std::vector<Index>> groups(traced_rx.size());
  for (Index idx = 0; idx < rx.size(); ++idx) groups[s.traced[idx]].push_back(idx);

  DensityOperator out(op.basis(), s.keep_modes);
  Matrix& o = out.matrix();
  const Matrix& in = op.matrix();
  for (Index t = 0; t < traced_rx.size(); ++t) {
    const double w = string_weight[t];
    if (w == 0.0) continue;
    for (Index r : groups[t])
      for (Index c : groups[t])
        o(static_cast<Eigen::Index>(s.keep[r]), static_cast<Eigen::Index>(s.keep[c])) +=
            w * in(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  return out;
}

inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::span<const std::size_t> modes_to_trace) {
  return weighted_partial_trace(
      rho, modes_to_trace, WeightProfile::uniform(rho.basis().per_mode_dim));
}

/// Partial trace over the last `n` modes (the CV bundle, by convention).
inline std::vector<std::size_t> trailing_modes(std::size_t total, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m = total - n; m < total; ++m) out.push_back(m);
  return out;
}

inline std::vector<std::size_t> leading_modes(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < n; ++m) out.push_back(m);
  return out;
}

/// (1/2) sum |eig(a - b)|, with the difference symmetrized.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "trace distance: shape mismatch");
  const Matrix diff = a - b;
  const Matrix h = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  require(a.basis() == b.basis() && a.num_modes() == b.num_modes(),
          "trace distance: operators live on different spaces");
  return trace_distance(a.matrix(), b.matrix());
}

// Snapshot columns. Pure: "index real imag"; density: "row col real imag".
// Header lines start with '#'. Only nonzero entries are written.

inline void write_columns(std::ostream& os, const PureState& psi) {
  os << "# pure modes=" << psi.num_modes()
     << " dim=" << psi.basis().per_mode_dim << '\n';
  char buf[96];
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    const Complex a = psi.amplitudes()(i);
    if (a == Complex{}) continue;
    std::snprintf(buf, sizeof buf, "%lld %.17e %.17e\n",
                  static_cast<long long>(i), a.real(), a.imag());
    os << buf;
  }
}

inline void write_columns(std::ostream& os, const DensityOperator& rho) {
  os << "# density modes=" << rho.num_modes()
     << " dim=" << rho.basis().per_mode_dim << '\n';
  char buf[128];
  const Matrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a = m(r, c);
      if (a == Complex{}) continue;
      std::snprintf(buf, sizeof buf, "%lld %lld %.17e %.17e\n",
                    static_cast<long long>(r), static_cast<long long>(c),
                    a.real(), a.imag());
      os << buf;
    }
}

namespace detail {

inline void parse_header(std::istream& is, const std::string& kind,
                         std::size_t& modes, std::size_t& dim) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "snapshot: missing header");
  std::istringstream hs(line);
  std::string hash, k, m, d;
  hs >> hash >> k >> m >> d;
  require(hash == "#" && k == kind, "snapshot: expected '# " + kind + "' header");
  require(m.rfind("modes=", 0) == 0 && d.rfind("dim=", 0) == 0,
          "snapshot: malformed header");
  modes = std::stoul(m.substr(6));
  dim = std::stoul(d.substr(4));
}

}  // namespace detail

inline PureState read_pure_columns(std::istream& is) {
  std::size_t modes = 0, dim = 0;
  detail::parse_header(is, "pure", modes, dim);
  PureState psi(ModeBasis{dim}, modes);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long i = 0;
    double re = 0, im = 0;
    require(static_cast<bool>(ls >> i >> re >> im), "snapshot: bad row: " + line);
    require(i >= 0 && static_cast<std::size_t>(i) < psi.dim(),
            "snapshot: index out of range");
    psi.amplitudes()(i) = Complex{re, im};
  }
  return psi;
}

inline DensityOperator read_density_columns(std::istream& is) {
  std::size_t modes = 0, dim = 0;
  detail::parse_header(is, "density", modes, dim);
  DensityOperator rho(ModeBasis{dim}, modes);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long r = 0, c = 0;
    double re = 0, im = 0;
    require(static_cast<bool>(ls >> r >> c >> re >> im),
            "snapshot: bad row: " + line);
    require(r >= 0 && c >= 0 && static_cast<std::size_t>(r) < rho.dim() &&
                static_cast<std::size_t>(c) < rho.dim(),
            "snapshot: index out of range");
    rho.matrix()(r, c) = Complex{re, im};
  }
  return rho;
}

}  // namespace ctc
