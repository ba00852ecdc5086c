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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ctc/combinatorics.hpp"
#include "ctc/core.hpp"

namespace ctc {

/// I_n(x) by its power series.
inline double bessel_I(unsigned n, double x) {
  require(x >= 0.0 && x <= 100.0, "bessel_I supports 0 <= x <= 100");
  const double half = 0.5 * x;
  double term = 1.0;
  for (unsigned i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  for (unsigned m = 1; term > 1e-16 * sum; ++m) {
    term *= half * half / (static_cast<double>(m) * static_cast<double>(m + n));
    sum += term;
  }
  return sum;
}

inline constexpr double kTailBound = 1e-14;

// Limits ---------------------------------------------------------------------

inline double poisson_pmf(std::size_t k, double lambda) {
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

/// x^(2k) / (k!)^2 / I_0(2x).
inline double bessel_pmf(std::size_t k, double x) {
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(2.0 * (kd * std::log(x) - std::lgamma(kd + 1.0))) / bessel_I(0, 2.0 * x);
}

inline double dctc_lambda(double q) {
  require(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
  return std::log(1.0 / q);
}

inline double h_ratio(double h) {
  require(h > 0.0 && h <= 1.0, "h must lie in (0, 1]");
  return (1.0 - h) / h;
}

inline double dctc_limit_pmf(std::size_t k, double q) { return poisson_pmf(k, dctc_lambda(q)); }
inline double dctc_limit_expectation(double q) { return dctc_lambda(q); }

inline double pctc_h_limit_pmf(std::size_t k, double h) { return bessel_pmf(k, h_ratio(h)); }

inline double bessel_expectation(double x) {
  if (x == 0.0) return 0.0;
  return x * bessel_I(1, 2.0 * x) / bessel_I(0, 2.0 * x);
}

inline double pctc_h_limit_expectation(double h) { return bessel_expectation(h_ratio(h)); }

inline double pctc_beta_limit_pmf(std::size_t k, double r) {
  require(r >= 0.0, "r must be nonnegative");
  return bessel_pmf(k, r);
}

inline double pctc_beta_limit_expectation(double r) {
  require(r >= 0.0, "r must be nonnegative");
  return bessel_expectation(r);
}

enum class LimitFamily { dctc, pctc_h, pctc_beta };

inline const char* to_string(LimitFamily f) {
  switch (f) {
    case LimitFamily::dctc: return "dctc";
    case LimitFamily::pctc_h: return "pctc_h";
    case LimitFamily::pctc_beta: return "pctc_beta";
  }
  return "unknown";
}

inline LimitFamily limit_family_from_string(const std::string& s) {
  if (s == "dctc") return LimitFamily::dctc;
  if (s == "pctc_h") return LimitFamily::pctc_h;
  if (s == "pctc_beta") return LimitFamily::pctc_beta;
  throw ContractError("unknown family '" + s + "' (dctc, pctc_h, pctc_beta)");
}

/// One family at one parameter value: q, h or r respectively.
struct LimitLaw {
  LimitFamily family = LimitFamily::dctc;
  double param = 1.0;

  double pmf(std::size_t k) const {
    switch (family) {
      case LimitFamily::dctc: return dctc_limit_pmf(k, param);
      case LimitFamily::pctc_h: return pctc_h_limit_pmf(k, param);
      case LimitFamily::pctc_beta: return pctc_beta_limit_pmf(k, param);
    }
    return 0.0;
  }

  double expectation() const {
    switch (family) {
      case LimitFamily::dctc: return dctc_limit_expectation(param);
      case LimitFamily::pctc_h: return pctc_h_limit_expectation(param);
      case LimitFamily::pctc_beta: return pctc_beta_limit_expectation(param);
    }
    return 0.0;
  }

  /// Rate of the Poisson law, or x of the Bessel law.
  double scale() const {
    switch (family) {
      case LimitFamily::dctc: return dctc_lambda(param);
      case LimitFamily::pctc_h: return h_ratio(param);
      case LimitFamily::pctc_beta: return param;
    }
    return 0.0;
  }

  /// Smallest K past the mode with 2 pmf(K) < kTailBound. Past 2x the mode the
  /// term ratio is below 1/2, so everything from K on sums to under 2 pmf(K).
  std::size_t truncation() const {
    const auto mode = static_cast<std::size_t>(std::ceil(2.0 * scale()));
    std::size_t k = mode;
    while (2.0 * pmf(k) >= kTailBound) ++k;
    return k;
  }

  /// pmf(0..K-1) with K = truncation().
  std::vector<double> table() const {
    std::vector<double> out;
    const std::size_t K = truncation();
    for (std::size_t k = 0; k < K; ++k) out.push_back(pmf(k));
    return out;
  }
};

// Finite M -------------------------------------------------------------------

namespace detail {

inline std::vector<double> normalize_logs(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  require(std::isfinite(top), "all weights vanish");
  std::vector<double> out;
  double total = 0.0;
  for (double l : logs) total += std::exp(l - top);
  for (double l : logs) out.push_back(std::exp(l - top) / total);
  return out;
}

inline double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

// k * log(x) with 0 * log(0) = 0.
inline double power_log(double k, double x) { return k == 0.0 ? 0.0 : k * safe_log(x); }

}  // namespace detail

/// C(M,k) g^(M-k) (1-g)^k with g = q^(1/M).
inline std::vector<double> dctc_finite_pmf(std::size_t M, double q) {
  require(M >= 1, "M >= 1");
  require(q > 0.0 && q <= 1.0, "q must lie in (0, 1]");
  const double g = std::pow(q, 1.0 / static_cast<double>(M));
  const double Md = static_cast<double>(M);
  std::vector<double> logs;
  for (std::size_t k = 0; k <= M; ++k) {
    const double kd = static_cast<double>(k);
    logs.push_back(log_binomial(Md, kd) + detail::power_log(Md - kd, g) +
                   detail::power_log(kd, 1.0 - g));
  }
  return detail::normalize_logs(logs);
}

/// Squared weights C(M,k) h^(M-k) ((1-h)/N)^k, normalized.
inline std::vector<double> pctc_h_finite_pmf(std::size_t M, std::size_t N, double h) {
  require(M >= 1 && N >= 1, "M, N >= 1");
  require(h >= 0.0 && h <= 1.0, "h must lie in [0, 1]");
  const double Md = static_cast<double>(M);
  std::vector<double> logs;
  for (std::size_t k = 0; k <= M; ++k) {
    const double kd = static_cast<double>(k);
    logs.push_back(2.0 * (log_binomial(Md, kd) + detail::power_log(Md - kd, h) +
                          detail::power_log(kd, (1.0 - h) / static_cast<double>(N))));
  }
  return detail::normalize_logs(logs);
}

/// Squared weights C(M,k) beta^k with beta = r/M, normalized.
inline std::vector<double> pctc_beta_finite_pmf(std::size_t M, double r) {
  require(M >= 1, "M >= 1");
  require(r >= 0.0, "r must be nonnegative");
  const double Md = static_cast<double>(M);
  std::vector<double> logs;
  for (std::size_t k = 0; k <= M; ++k) {
    const double kd = static_cast<double>(k);
    logs.push_back(2.0 * (log_binomial(Md, kd) + detail::power_log(kd, r / Md)));
  }
  return detail::normalize_logs(logs);
}

/// Finite-M pmf of a family; the h family uses N = M.
inline std::vector<double> finite_pmf(const LimitLaw& law, std::size_t M) {
  switch (law.family) {
    case LimitFamily::dctc: return dctc_finite_pmf(M, law.param);
    case LimitFamily::pctc_h: return pctc_h_finite_pmf(M, M, law.param);
    case LimitFamily::pctc_beta: return pctc_beta_finite_pmf(M, law.param);
  }
  return {};
}

/// max_k |a_k - b_k|, with missing entries read as zero.
inline double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

struct ConvergenceRow {
  std::size_t modes;
  double distance;
};

struct ConvergenceReport {
  LimitLaw law;
  std::vector<ConvergenceRow> rows;

  bool monotone() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].distance > rows[i - 1].distance) return false;
    return true;
  }

  double final_distance() const {
    require(!rows.empty(), "empty convergence report");
    return rows.back().distance;
  }
};

inline ConvergenceRow convergence_point(const LimitLaw& law, std::size_t M) {
  return {M, sup_distance(finite_pmf(law, M), law.table())};
}

inline ConvergenceReport convergence_report(const LimitLaw& law,
                                            const std::vector<std::size_t>& modes) {
  ConvergenceReport r{law, {}};
  for (std::size_t M : modes) r.rows.push_back(convergence_point(law, M));
  return r;
}

inline std::vector<std::size_t> doubling_modes(std::size_t from, std::size_t to) {
  require(from >= 1 && from <= to, "need 1 <= from <= to");
  std::vector<std::size_t> out;
  for (std::size_t M = from; M <= to; M *= 2) out.push_back(M);
  return out;
}

}  // namespace ctc
