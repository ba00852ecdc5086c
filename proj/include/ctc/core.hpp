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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

/// Shared scalar types, error classes and mixed-radix indexing for ctcsim.
namespace ctc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = std::uint64_t;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline constexpr const char* kVersion = "ctcsim 0.1.0";

/// Largest Hilbert-space dimension for which a full unitary is materialized.
inline constexpr std::size_t kMaterializeCap = 4096;

/// A precondition on an operation's arguments was violated.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed one of the configured dimension caps.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Postselection produced the zero vector, i.e. the input is forbidden.
class PostselectionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractError(what);
}

/// Scalars are equal iff |a - b| <= tol * max(1, |a|, |b|).
inline bool approx_equal(Complex a, Complex b, double tol = 1e-12) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

/// Integer power with overflow check; used for tensor-space dimensions.
inline std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > static_cast<std::size_t>(-1) / base)
      throw SizeCapError("tensor dimension overflows size_t");
    out *= base;
  }
  return out;
}

/// Mixed-radix encoding of mode occupation strings.
///
/// Mode 0 is the most significant digit, so the first mode varies slowest.
/// Digit 0 is the vacuum; digits 1..N are clock energy levels.
class MixedRadix {
 public:
  MixedRadix(std::size_t radix, std::size_t modes)
      : radix_(radix), modes_(modes), size_(checked_pow(radix, modes)),
        strides_(modes) {
    Index s = 1;
    for (std::size_t m = modes; m-- > 0;) {
      strides_[m] = s;
      s *= radix;
    }
  }

  std::size_t radix() const { return radix_; }
  std::size_t modes() const { return modes_; }
  std::size_t size() const { return size_; }

  Index stride(std::size_t mode) const { return strides_[mode]; }

  std::size_t digit(Index idx, std::size_t mode) const {
    return static_cast<std::size_t>((idx / strides_[mode]) % radix_);
  }

  Index with_digit(Index idx, std::size_t mode, std::size_t value) const {
    const Index s = strides_[mode];
    const Index old = (idx / s) % radix_;
    return idx - old * s + static_cast<Index>(value) * s;
  }

 private:
  std::size_t radix_;
  std::size_t modes_;
  std::size_t size_;
  std::vector<Index> strides_;
};

}  // namespace ctc
