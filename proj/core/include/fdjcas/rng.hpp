// SPDX-License-Identifier: Apache-2.0
//
// fdjcas: full-duplex joint communications and sensing with a reconfigurable surface
// Copyright (C) 2026 The fdjcas authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "fdjcas/common.hpp"

namespace fdjcas {

/// Independent generator stream for one purpose, derived from a run seed and a
/// tag, so that adding or removing draws in one stream never shifts another.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ULL; // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

/// Circularly-symmetric complex Gaussian with the given variance.
template <class Engine> cplx complex_normal(Engine &eng, double variance) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double s = std::sqrt(0.5 * variance);
  const double re = n(eng);
  const double im = n(eng);
  return {s * re, s * im};
}

template <class Engine> CMat complex_normal_matrix(Engine &eng, Eigen::Index rows, Eigen::Index cols, double variance) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = complex_normal(eng, variance);
  return m;
}

/// Unit-modulus phase with uniform angle.
template <class Engine> cplx random_phase(Engine &eng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  return std::polar(1.0, u(eng));
}

} // namespace fdjcas
