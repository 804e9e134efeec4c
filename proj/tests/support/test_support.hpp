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

#include "fdjcas/channels.hpp"
#include "fdjcas/geometry.hpp"
#include "fdjcas/optimizer.hpp"
#include "fdjcas/rng.hpp"
#include "fdjcas/steering.hpp"

namespace fdjcas::testing {

inline Scene reference_scene() { return make_scene(SceneParams{}); }

/// Small scene that keeps dense checks fast.
inline Scene small_scene() {
  SceneParams p;
  p.tx_antennas = 6;
  p.rx_antennas = 5;
  p.user_antennas = 3;
  p.ris_rows = 3;
  p.ris_cols = 4;
  return make_scene(p);
}

/// Scene with randomized angles and ranges that stays well clear of degenerate geometry.
inline Scene random_scene(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SceneParams p;
  p.tx_antennas = 4 + static_cast<int>(u(eng) * 8);
  p.rx_antennas = 4 + static_cast<int>(u(eng) * 6);
  p.user_antennas = 2 + static_cast<int>(u(eng) * 3);
  p.ris_rows = 2 + static_cast<int>(u(eng) * 4);
  p.ris_cols = 2 + static_cast<int>(u(eng) * 4);
  p.bs_ris_angle = deg2rad(20.0 + 30.0 * u(eng));
  p.bs_ris_distance = 3.0 + 5.0 * u(eng);
  p.target_range = 30.0 + 40.0 * u(eng);
  p.target_angle = deg2rad(-10.0 + 25.0 * u(eng));
  p.user_angle = deg2rad(-50.0 + 30.0 * u(eng));
  return make_scene(p);
}

inline CMat random_matrix(std::mt19937_64 &eng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0) {
  return complex_normal_matrix(eng, rows, cols, variance);
}

inline CVec random_phases(std::mt19937_64 &eng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = random_phase(eng);
  return v;
}

/// Precoder with the given Frobenius power.
inline CMat random_precoder(std::mt19937_64 &eng, Eigen::Index rows, Eigen::Index cols, double power) {
  CMat v = random_matrix(eng, rows, cols);
  return v * std::sqrt(power / v.squaredNorm());
}

inline double rel_frobenius(const CMat &a, const CMat &b) { return (a - b).norm() / b.norm(); }

} // namespace fdjcas::testing
