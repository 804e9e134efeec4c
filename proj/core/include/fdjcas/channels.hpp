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
#include <iosfwd>
#include <span>

#include "fdjcas/common.hpp"
#include "fdjcas/geometry.hpp"

namespace fdjcas {

/// Every propagation matrix of the scene. Rows index receivers, columns transmitters.
struct ChannelSet {
  CMat bs_to_user;   // N_j x M_b   (far field)
  CMat ris_to_user;  // N_j x RC    (far field)
  CMat bs_to_ris;    // RC  x M_b   (near field)
  CMat ris_to_bs;    // N_b x RC    (near field)
  CMat si_los;       // N_b x M_b   line-of-sight self-interference (near field)
  CMat si_nlos;      // N_b x M_b   scattered self-interference residual
  double user_noise_var = 1.0;
  double radar_noise_var = 1.0;

  Eigen::Index tx_count() const { return si_los.cols(); }
  Eigen::Index rx_count() const { return si_los.rows(); }
  Eigen::Index user_count() const { return bs_to_user.rows(); }
  Eigen::Index ris_size() const { return bs_to_ris.rows(); }
};

struct ChannelOptions {
  double nlos_si_power = 0.01; // kappa: E||H_nlos||_F^2 = kappa * M_b * N_b
  cplx user_link_gain{1.0, 0.0};
  cplx ris_user_gain{1.0, 0.0};
  double user_noise_var = 1.0;
  double radar_noise_var = 1.0;
};

/// Spherical-wavefront line-of-sight channel between two arrays:
///   H(m, n) = rho / d_mn * exp(-i 2 pi d_mn / lambda),
/// with rho chosen so that ||H||_F^2 = (#tx) * (#rx).
CMat nearfield_los(std::span<const Vec3> tx_positions, std::span<const Vec3> rx_positions, double wavelength);

/// Rank-one plane-wave channel gain * a_rx * a_tx^T.
CMat farfield_los(const CVec &steering_rx, const CVec &steering_tx, cplx gain);

/// Synthesizes all channels of a scene. Deterministic in (scene, options, seed).
/// Without a surface, the surface-related matrices have zero rows/columns.
ChannelSet build_channel_set(const Scene &scene, const ChannelOptions &options, std::uint64_t seed);

/// Text dump of a channel set: one JSON header line naming every matrix and its
/// dimensions, followed by each matrix row-major with real/imaginary parts
/// interleaved, one matrix row per line.
void write_channel_set(std::ostream &out, const ChannelSet &channels);
ChannelSet read_channel_set(std::istream &in);

} // namespace fdjcas
