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
#include <string>
#include <vector>

#include "fdjcas/channels.hpp"
#include "fdjcas/common.hpp"
#include "fdjcas/geometry.hpp"
#include "fdjcas/optimizer.hpp"
#include "fdjcas/steering.hpp"

namespace fdjcas {

/// Which self-interference terms reach the radar receiver in simulation.
///   none:              no self-interference
///   full:              line-of-sight, scattered and surface paths as generated
///   post_cancellation: the line-of-sight and surface paths left by the design,
///                      plus the scattered path scaled by the residual factor
enum class SiMode { none, full, post_cancellation };

std::string to_string(SiMode mode);
SiMode si_mode_from_string(const std::string &name);

struct SnapshotBatch {
  CMat samples; // N_b x L
  int snapshots = 0;
  double true_theta = 0.0;
  SiMode si_mode = SiMode::none;
};

struct SnapshotOptions {
  int snapshots = 64;
  SiMode si_mode = SiMode::post_cancellation;
  double residual_si_factor = 0.1; // amplitude factor on the scattered path
};

/// Draws L columns y = (A + S) V s + n with s ~ CN(0, I), n ~ CN(0, sigma_r^2 I),
/// where S is the self-interference selected by the options.
SnapshotBatch simulate_snapshots(const Scene &scene, const ChannelSet &channels, const CMat &precoder,
                                 const CVec &phi, const PathCoefficients &coeffs, const SnapshotOptions &options,
                                 std::uint64_t seed);

struct MusicOptions {
  int subspace_dim = 2;
  double grid_resolution = 1e-3; // radians, grid covers [-pi/2, pi/2]
};

struct MusicResult {
  double theta_hat = 0.0;
  RVec grid;
  RVec pseudo_spectrum;
};

/// MUSIC over a receive ULA with the scene's spacing and wavelength.
/// Throws Error when the batch has fewer snapshots than receive antennas.
MusicResult music_estimate(const SnapshotBatch &batch, const Scene &scene, const MusicOptions &options);

struct MseOptions {
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  int trials = 200;
  std::uint64_t seed = 1;
  SnapshotOptions snapshots;
  MusicOptions music;
  JcasOptions design;     // power_budget is overwritten per SNR point
  int workers = 1;
};

struct MseRow {
  double snr_db = 0.0;
  double mse = 0.0;       // rad^2
  double crb = 0.0;       // rad^2, bound for the batch length
  int trials = 0;
  bool infeasible = false; // the design could not meet the sensing bound
};

/// One design per SNR point (transmit power 10^(snr/10) with unit noise), then
/// `trials` independent batches with seeds seed + trial index.
std::vector<MseRow> monte_carlo_mse(const Scene &scene, const ChannelSet &channels, const PathCoefficients &coeffs,
                                    const CVec &phi0, const MseOptions &options);

/// CSV with columns snr_db,mse_rad2,crb_rad2,trials. Infeasible rows leave mse and crb empty.
void write_mse_csv(std::ostream &out, const std::vector<MseRow> &rows);

} // namespace fdjcas
