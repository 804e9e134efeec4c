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

#include "fdjcas/channels.hpp"

#include <cmath>

#include "fdjcas/rng.hpp"
#include "fdjcas/steering.hpp"

namespace fdjcas {

CMat nearfield_los(std::span<const Vec3> tx_positions, std::span<const Vec3> rx_positions, double wavelength) {
  if (!(wavelength > 0.0))
    throw GeometryError("nearfield_los: wavelength must be positive");
  const RMat dist = pairwise_distances(tx_positions, rx_positions);
  const double target_power = static_cast<double>(dist.rows() * dist.cols());
  const double rho = std::sqrt(target_power / dist.array().square().inverse().sum());
  CMat h(dist.rows(), dist.cols());
  for (Eigen::Index n = 0; n < dist.cols(); ++n)
    for (Eigen::Index m = 0; m < dist.rows(); ++m) {
      const double d = dist(m, n);
      h(m, n) = std::polar(rho / d, -2.0 * kPi * d / wavelength);
    }
  return h;
}

CMat farfield_los(const CVec &steering_rx, const CVec &steering_tx, cplx gain) {
  return gain * steering_rx * steering_tx.transpose();
}

ChannelSet build_channel_set(const Scene &scene, const ChannelOptions &opt, std::uint64_t seed) {
  validate_scene(scene);
  if (!(opt.nlos_si_power >= 0.0))
    throw Error("build_channel_set: nlos_si_power must be nonnegative");
  if (!(opt.user_noise_var > 0.0) || !(opt.radar_noise_var > 0.0))
    throw Error("build_channel_set: noise variances must be positive");

  const int mb = static_cast<int>(scene.tx_count());
  const int nb = static_cast<int>(scene.rx_count());
  const int nj = static_cast<int>(scene.user_count());
  const double d = scene.element_spacing;
  const double lambda = scene.wavelength;
  const Vec3 bs = scene.bs_tx_positions.front();
  const Vec3 user = scene.user_position();

  ChannelSet ch;
  ch.user_noise_var = opt.user_noise_var;
  ch.radar_noise_var = opt.radar_noise_var;

  ch.si_los = nearfield_los(scene.bs_tx_positions, scene.bs_rx_positions, lambda);

  const CVec user_from_bs = ula_steering(ula_angle(user, bs), nj, d, lambda);
  const CVec bs_toward_user = ula_steering(ula_angle(bs, user), mb, d, lambda);
  ch.bs_to_user = farfield_los(user_from_bs, bs_toward_user, opt.user_link_gain);

  if (scene.has_ris()) {
    ch.bs_to_ris = nearfield_los(scene.bs_tx_positions, scene.ris_element_positions, lambda);
    ch.ris_to_bs = nearfield_los(scene.ris_element_positions, scene.bs_rx_positions, lambda);
    const CVec user_from_ris = ula_steering(ula_angle(user, scene.ris_origin()), nj, d, lambda);
    const CVec ris_toward_user = upa_steering(ris_angles_toward(scene, user), scene);
    ch.ris_to_user = farfield_los(user_from_ris, ris_toward_user, opt.ris_user_gain);
  } else {
    ch.bs_to_ris = CMat::Zero(0, mb);
    ch.ris_to_bs = CMat::Zero(nb, 0);
    ch.ris_to_user = CMat::Zero(nj, 0);
  }

  auto eng = make_stream(seed, "si_nlos");
  ch.si_nlos = complex_normal_matrix(eng, nb, mb, opt.nlos_si_power);
  return ch;
}

} // namespace fdjcas
