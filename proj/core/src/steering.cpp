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

#include "fdjcas/steering.hpp"

#include <cmath>

#include "fdjcas/rng.hpp"

namespace fdjcas {

CVec ula_steering(double theta, int count, double spacing, double wavelength) {
  if (count < 1)
    throw DimensionError("ula_steering: count must be at least 1");
  const double k = 2.0 * kPi / wavelength * spacing * std::sin(theta);
  const double norm = 1.0 / std::sqrt(static_cast<double>(count));
  CVec a(count);
  for (int n = 0; n < count; ++n)
    a(n) = std::polar(norm, k * n);
  return a;
}

CVec ula_steering_derivative(double theta, int count, double spacing, double wavelength) {
  if (count < 1)
    throw DimensionError("ula_steering_derivative: count must be at least 1");
  const double base = 2.0 * kPi / wavelength * spacing;
  const double k = base * std::sin(theta);
  const double dk = base * std::cos(theta);
  const double norm = 1.0 / std::sqrt(static_cast<double>(count));
  CVec a(count);
  for (int n = 0; n < count; ++n)
    a(n) = kI * (dk * n) * std::polar(norm, k * n);
  return a;
}

CVec upa_steering(const RisAngles &angles, const Scene &scene) {
  const auto rc = static_cast<Eigen::Index>(scene.ris_size());
  CVec a(rc);
  if (rc == 0)
    return a;
  const double norm = 1.0 / std::sqrt(static_cast<double>(rc));
  const double k = 2.0 * kPi / scene.wavelength;
  for (Eigen::Index i = 0; i < rc; ++i)
    a(i) = std::polar(norm, k * ris_phase_offset(scene, static_cast<std::size_t>(i), angles));
  return a;
}

CVec upa_steering_derivative(const Scene &scene) {
  const auto rc = static_cast<Eigen::Index>(scene.ris_size());
  CVec da(rc);
  if (rc == 0)
    return da;
  const double norm = 1.0 / std::sqrt(static_cast<double>(rc));
  const double k = 2.0 * kPi / scene.wavelength;
  const RisAngles a = ris_angles_of_target(scene);
  const RisAngles d = ris_angle_derivatives(scene);
  const double se = std::sin(a.elevation), ce = std::cos(a.elevation);
  const double sa = std::sin(a.azimuth), ca = std::cos(a.azimuth);
  for (Eigen::Index i = 0; i < rc; ++i) {
    const auto [dx, dz] = ris_element_offsets(scene, static_cast<std::size_t>(i));
    const double w = dx * se * ca + dz * sa;
    const double dw = dx * (ce * ca * d.elevation - se * sa * d.azimuth) + dz * ca * d.azimuth;
    da(i) = kI * (k * dw) * std::polar(norm, k * w);
  }
  return da;
}

PathCoefficients PathCoefficients::draw(std::uint64_t seed, double direct_magnitude, double ris_magnitude) {
  auto eng = make_stream(seed, "path_coefficients");
  PathCoefficients c;
  c.direct = direct_magnitude * random_phase(eng);
  c.ris_round_trip = ris_magnitude * random_phase(eng);
  c.ris_to_bs = ris_magnitude * random_phase(eng);
  c.bs_to_ris = ris_magnitude * random_phase(eng);
  c.bs_ris_scale = 1.0;
  return c;
}

PathCoefficients PathCoefficients::direct_only() const {
  PathCoefficients c;
  c.direct = direct;
  return c;
}

SteeringSet make_steering_set(const Scene &scene) {
  const int mb = static_cast<int>(scene.tx_count());
  const int nb = static_cast<int>(scene.rx_count());
  const double d = scene.element_spacing;
  const double lambda = scene.wavelength;
  const double theta = scene.target_angle;
  const double w0 = scene.bs_ris_angle;

  SteeringSet sv;
  sv.rx_target = ula_steering(theta, nb, d, lambda);
  sv.tx_target = ula_steering(theta, mb, d, lambda);
  sv.rx_ris = ula_steering(w0, nb, d, lambda);
  sv.tx_ris = ula_steering(w0, mb, d, lambda);
  sv.d_rx_target = ula_steering_derivative(theta, nb, d, lambda);
  sv.d_tx_target = ula_steering_derivative(theta, mb, d, lambda);
  if (scene.has_ris()) {
    sv.ris_target = upa_steering(ris_angles_of_target(scene), scene);
    sv.ris_bs = upa_steering(ris_angles_toward(scene, scene.bs_tx_positions.front()), scene);
    sv.d_ris_target = upa_steering_derivative(scene);
  } else {
    sv.ris_target = CVec(0);
    sv.ris_bs = CVec(0);
    sv.d_ris_target = CVec(0);
  }
  return sv;
}

namespace {

void check_dims(const SteeringSet &sv, const CVec &phi) {
  if (sv.rx_target.size() != sv.rx_ris.size() || sv.tx_target.size() != sv.tx_ris.size() ||
      sv.d_rx_target.size() != sv.rx_target.size() || sv.d_tx_target.size() != sv.tx_target.size())
    throw DimensionError("steering vectors of the base station arrays disagree in length");
  if (phi.size() != sv.ris_target.size() || phi.size() != sv.ris_bs.size() ||
      phi.size() != sv.d_ris_target.size())
    throw DimensionError("surface phase vector and surface steering vectors disagree in length");
}

// a_i(w0)^T Phi v for diagonal Phi = diag(phi)
cplx surface_response(const CVec &ris_bs, const CVec &phi, const CVec &v) {
  return (ris_bs.array() * phi.array() * v.array()).sum();
}

} // namespace

CMat assemble_path_matrix(const SteeringSet &sv, const CVec &phi, const PathCoefficients &c) {
  check_dims(sv, phi);
  const cplx s = surface_response(sv.ris_bs, phi, sv.ris_target);
  const cplx xi3 = c.bs_to_ris * c.bs_ris_scale;
  CMat a = c.direct * sv.rx_target * sv.tx_target.transpose();
  a += (c.ris_round_trip * s * s) * sv.rx_ris * sv.tx_ris.transpose();
  a += (c.ris_to_bs * s) * sv.rx_target * sv.tx_ris.transpose();
  a += (xi3 * s) * sv.rx_ris * sv.tx_target.transpose();
  return a;
}

CMat assemble_path_matrix_derivative(const SteeringSet &sv, const CVec &phi, const PathCoefficients &c) {
  check_dims(sv, phi);
  const cplx s = surface_response(sv.ris_bs, phi, sv.ris_target);
  const cplx ds = surface_response(sv.ris_bs, phi, sv.d_ris_target);
  const cplx xi3 = c.bs_to_ris * c.bs_ris_scale;

  // direct path
  CMat da = c.direct * (sv.d_rx_target * sv.tx_target.transpose() + sv.rx_target * sv.d_tx_target.transpose());
  // round trip through the surface: both surface hops depend on theta
  da += (c.ris_round_trip * (ds * s + s * ds)) * sv.rx_ris * sv.tx_ris.transpose();
  // surface -> target -> receiver
  da += (c.ris_to_bs * s) * sv.d_rx_target * sv.tx_ris.transpose();
  da += (c.ris_to_bs * ds) * sv.rx_target * sv.tx_ris.transpose();
  // transmitter -> target -> surface
  da += (xi3 * ds) * sv.rx_ris * sv.tx_target.transpose();
  da += (xi3 * s) * sv.rx_ris * sv.d_tx_target.transpose();
  return da;
}

SensingContext make_sensing_context(const Scene &scene, const CVec &phi, const PathCoefficients &coeffs,
                                    double radar_noise_var) {
  if (!(radar_noise_var > 0.0))
    throw Error("make_sensing_context: radar noise variance must be positive");
  SensingContext ctx;
  ctx.steering = make_steering_set(scene);
  const auto nb = static_cast<Eigen::Index>(scene.rx_count());
  ctx.noise_cov = radar_noise_var * CMat::Identity(nb, nb);
  refresh_sensing_context(ctx, phi, coeffs);
  return ctx;
}

void refresh_sensing_context(SensingContext &ctx, const CVec &phi, const PathCoefficients &coeffs) {
  ctx.path_matrix = assemble_path_matrix(ctx.steering, phi, coeffs);
  ctx.path_matrix_derivative = assemble_path_matrix_derivative(ctx.steering, phi, coeffs);
}

} // namespace fdjcas
