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

#include "fdjcas/common.hpp"
#include "fdjcas/geometry.hpp"

namespace fdjcas {

/// Half-wavelength-style uniform linear array response:
///   a(n) = exp(i 2pi/lambda * d * n * sin(theta)) / sqrt(N),  n = 0..N-1.
CVec ula_steering(double theta, int count, double spacing, double wavelength);

/// d a / d theta of the ULA response.
CVec ula_steering_derivative(double theta, int count, double spacing, double wavelength);

/// Planar response of the reflecting surface:
///   a(i) = exp(i 2pi/lambda * w_i(elevation, azimuth)) / sqrt(RC).
CVec upa_steering(const RisAngles &angles, const Scene &scene);

/// d a / d theta of the surface response toward the target, via the chain rule
/// through the surface angles.
CVec upa_steering_derivative(const Scene &scene);

/// Complex reflection coefficients of the four echo paths.
struct PathCoefficients {
  cplx direct{1.0, 0.0};          // BS -> target -> BS
  cplx ris_round_trip{0.0, 0.0};  // BS -> RIS -> target -> RIS -> BS
  cplx ris_to_bs{0.0, 0.0};       // BS -> RIS -> target -> BS
  cplx bs_to_ris{0.0, 0.0};       // BS -> target -> RIS -> BS
  cplx bs_ris_scale{1.0, 0.0};    // extra scalar on the last path, folded into bs_to_ris

  /// Coefficients with the given magnitudes and seeded uniform phases.
  static PathCoefficients draw(std::uint64_t seed, double direct_magnitude = 1.0, double ris_magnitude = 0.5);

  /// Only the direct path survives.
  PathCoefficients direct_only() const;
};

/// Steering vectors and their target-angle derivatives for one scene.
struct SteeringSet {
  CVec rx_target, tx_target;     // a_r(theta), a_t(theta)
  CVec rx_ris, tx_ris;           // a_r(w0), a_t(w0)
  CVec ris_target, ris_bs;       // a_i(theta), a_i(w0): surface toward target / base station
  CVec d_rx_target, d_tx_target; // derivatives w.r.t. theta
  CVec d_ris_target;
};

/// Evaluates every steering vector of the scene at its current target angle.
SteeringSet make_steering_set(const Scene &scene);

/// Radar path matrix A (N_b x M_b):
///   psi a_r(t) a_t(t)^T + xi1 s^2 a_r(w0) a_t(w0)^T + xi2 s a_r(t) a_t(w0)^T + xi3 s a_r(w0) a_t(t)^T
/// where s = a_i(w0)^T Phi a_i(t) is the surface's two-hop response.
CMat assemble_path_matrix(const SteeringSet &sv, const CVec &phi, const PathCoefficients &coeffs);

/// Derivative of the path matrix with respect to the target angle (product rule over all factors).
CMat assemble_path_matrix_derivative(const SteeringSet &sv, const CVec &phi, const PathCoefficients &coeffs);

/// Everything the sensing bound needs for one surface configuration.
struct SensingContext {
  SteeringSet steering;
  CMat path_matrix;            // A
  CMat path_matrix_derivative; // dA/dtheta
  CMat noise_cov;              // radar noise covariance, sigma_r^2 I
};

SensingContext make_sensing_context(const Scene &scene, const CVec &phi, const PathCoefficients &coeffs,
                                    double radar_noise_var);

/// Recomputes A and dA/dtheta for a new surface configuration, reusing the steering vectors.
void refresh_sensing_context(SensingContext &ctx, const CVec &phi, const PathCoefficients &coeffs);

} // namespace fdjcas
