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

#include <cstddef>
#include <span>
#include <vector>

#include "fdjcas/common.hpp"

namespace fdjcas {

/// Orientation of the reflecting surface. The first in-plane axis carries the
/// "x" element offsets and the second the "z" offsets of the planar response.
enum class RisPlane { xz, xy };

/// Inputs used to lay out a scene. Lengths in meters, angles in radians.
/// A zero spacing or gap selects the default (half a wavelength, two wavelengths).
struct SceneParams {
  int tx_antennas = 15;
  int rx_antennas = 10;
  int user_antennas = 5;
  int ris_rows = 10;
  int ris_cols = 10;
  double wavelength = 0.01;
  double element_spacing = 0.0;
  double tx_rx_gap = 0.0;
  double bs_ris_angle = deg2rad(30.0);
  double bs_ris_distance = 5.0;
  double user_distance = 80.0;
  double user_angle = deg2rad(-30.0);
  double target_range = 50.0;
  double target_angle = deg2rad(20.0);
  RisPlane ris_plane = RisPlane::xz;
};

/// Positions of every radiating element plus the target description.
///
/// The base station transmit array sits on the z-axis starting at the origin;
/// the receive array is parallel to it, shifted along x by the tx-rx gap. The
/// surface's first element lies at distance r1 from the origin at angle w0 in
/// the (x,z) plane, and the target sits at range l on the same plane at angle
/// theta measured from the x-axis.
struct Scene {
  std::vector<Vec3> bs_tx_positions;
  std::vector<Vec3> bs_rx_positions;
  std::vector<Vec3> ris_element_positions; // row-major, index = row * cols + col
  std::vector<Vec3> user_positions;
  int ris_rows = 0;
  int ris_cols = 0;
  Vec3 ris_row_axis = Vec3::UnitX(); // direction of increasing column index
  Vec3 ris_col_axis = Vec3::UnitZ(); // direction of increasing row index
  double target_range = 0.0;
  double target_angle = 0.0;
  double bs_ris_angle = 0.0;
  double bs_ris_distance = 0.0;
  double wavelength = 0.0;
  double element_spacing = 0.0;

  std::size_t tx_count() const { return bs_tx_positions.size(); }
  std::size_t rx_count() const { return bs_rx_positions.size(); }
  std::size_t user_count() const { return user_positions.size(); }
  std::size_t ris_size() const { return ris_element_positions.size(); }
  bool has_ris() const { return !ris_element_positions.empty(); }

  Vec3 target_position() const { return target_position_at(target_angle); }
  Vec3 target_position_at(double theta) const;
  Vec3 ris_origin() const;
  Vec3 ris_normal() const { return ris_row_axis.cross(ris_col_axis).normalized(); }
  Vec3 user_position() const;
};

/// Builds the scene from its parameters and validates it.
Scene make_scene(const SceneParams &params);

/// Copy of `scene` with the reflecting surface removed.
Scene without_ris(const Scene &scene);

/// Throws GeometryError when a scene invariant is violated.
void validate_scene(const Scene &scene);

/// Matrix of Euclidean distances, entry (m, n) between rx point m and tx point n.
/// Throws GeometryError for empty inputs or coincident points.
RMat pairwise_distances(std::span<const Vec3> tx_positions, std::span<const Vec3> rx_positions);

/// Elevation and azimuth of a direction as seen from the reflecting surface.
struct RisAngles {
  double elevation = 0.0;
  double azimuth = 0.0;
};

/// Surface-relative angles toward an arbitrary point.
///
/// With D the vector from the first surface element to `point`, e1 the row
/// axis and r_r the length of D projected on the surface plane:
///   elevation = acos(D.e1 / |D|),  azimuth = acos(D.e1 / r_r).
/// For the default layout D.e1 = l cos(theta) - r1 cos(w0).
RisAngles ris_angles_toward(const Scene &scene, const Vec3 &point);

/// Surface-relative angles of the target at the scene's angle.
RisAngles ris_angles_of_target(const Scene &scene);

/// Same, with the target moved to `theta` on its range circle.
RisAngles ris_angles_of_target(const Scene &scene, double theta);

/// In-plane offsets of element i from the first element: (along row axis, along column axis).
std::pair<double, double> ris_element_offsets(const Scene &scene, std::size_t element_index);

/// Path-length term of element i for the given angles:
///   dx * sin(elevation) * cos(azimuth) + dz * sin(azimuth)
double ris_phase_offset(const Scene &scene, std::size_t element_index, const RisAngles &angles);

/// Derivative of the path-length term of element i with respect to the target
/// angle, through the dependence of both surface angles on theta.
double ris_phase_offset_derivative(const Scene &scene, std::size_t element_index);

/// Derivatives of the surface angles with respect to the target angle.
RisAngles ris_angle_derivatives(const Scene &scene);

/// Elevation of `to` seen from `from` relative to a linear array along `axis`,
/// i.e. asin(unit(to - from) . axis).
double ula_angle(const Vec3 &from, const Vec3 &to, const Vec3 &axis = Vec3::UnitZ());

} // namespace fdjcas
