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

#include "fdjcas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdjcas {

namespace {

constexpr double kArccosSlack = 1e-9;
constexpr double kCoincidentTol = 1e-12;

double checked_acos_arg(double arg, const char *what) {
  if (!std::isfinite(arg) || std::abs(arg) > 1.0 + kArccosSlack) {
    std::ostringstream msg;
    msg << "infeasible geometry: arccos argument of " << what << " is " << arg;
    throw GeometryError(msg.str());
  }
  return std::clamp(arg, -1.0, 1.0);
}

// Quantities shared by the angle map and its derivative.
struct TargetGeometry {
  Vec3 delta;      // first surface element -> target
  Vec3 in_plane;   // projection of delta on the surface plane
  double r2 = 0;   // |delta|
  double rr = 0;   // |in_plane|
  double along = 0; // delta . row axis
};

TargetGeometry target_geometry(const Scene &scene, const Vec3 &point) {
  if (!scene.has_ris())
    throw GeometryError("scene has no reflecting surface");
  TargetGeometry g;
  g.delta = point - scene.ris_origin();
  const Vec3 n = scene.ris_normal();
  g.in_plane = g.delta - g.delta.dot(n) * n;
  g.r2 = g.delta.norm();
  g.rr = g.in_plane.norm();
  g.along = g.delta.dot(scene.ris_row_axis);
  if (g.r2 < kCoincidentTol)
    throw GeometryError("infeasible geometry: point coincides with the surface origin");
  if (g.rr < kCoincidentTol)
    throw GeometryError("infeasible geometry: point lies on the surface normal, azimuth undefined");
  return g;
}

} // namespace

Vec3 Scene::target_position_at(double theta) const {
  return target_range * Vec3(std::cos(theta), 0.0, std::sin(theta));
}

Vec3 Scene::ris_origin() const {
  if (ris_element_positions.empty())
    return bs_ris_distance * Vec3(std::cos(bs_ris_angle), 0.0, std::sin(bs_ris_angle));
  return ris_element_positions.front();
}

Vec3 Scene::user_position() const {
  if (user_positions.empty())
    throw GeometryError("scene has no user array");
  return user_positions.front();
}

Scene make_scene(const SceneParams &p) {
  if (p.tx_antennas < 1 || p.rx_antennas < 1 || p.user_antennas < 1)
    throw GeometryError("antenna counts must be positive");
  if (p.ris_rows < 0 || p.ris_cols < 0 || (p.ris_rows == 0) != (p.ris_cols == 0))
    throw GeometryError("surface rows and columns must both be positive or both zero");
  if (!(p.wavelength > 0.0))
    throw GeometryError("wavelength must be positive");

  Scene s;
  s.wavelength = p.wavelength;
  s.element_spacing = p.element_spacing > 0.0 ? p.element_spacing : 0.5 * p.wavelength;
  const double gap = p.tx_rx_gap > 0.0 ? p.tx_rx_gap : 2.0 * p.wavelength;
  const double d = s.element_spacing;

  for (int n = 0; n < p.tx_antennas; ++n)
    s.bs_tx_positions.emplace_back(0.0, 0.0, n * d);
  for (int n = 0; n < p.rx_antennas; ++n)
    s.bs_rx_positions.emplace_back(gap, 0.0, n * d);

  const Vec3 user0 = p.user_distance * Vec3(std::cos(p.user_angle), 0.0, std::sin(p.user_angle));
  for (int n = 0; n < p.user_antennas; ++n)
    s.user_positions.push_back(user0 + Vec3(0.0, 0.0, n * d));

  s.ris_rows = p.ris_rows;
  s.ris_cols = p.ris_cols;
  s.ris_row_axis = Vec3::UnitX();
  s.ris_col_axis = p.ris_plane == RisPlane::xz ? Vec3::UnitZ() : Vec3::UnitY();
  const Vec3 origin =
      p.bs_ris_distance * Vec3(std::cos(p.bs_ris_angle), 0.0, std::sin(p.bs_ris_angle));
  for (int r = 0; r < p.ris_rows; ++r)
    for (int c = 0; c < p.ris_cols; ++c)
      s.ris_element_positions.push_back(origin + c * d * s.ris_row_axis + r * d * s.ris_col_axis);

  s.target_range = p.target_range;
  s.target_angle = p.target_angle;
  s.bs_ris_angle = p.bs_ris_angle;
  s.bs_ris_distance = p.bs_ris_distance;

  validate_scene(s);
  return s;
}

Scene without_ris(const Scene &scene) {
  Scene s = scene;
  s.ris_element_positions.clear();
  s.ris_rows = 0;
  s.ris_cols = 0;
  return s;
}

void validate_scene(const Scene &s) {
  if (s.bs_tx_positions.empty() || s.bs_rx_positions.empty())
    throw GeometryError("base station arrays must be nonempty");
  if (!(s.wavelength > 0.0) || !(s.element_spacing > 0.0))
    throw GeometryError("wavelength and element spacing must be positive");
  if (!(s.target_range > 0.0))
    throw GeometryError("target range must be positive");
  if (!(std::abs(s.target_angle) <= kPi / 2 + 1e-12))
    throw GeometryError("target angle must lie in [-pi/2, pi/2]");

  auto check_ula = [&](const std::vector<Vec3> &pts, const char *name) {
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (std::abs((pts[i] - pts[i - 1]).norm() - s.element_spacing) > 1e-9 * s.element_spacing)
        throw GeometryError(std::string(name) + " spacing differs from the element spacing");
  };
  check_ula(s.bs_tx_positions, "transmit array");
  check_ula(s.bs_rx_positions, "receive array");
  check_ula(s.user_positions, "user array");

  if (s.has_ris()) {
    if (!(s.bs_ris_distance > 0.0))
      throw GeometryError("surface distance must be positive");
    if (s.ris_size() != static_cast<std::size_t>(s.ris_rows) * static_cast<std::size_t>(s.ris_cols))
      throw GeometryError("surface element count does not match rows x cols");
    if (std::abs(s.ris_row_axis.norm() - 1.0) > 1e-12 || std::abs(s.ris_col_axis.norm() - 1.0) > 1e-12 ||
        std::abs(s.ris_row_axis.dot(s.ris_col_axis)) > 1e-12)
      throw GeometryError("surface axes must be orthonormal");
    const Vec3 n = s.ris_normal();
    const Vec3 o = s.ris_origin();
    for (const Vec3 &p : s.ris_element_positions)
      if (std::abs((p - o).dot(n)) > 1e-9)
        throw GeometryError("surface elements are not coplanar");
    for (int r = 0; r < s.ris_rows; ++r)
      for (int c = 1; c < s.ris_cols; ++c) {
        const std::size_t i = static_cast<std::size_t>(r * s.ris_cols + c);
        if (std::abs((s.ris_element_positions[i] - s.ris_element_positions[i - 1]).norm() - s.element_spacing) >
            1e-9 * s.element_spacing)
          throw GeometryError("surface spacing differs from the element spacing");
      }
  }
}

RMat pairwise_distances(std::span<const Vec3> tx, std::span<const Vec3> rx) {
  if (tx.empty() || rx.empty())
    throw GeometryError("pairwise_distances: point lists must be nonempty");
  RMat dist(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (std::size_t m = 0; m < rx.size(); ++m)
    for (std::size_t n = 0; n < tx.size(); ++n) {
      const double dmn = (rx[m] - tx[n]).norm();
      if (!(dmn > kCoincidentTol)) {
        std::ostringstream msg;
        msg << "pairwise_distances: rx point " << m << " coincides with tx point " << n;
        throw GeometryError(msg.str());
      }
      dist(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = dmn;
    }
  return dist;
}

RisAngles ris_angles_toward(const Scene &scene, const Vec3 &point) {
  const TargetGeometry g = target_geometry(scene, point);
  RisAngles a;
  a.elevation = std::acos(checked_acos_arg(g.along / g.r2, "elevation"));
  a.azimuth = std::acos(checked_acos_arg(g.along / g.rr, "azimuth"));
  return a;
}

RisAngles ris_angles_of_target(const Scene &scene) {
  return ris_angles_toward(scene, scene.target_position());
}

RisAngles ris_angles_of_target(const Scene &scene, double theta) {
  return ris_angles_toward(scene, scene.target_position_at(theta));
}

std::pair<double, double> ris_element_offsets(const Scene &scene, std::size_t i) {
  if (i >= scene.ris_size())
    throw DimensionError("surface element index out of range");
  const Vec3 off = scene.ris_element_positions[i] - scene.ris_origin();
  return {off.dot(scene.ris_row_axis), off.dot(scene.ris_col_axis)};
}

double ris_phase_offset(const Scene &scene, std::size_t i, const RisAngles &a) {
  const auto [dx, dz] = ris_element_offsets(scene, i);
  return dx * std::sin(a.elevation) * std::cos(a.azimuth) + dz * std::sin(a.azimuth);
}

RisAngles ris_angle_derivatives(const Scene &scene) {
  const double theta = scene.target_angle;
  const TargetGeometry g = target_geometry(scene, scene.target_position_at(theta));
  const Vec3 n = scene.ris_normal();
  const Vec3 ddelta = scene.target_range * Vec3(-std::sin(theta), 0.0, std::cos(theta));
  const Vec3 din_plane = ddelta - ddelta.dot(n) * n;
  const double dalong = ddelta.dot(scene.ris_row_axis);
  const double dr2 = g.delta.dot(ddelta) / g.r2;
  const double drr = g.in_plane.dot(din_plane) / g.rr;

  // d/dt acos(u) = -u' / sqrt(1 - u^2)
  auto dacos = [](double num, double dnum, double den, double dden, const char *what) {
    const double u = checked_acos_arg(num / den, what);
    const double du = (dnum * den - num * dden) / (den * den);
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    if (s < 1e-12)
      throw GeometryError(std::string("surface ") + what +
                          " is at the arccos boundary, its derivative is undefined");
    return -du / s;
  };

  RisAngles d;
  d.elevation = dacos(g.along, dalong, g.r2, dr2, "elevation");
  d.azimuth = dacos(g.along, dalong, g.rr, drr, "azimuth");
  return d;
}

double ris_phase_offset_derivative(const Scene &scene, std::size_t i) {
  const auto [dx, dz] = ris_element_offsets(scene, i);
  if (dx == 0.0 && dz == 0.0)
    return 0.0;
  const RisAngles a = ris_angles_of_target(scene);
  const RisAngles da = ris_angle_derivatives(scene);
  const double se = std::sin(a.elevation), ce = std::cos(a.elevation);
  const double sa = std::sin(a.azimuth), ca = std::cos(a.azimuth);
  return dx * (ce * ca * da.elevation - se * sa * da.azimuth) + dz * ca * da.azimuth;
}

double ula_angle(const Vec3 &from, const Vec3 &to, const Vec3 &axis) {
  const Vec3 dir = to - from;
  const double len = dir.norm();
  if (len < kCoincidentTol)
    throw GeometryError("ula_angle: coincident points");
  return std::asin(std::clamp(dir.dot(axis.normalized()) / len, -1.0, 1.0));
}

} // namespace fdjcas
