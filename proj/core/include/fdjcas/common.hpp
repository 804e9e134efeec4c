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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fdjcas {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or degenerate scene geometry (coincident antennas, arccos out of range, ...).
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Matrix or vector dimensions that do not fit together.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// The Fisher information of the angle is zero, so no finite bound exists.
class UnobservableError : public Error {
public:
  using Error::Error;
};

/// The sensing bound cannot be met with the available transmit power.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string &what, double achieved_crb)
      : Error(what), achieved_crb_(achieved_crb) {}
  double achieved_crb() const noexcept { return achieved_crb_; }

private:
  double achieved_crb_;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace fdjcas
