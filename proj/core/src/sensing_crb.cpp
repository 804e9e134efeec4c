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

#include "fdjcas/sensing_crb.hpp"

#include <cmath>
#include <limits>

namespace fdjcas {

namespace {

void check_inputs(const CMat &v, const CMat &abar, const CMat &sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != abar.rows())
    throw DimensionError("noise covariance must be square and match the rows of the path derivative");
  if (abar.cols() != v.rows())
    throw DimensionError("path derivative columns must match precoder rows");
}

} // namespace

CMat fisher_form(const CMat &abar, const CMat &sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != abar.rows())
    throw DimensionError("noise covariance must be square and match the rows of the path derivative");
  Eigen::LLT<CMat> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw Error("noise covariance is not positive definite");
  const CMat whitened = llt.matrixL().solve(abar);
  CMat q = whitened.adjoint() * whitened;
  return 0.5 * (q + q.adjoint());
}

double fisher_trace(const CMat &v, const CMat &abar, const CMat &sigma) {
  check_inputs(v, abar, sigma);
  Eigen::LLT<CMat> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw Error("noise covariance is not positive definite");
  // Tr(V^H Abar^H Sigma^{-1} Abar V) = ||L^{-1} Abar V||_F^2
  const CMat whitened = llt.matrixL().solve(abar * v);
  return whitened.squaredNorm();
}

double crb_theta(const CMat &v, const CMat &abar, const CMat &sigma, double snapshots) {
  if (!(snapshots >= 1.0))
    throw Error("crb_theta: snapshot count must be at least 1");
  const double fisher = fisher_trace(v, abar, sigma);
  if (!(fisher > std::numeric_limits<double>::min()) || !std::isfinite(fisher))
    throw UnobservableError("angle is unobservable: zero Fisher information for this precoder");
  return 0.5 / (snapshots * fisher);
}

bool crb_constraint_ok(double crb, double threshold) { return crb <= threshold; }

CrbReport evaluate_crb(const CMat &v, const CMat &abar, const CMat &sigma, double threshold, double snapshots) {
  CrbReport r;
  r.threshold = threshold;
  r.fisher_trace = fisher_trace(v, abar, sigma);
  r.crb_value = crb_theta(v, abar, sigma, snapshots);
  r.satisfied = crb_constraint_ok(r.crb_value, threshold);
  return r;
}

} // namespace fdjcas
