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

#include "fdjcas/common.hpp"

namespace fdjcas {

/// Tr(V^H Abar^H Sigma^{-1} Abar V), the single-snapshot Fisher information of the angle
/// up to the factor 2.
double fisher_trace(const CMat &precoder, const CMat &path_derivative, const CMat &noise_cov);

/// Hermitian form Q = Abar^H Sigma^{-1} Abar, so that fisher_trace = Tr(V^H Q V).
CMat fisher_form(const CMat &path_derivative, const CMat &noise_cov);

/// Angle bound 1 / (2 L Tr(V^H Abar^H Sigma^{-1} Abar V)) for L coherent snapshots.
/// Throws UnobservableError when the Fisher trace is zero.
double crb_theta(const CMat &precoder, const CMat &path_derivative, const CMat &noise_cov,
                 double snapshots = 1.0);

/// True when the bound meets the threshold (inclusive).
bool crb_constraint_ok(double crb, double threshold);

struct CrbReport {
  double crb_value = 0.0;
  double fisher_trace = 0.0;
  double threshold = 0.0;
  bool satisfied = false;
};

CrbReport evaluate_crb(const CMat &precoder, const CMat &path_derivative, const CMat &noise_cov,
                       double threshold, double snapshots = 1.0);

} // namespace fdjcas
