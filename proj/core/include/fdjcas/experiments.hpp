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
#include <optional>
#include <string>
#include <vector>

#include "fdjcas/config.hpp"
#include "fdjcas/estimation.hpp"

namespace fdjcas {

/// Outcome of one (scheme, SNR, seed) cell.
struct CellResult {
  bool infeasible = false;
  bool converged = false;
  int iterations = 0;
  double rate = 0.0;       // bit/s/Hz
  double si_power = 0.0;   // Tr(E_SI) at the final design
  double si_initial = 0.0; // Tr(E_SI) at the initial design
  double crb = 0.0;        // single-snapshot angle bound at the final design
  std::optional<double> mse; // sensing schemes only
};

/// One SNR point of a scheme, averaged over the feasible seeds.
struct SchemeRow {
  double snr_db = 0.0;
  std::optional<double> rate;
  std::optional<double> si_db; // mean of 10 log10 Tr(E_SI)
  std::optional<double> crb;
  std::optional<double> mse;
  int seeds = 0;
  int infeasible_seeds = 0;
  int converged_seeds = 0;

  bool infeasible() const { return infeasible_seeds > 0; }
};

struct SchemeResult {
  Scheme scheme = Scheme::ris_with_sensing;
  std::vector<SchemeRow> rows;
};

/// Transmit power for an SNR in dB: p = 10^(snr/10) * user noise variance.
double power_for_snr(const ExperimentConfig &config, double snr_db);

/// Design options for a scheme at one SNR. Communications-only schemes drop
/// the self-interference term and the sensing bound.
JcasOptions scheme_options(const ExperimentConfig &config, Scheme scheme, double snr_db);

/// Scene of a scheme: schemes without the surface remove it.
Scene scheme_scene(const ExperimentConfig &config, Scheme scheme);

/// Runs one cell. Channels, path coefficients and initial phases all derive from `seed`.
CellResult run_cell(const ExperimentConfig &config, Scheme scheme, double snr_db, std::uint64_t seed);

/// Every configured scheme over the SNR grid and seeds [seed_base, seed_base + seeds).
/// Cells run on a bounded pool of config.workers threads; results are keyed by cell.
std::vector<SchemeResult> run_schemes(const ExperimentConfig &config);
SchemeResult run_scheme(const ExperimentConfig &config, Scheme scheme);

/// Aggregates per-seed cells of one SNR point.
SchemeRow aggregate(double snr_db, const std::vector<CellResult> &cells);

/// The MSE study for the first sensing scheme in the config on seed_base.
std::vector<MseRow> run_mse_study(const ExperimentConfig &config);

/// CSV with columns snr_db,rate_bps_hz,si_db,crb_rad2,mse_rad2,seeds,infeasible_seeds,converged_seeds.
void write_scheme_csv(std::ostream &out, const SchemeResult &result);

/// Long-format CSV with columns scheme,snr_db,metric,value.
void write_combined_csv(std::ostream &out, const std::vector<SchemeResult> &results);

/// Writes <dir>/<scheme>.csv per scheme, <dir>/combined.csv and, when given,
/// <dir>/mse.csv. Creates the directory. Throws Error when a file cannot be written.
void emit_outputs(const std::string &dir, const std::vector<SchemeResult> &results,
                  const std::vector<MseRow> *mse = nullptr);

} // namespace fdjcas
