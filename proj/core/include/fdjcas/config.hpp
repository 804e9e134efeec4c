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
#include <string>
#include <string_view>
#include <vector>

#include "fdjcas/channels.hpp"
#include "fdjcas/estimation.hpp"
#include "fdjcas/geometry.hpp"
#include "fdjcas/optimizer.hpp"

namespace fdjcas {

enum class Scheme { ris_with_sensing, no_ris_with_sensing, ris_comm_only, no_ris_comm_only };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);
const std::vector<Scheme> &all_schemes();

inline bool uses_ris(Scheme s) { return s == Scheme::ris_with_sensing || s == Scheme::ris_comm_only; }
inline bool uses_sensing(Scheme s) { return s == Scheme::ris_with_sensing || s == Scheme::no_ris_with_sensing; }

struct SensingConfig {
  SnapshotOptions snapshots;
  MusicOptions music;
  int trials = 200;          // batches per SNR point in the MSE study
  int trials_per_seed = 4;   // batches per cell in the scheme sweep
  std::uint64_t seed = 1000; // root seed of the MSE study
};

struct ExperimentConfig {
  SceneParams scene;
  ChannelOptions channels;
  double direct_magnitude = 1.0;
  double ris_magnitude = 0.5;
  JcasOptions design;
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  std::vector<Scheme> schemes = all_schemes();
  int seeds = 50;
  std::uint64_t seed_base = 1;
  SensingConfig sensing;
  bool mse_study = true;
  std::string out_dir = "results";
  int workers = 1;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Parses a JSON document. Unknown keys are errors, missing keys keep defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string &path);

/// Effective configuration as JSON (angles in degrees, as in the file format).
std::string dump_config(const ExperimentConfig &config);

/// Value of FDJCAS_CONFIG, or empty when unset.
std::string default_config_path();

} // namespace fdjcas
