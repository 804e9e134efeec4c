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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fdjcas/config.hpp"

using namespace fdjcas;

TEST(Config, EmptyDocumentKeepsDefaults) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.scene.tx_antennas, 15);
  EXPECT_EQ(c.scene.rx_antennas, 10);
  EXPECT_EQ(c.scene.user_antennas, 5);
  EXPECT_EQ(c.scene.ris_rows * c.scene.ris_cols, 100);
  EXPECT_NEAR(c.scene.target_angle, deg2rad(20.0), 1e-15);
  EXPECT_EQ(c.snr_db, (std::vector<double>{0, 5, 10, 15, 20, 25, 30}));
  EXPECT_EQ(c.schemes.size(), 4u);
  EXPECT_EQ(c.seeds, 50);
  EXPECT_EQ(c.design.crb_threshold, 0.01);
  EXPECT_EQ(c.workers, 1);
}

TEST(Config, ReadsEverySection) {
  const ExperimentConfig c = parse_config(R"({
    "scene": {"tx_antennas": 8, "target_angle_deg": 10, "ris_plane": "xy"},
    "channels": {"nlos_si_power": 0.05, "radar_noise_var": 2.0, "ris_path_magnitude": 0.25},
    "design": {"crb_threshold": 0.02, "accelerate": false, "max_outer": 40},
    "sweep": {"snr_db": [0, 10], "schemes": ["ris_comm_only"], "seeds": 3, "seed_base": 7},
    "sensing": {"snapshots": 32, "si_mode": "full", "trials": 10},
    "out_dir": "elsewhere",
    "workers": 2
  })");
  EXPECT_EQ(c.scene.tx_antennas, 8);
  EXPECT_NEAR(c.scene.target_angle, deg2rad(10.0), 1e-15);
  EXPECT_EQ(c.scene.ris_plane, RisPlane::xy);
  EXPECT_EQ(c.channels.nlos_si_power, 0.05);
  EXPECT_EQ(c.channels.radar_noise_var, 2.0);
  EXPECT_EQ(c.ris_magnitude, 0.25);
  EXPECT_EQ(c.design.crb_threshold, 0.02);
  EXPECT_FALSE(c.design.accelerate);
  EXPECT_EQ(c.design.max_outer, 40);
  EXPECT_EQ(c.snr_db, (std::vector<double>{0, 10}));
  EXPECT_EQ(c.schemes, std::vector<Scheme>{Scheme::ris_comm_only});
  EXPECT_EQ(c.seeds, 3);
  EXPECT_EQ(c.seed_base, 7u);
  EXPECT_EQ(c.sensing.snapshots.snapshots, 32);
  EXPECT_EQ(c.sensing.snapshots.si_mode, SiMode::full);
  EXPECT_EQ(c.sensing.trials, 10);
  EXPECT_EQ(c.out_dir, "elsewhere");
  EXPECT_EQ(c.workers, 2);
}

TEST(Config, UnknownKeysAreErrors) {
  EXPECT_THROW(parse_config(R"({"scene": {"tx_antenas": 8}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"extra": 1})"), ConfigError);
}

TEST(Config, WrongTypesAreErrors) {
  EXPECT_THROW(parse_config(R"({"scene": {"tx_antennas": "eight"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scene": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"snr_db": 10}})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, InvariantsAreChecked) {
  EXPECT_THROW(parse_config(R"({"sweep": {"snr_db": [10, 0]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"schemes": ["ris_sometimes"]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"seeds": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"design": {"crb_threshold": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"design": {"streams": 6}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"channels": {"radar_noise_var": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"channels": {"direct_path_magnitude": 1.5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scene": {"ris_rows": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scene": {"ris_plane": "yz"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sensing": {"snapshots": 4}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sensing": {"si_mode": "partial"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"workers": 0})"), ConfigError);
  EXPECT_NO_THROW(parse_config(R"({"scene": {"ris_rows": 0, "ris_cols": 0}})"));
}

TEST(Config, SchemeNamesRoundTrip) {
  for (Scheme s : all_schemes())
    EXPECT_EQ(scheme_from_string(to_string(s)), s);
  EXPECT_TRUE(uses_ris(Scheme::ris_comm_only));
  EXPECT_FALSE(uses_ris(Scheme::no_ris_with_sensing));
  EXPECT_TRUE(uses_sensing(Scheme::no_ris_with_sensing));
  EXPECT_FALSE(uses_sensing(Scheme::ris_comm_only));
}

TEST(Config, DumpParsesBackToSameConfig) {
  ExperimentConfig c = parse_config(R"({"scene": {"target_angle_deg": 12.5}, "sweep": {"seeds": 9}})");
  c.design.crb_threshold = 0.0123;
  c.sensing.snapshots.residual_si_factor = 0.2;
  const ExperimentConfig back = parse_config(dump_config(c));
  EXPECT_EQ(dump_config(back), dump_config(c));
  EXPECT_NEAR(back.scene.target_angle, c.scene.target_angle, 1e-15);
  EXPECT_EQ(back.seeds, 9);
  EXPECT_EQ(back.design.crb_threshold, 0.0123);
}

TEST(Config, LoadsFileAndReadsEnvironment) {
  const auto path = std::filesystem::temp_directory_path() / "fdjcas_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"sweep": {"seeds": 4}})";
  }
  EXPECT_EQ(load_config(path.string()).seeds, 4);
  EXPECT_THROW(load_config((path.parent_path() / "does_not_exist.json").string()), ConfigError);
  std::filesystem::remove(path);

  ::setenv("FDJCAS_CONFIG", "/some/where.json", 1);
  EXPECT_EQ(default_config_path(), "/some/where.json");
  ::unsetenv("FDJCAS_CONFIG");
  EXPECT_EQ(default_config_path(), "");
}
