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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fdjcas/config.hpp"

namespace fdjcas {

using nlohmann::json;

std::string to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::ris_with_sensing:
    return "ris_with_sensing";
  case Scheme::no_ris_with_sensing:
    return "no_ris_with_sensing";
  case Scheme::ris_comm_only:
    return "ris_comm_only";
  case Scheme::no_ris_comm_only:
    return "no_ris_comm_only";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  for (const Scheme s : all_schemes())
    if (to_string(s) == name)
      return s;
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (ris_with_sensing, no_ris_with_sensing, ris_comm_only, no_ris_comm_only)");
}

const std::vector<Scheme> &all_schemes() {
  static const std::vector<Scheme> s{Scheme::ris_with_sensing, Scheme::no_ris_with_sensing, Scheme::ris_comm_only,
                                     Scheme::no_ris_comm_only};
  return s;
}

namespace {

// Reads keys of one JSON object into fields and rejects keys nobody asked for.
class Section {
public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  template <class T> void get(const char *key, T &out) {
    seen_.insert(key);
    if (!j_.contains(key))
      return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception &) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  void degrees(const char *key, double &radians) {
    double deg = rad2deg(radians);
    get(key, deg);
    radians = deg2rad(deg);
  }

  const json *child(const char *key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  // Call after every get(); rejects keys nobody asked for.
  void done() const {
    for (const auto &item : j_.items())
      if (!seen_.count(item.key()))
        throw ConfigError(path_ + "." + item.key() + ": unknown key");
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_scene(const json &j, SceneParams &p) {
  Section s(j, "scene");
  s.get("tx_antennas", p.tx_antennas);
  s.get("rx_antennas", p.rx_antennas);
  s.get("user_antennas", p.user_antennas);
  s.get("ris_rows", p.ris_rows);
  s.get("ris_cols", p.ris_cols);
  s.get("wavelength_m", p.wavelength);
  s.get("element_spacing_m", p.element_spacing);
  s.get("tx_rx_gap_m", p.tx_rx_gap);
  s.degrees("ris_angle_deg", p.bs_ris_angle);
  s.get("ris_distance_m", p.bs_ris_distance);
  s.get("user_distance_m", p.user_distance);
  s.degrees("user_angle_deg", p.user_angle);
  s.get("target_range_m", p.target_range);
  s.degrees("target_angle_deg", p.target_angle);
  std::string plane = p.ris_plane == RisPlane::xz ? "xz" : "xy";
  s.get("ris_plane", plane);
  if (plane == "xz")
    p.ris_plane = RisPlane::xz;
  else if (plane == "xy")
    p.ris_plane = RisPlane::xy;
  else
    throw ConfigError("scene.ris_plane: expected \"xz\" or \"xy\"");
  s.done();
}

void read_channels(const json &j, ExperimentConfig &c) {
  Section s(j, "channels");
  s.get("nlos_si_power", c.channels.nlos_si_power);
  s.get("user_noise_var", c.channels.user_noise_var);
  s.get("radar_noise_var", c.channels.radar_noise_var);
  s.get("direct_path_magnitude", c.direct_magnitude);
  s.get("ris_path_magnitude", c.ris_magnitude);
  s.done();
}

void read_design(const json &j, JcasOptions &d) {
  Section s(j, "design");
  s.get("streams", d.streams);
  s.get("user_weight", d.user_weight);
  s.get("crb_threshold", d.crb_threshold);
  s.get("crb_snapshots", d.crb_snapshots);
  s.get("ris_crb_guard", d.ris_crb_guard);
  s.get("accelerate", d.accelerate);
  s.get("extrapolation_backtracks", d.extrapolation_backtracks);
  s.get("outer_tol", d.outer_tol);
  s.get("max_outer", d.max_outer);
  s.get("ris_tol", d.ris_tol);
  s.get("ris_max_iter", d.ris_max_iter);
  s.get("power_tol", d.precoder.power_tol);
  s.get("fisher_tol", d.precoder.fisher_tol);
  s.get("max_bisection", d.precoder.max_bisection);
  s.done();
}

void read_sensing(const json &j, SensingConfig &c) {
  Section s(j, "sensing");
  s.get("snapshots", c.snapshots.snapshots);
  std::string mode = to_string(c.snapshots.si_mode);
  s.get("si_mode", mode);
  c.snapshots.si_mode = si_mode_from_string(mode);
  s.get("residual_si_factor", c.snapshots.residual_si_factor);
  s.get("subspace_dim", c.music.subspace_dim);
  s.get("grid_resolution_rad", c.music.grid_resolution);
  s.get("trials", c.trials);
  s.get("trials_per_seed", c.trials_per_seed);
  s.get("seed", c.seed);
  s.done();
}

void read_sweep(const json &j, ExperimentConfig &c) {
  Section s(j, "sweep");
  s.get("snr_db", c.snr_db);
  std::vector<std::string> names;
  for (const Scheme sc : c.schemes)
    names.push_back(to_string(sc));
  s.get("schemes", names);
  c.schemes.clear();
  for (const auto &n : names)
    c.schemes.push_back(scheme_from_string(n));
  s.get("seeds", c.seeds);
  s.get("seed_base", c.seed_base);
  s.get("mse_study", c.mse_study);
  s.done();
}

json scene_json(const SceneParams &p) {
  return {{"tx_antennas", p.tx_antennas},
          {"rx_antennas", p.rx_antennas},
          {"user_antennas", p.user_antennas},
          {"ris_rows", p.ris_rows},
          {"ris_cols", p.ris_cols},
          {"wavelength_m", p.wavelength},
          {"element_spacing_m", p.element_spacing},
          {"tx_rx_gap_m", p.tx_rx_gap},
          {"ris_angle_deg", rad2deg(p.bs_ris_angle)},
          {"ris_distance_m", p.bs_ris_distance},
          {"user_distance_m", p.user_distance},
          {"user_angle_deg", rad2deg(p.user_angle)},
          {"target_range_m", p.target_range},
          {"target_angle_deg", rad2deg(p.target_angle)},
          {"ris_plane", p.ris_plane == RisPlane::xz ? "xz" : "xy"}};
}

} // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string &m) { throw ConfigError(m); };
  if (scene.tx_antennas < 1 || scene.rx_antennas < 1 || scene.user_antennas < 1)
    fail("scene: antenna counts must be positive");
  if (scene.ris_rows < 0 || scene.ris_cols < 0 || (scene.ris_rows == 0) != (scene.ris_cols == 0))
    fail("scene: surface rows and columns must both be positive or both zero");
  if (!(scene.wavelength > 0.0))
    fail("scene.wavelength_m must be positive");
  if (design.streams < 1 || design.streams > scene.tx_antennas || design.streams > scene.user_antennas)
    fail("design.streams must be between 1 and min(tx_antennas, user_antennas)");
  if (!(design.crb_threshold > 0.0))
    fail("design.crb_threshold must be positive");
  if (!(design.crb_snapshots >= 1.0))
    fail("design.crb_snapshots must be at least 1");
  if (!(design.outer_tol > 0.0) || !(design.ris_tol > 0.0))
    fail("design: tolerances must be positive");
  if (design.max_outer < 1 || design.ris_max_iter < 1)
    fail("design: iteration limits must be positive");
  if (!(channels.user_noise_var > 0.0) || !(channels.radar_noise_var > 0.0))
    fail("channels: noise variances must be positive");
  if (!(channels.nlos_si_power >= 0.0))
    fail("channels.nlos_si_power must be nonnegative");
  if (!(direct_magnitude > 0.0 && direct_magnitude <= 1.0) || !(ris_magnitude > 0.0 && ris_magnitude <= 1.0))
    fail("channels: path magnitudes must lie in (0, 1]");
  if (!std::is_sorted(snr_db.begin(), snr_db.end()))
    fail("sweep.snr_db must be sorted");
  if (seeds < 1)
    fail("sweep.seeds must be positive");
  if (sensing.trials < 1 || sensing.trials_per_seed < 0)
    fail("sensing: trials must be positive and trials_per_seed nonnegative");
  if (sensing.snapshots.snapshots < scene.rx_antennas)
    fail("sensing.snapshots must be at least rx_antennas");
  if (sensing.music.subspace_dim < 1 || sensing.music.subspace_dim >= scene.rx_antennas)
    fail("sensing.subspace_dim must be in [1, rx_antennas)");
  if (!(sensing.music.grid_resolution > 0.0))
    fail("sensing.grid_resolution_rad must be positive");
  if (workers < 1)
    fail("workers must be positive");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "config");
  if (const json *s = root.child("scene"))
    read_scene(*s, c.scene);
  if (const json *s = root.child("channels"))
    read_channels(*s, c);
  if (const json *s = root.child("design"))
    read_design(*s, c.design);
  if (const json *s = root.child("sweep"))
    read_sweep(*s, c);
  if (const json *s = root.child("sensing"))
    read_sensing(*s, c.sensing);
  root.get("out_dir", c.out_dir);
  root.get("workers", c.workers);
  root.done();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig &c) {
  std::vector<std::string> schemes;
  for (const Scheme s : c.schemes)
    schemes.push_back(to_string(s));
  const json j = {
      {"scene", scene_json(c.scene)},
      {"channels",
       {{"nlos_si_power", c.channels.nlos_si_power},
        {"user_noise_var", c.channels.user_noise_var},
        {"radar_noise_var", c.channels.radar_noise_var},
        {"direct_path_magnitude", c.direct_magnitude},
        {"ris_path_magnitude", c.ris_magnitude}}},
      {"design",
       {{"streams", c.design.streams},
        {"user_weight", c.design.user_weight},
        {"crb_threshold", c.design.crb_threshold},
        {"crb_snapshots", c.design.crb_snapshots},
        {"ris_crb_guard", c.design.ris_crb_guard},
        {"accelerate", c.design.accelerate},
        {"extrapolation_backtracks", c.design.extrapolation_backtracks},
        {"outer_tol", c.design.outer_tol},
        {"max_outer", c.design.max_outer},
        {"ris_tol", c.design.ris_tol},
        {"ris_max_iter", c.design.ris_max_iter},
        {"power_tol", c.design.precoder.power_tol},
        {"fisher_tol", c.design.precoder.fisher_tol},
        {"max_bisection", c.design.precoder.max_bisection}}},
      {"sweep",
       {{"snr_db", c.snr_db},
        {"schemes", schemes},
        {"seeds", c.seeds},
        {"seed_base", c.seed_base},
        {"mse_study", c.mse_study}}},
      {"sensing",
       {{"snapshots", c.sensing.snapshots.snapshots},
        {"si_mode", to_string(c.sensing.snapshots.si_mode)},
        {"residual_si_factor", c.sensing.snapshots.residual_si_factor},
        {"subspace_dim", c.sensing.music.subspace_dim},
        {"grid_resolution_rad", c.sensing.music.grid_resolution},
        {"trials", c.sensing.trials},
        {"trials_per_seed", c.sensing.trials_per_seed},
        {"seed", c.sensing.seed}}},
      {"out_dir", c.out_dir},
      {"workers", c.workers}};
  return j.dump(2);
}

std::string default_config_path() {
  const char *v = std::getenv("FDJCAS_CONFIG");
  return v ? std::string(v) : std::string();
}

} // namespace fdjcas
