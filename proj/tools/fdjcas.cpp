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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdjcas/config.hpp"
#include "fdjcas/csv.hpp"
#include "fdjcas/experiments.hpp"
#include "fdjcas/sensing_crb.hpp"

namespace {

using namespace fdjcas;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> schemes;
  std::vector<double> snr;
  int seeds = 0;
  long long seed = -1;
  std::string out;
  int workers = 0;
};

ExperimentConfig resolve(const CommonArgs &a) {
  std::string path = a.config_path.empty() ? default_config_path() : a.config_path;
  ExperimentConfig c = path.empty() ? ExperimentConfig{} : load_config(path);
  if (!a.schemes.empty()) {
    c.schemes.clear();
    for (const auto &s : a.schemes)
      c.schemes.push_back(scheme_from_string(s));
  }
  if (!a.snr.empty())
    c.snr_db = a.snr;
  if (a.seeds > 0)
    c.seeds = a.seeds;
  if (a.seed >= 0)
    c.seed_base = static_cast<std::uint64_t>(a.seed);
  if (!a.out.empty())
    c.out_dir = a.out;
  if (a.workers > 0)
    c.workers = a.workers;
  c.validate();
  return c;
}

// Design for one sensing scheme at one SNR and seed, shared by `crb` and `estimate`.
struct SingleRun {
  Scene scene;
  ChannelSet channels;
  PathCoefficients coeffs;
  CVec phi0;
  JcasOptions options;
};

SingleRun single_run(const ExperimentConfig &c, Scheme scheme, double snr) {
  SingleRun r;
  r.scene = scheme_scene(c, scheme);
  r.channels = build_channel_set(r.scene, c.channels, c.seed_base);
  r.coeffs = PathCoefficients::draw(c.seed_base, c.direct_magnitude, c.ris_magnitude);
  r.phi0 = RisPhase::random(r.channels.ris_size(), c.seed_base).phi;
  r.options = scheme_options(c, scheme, snr);
  return r;
}

int cmd_run(const CommonArgs &a, bool mse_flag_off) {
  ExperimentConfig c = resolve(a);
  if (mse_flag_off)
    c.mse_study = false;
  const auto results = run_schemes(c);
  std::vector<MseRow> mse;
  bool with_mse = false;
  for (const Scheme s : c.schemes)
    with_mse = with_mse || uses_sensing(s);
  with_mse = with_mse && c.mse_study;
  if (with_mse)
    mse = run_mse_study(c);
  emit_outputs(c.out_dir, results, with_mse ? &mse : nullptr);
  for (const auto &r : results) {
    int infeasible = 0;
    for (const auto &row : r.rows)
      infeasible += row.infeasible() ? 1 : 0;
    std::cout << to_string(r.scheme) << ": " << r.rows.size() << " SNR points";
    if (infeasible > 0)
      std::cout << ", " << infeasible << " with infeasible seeds";
    std::cout << "\n";
  }
  std::cout << "wrote " << c.out_dir << "\n";
  return kOk;
}

int cmd_crb(const CommonArgs &a) {
  const ExperimentConfig c = resolve(a);
  const Scheme scheme = c.schemes.empty() ? Scheme::ris_with_sensing : c.schemes.front();
  const double snr = c.snr_db.empty() ? 0.0 : c.snr_db.front();
  const SingleRun r = single_run(c, scheme, snr);

  const SensingContext ctx0 = make_sensing_context(r.scene, r.phi0, r.coeffs, r.channels.radar_noise_var);
  const CMat v0 = initial_precoder(r.channels, r.phi0, r.options.streams, r.options.power_budget);
  std::cout << "scheme=" << to_string(scheme) << "\n";
  std::cout << "snr_db=" << csv::format(snr) << "\n";
  std::cout << "seed=" << c.seed_base << "\n";
  std::cout << "target_angle_rad=" << csv::format(r.scene.target_angle) << "\n";
  std::cout << "threshold_rad2=" << csv::format(c.design.crb_threshold) << "\n";
  std::cout << "crb_initial_rad2=" << csv::format(crb_theta(v0, ctx0.path_matrix_derivative, ctx0.noise_cov)) << "\n";
  try {
    const JcasResult res = jcas_optimize(r.scene, r.channels, r.coeffs, r.phi0, r.options);
    std::cout << "crb_optimized_rad2=" << csv::format(res.trace.back().crb) << "\n";
    std::cout << "feasible=1\n";
  } catch (const InfeasibleError &e) {
    std::cout << "crb_best_rad2=" << csv::format(e.achieved_crb()) << "\n";
    std::cout << "feasible=0\n";
  }
  return kOk;
}

int cmd_estimate(const CommonArgs &a, const std::string &spectrum_path) {
  const ExperimentConfig c = resolve(a);
  Scheme scheme = Scheme::ris_with_sensing;
  for (const Scheme s : c.schemes)
    if (uses_sensing(s)) {
      scheme = s;
      break;
    }
  const double snr = c.snr_db.empty() ? 0.0 : c.snr_db.front();
  const SingleRun r = single_run(c, scheme, snr);
  const JcasResult res = jcas_optimize(r.scene, r.channels, r.coeffs, r.phi0, r.options);
  const SnapshotBatch b = simulate_snapshots(r.scene, r.channels, res.precoder, res.phi, r.coeffs,
                                             c.sensing.snapshots, c.sensing.seed);
  const MusicResult m = music_estimate(b, r.scene, c.sensing.music);
  const SensingContext ctx = make_sensing_context(r.scene, res.phi, r.coeffs, r.channels.radar_noise_var);
  const double crb = crb_theta(res.precoder, ctx.path_matrix_derivative, ctx.noise_cov, b.snapshots);

  std::cout << "scheme=" << to_string(scheme) << "\n";
  std::cout << "snr_db=" << csv::format(snr) << "\n";
  std::cout << "theta_true_rad=" << csv::format(b.true_theta) << "\n";
  std::cout << "theta_hat_rad=" << csv::format(m.theta_hat) << "\n";
  std::cout << "error_rad=" << csv::format(m.theta_hat - b.true_theta) << "\n";
  std::cout << "crb_rad2=" << csv::format(crb) << "\n";
  if (!spectrum_path.empty()) {
    std::ofstream out(spectrum_path, std::ios::binary);
    if (!out)
      throw Error("cannot open '" + spectrum_path + "' for writing");
    csv::write_row(out, {"theta_rad", "pseudo_spectrum"});
    for (Eigen::Index g = 0; g < m.grid.size(); ++g)
      csv::write_row(out, {csv::format(m.grid(g)), csv::format(m.pseudo_spectrum(g))});
    if (!out.flush())
      throw Error("failed writing '" + spectrum_path + "'");
  }
  return kOk;
}

void add_common(CLI::App *cmd, CommonArgs &a) {
  cmd->add_option("config", a.config_path, "JSON config file (default: $FDJCAS_CONFIG, else built-in defaults)");
  cmd->add_option("--scheme", a.schemes, "Scheme(s) to run; overrides sweep.schemes");
  cmd->add_option("--snr", a.snr, "SNR grid in dB; overrides sweep.snr_db")->delimiter(',');
  cmd->add_option("--seed", a.seed, "First seed; overrides sweep.seed_base")->check(CLI::NonNegativeNumber);
  cmd->add_option("--workers", a.workers, "Worker threads; overrides workers")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Full-duplex JCAS design with a reflecting surface"};
  app.require_subcommand(1);

  CommonArgs run_args, crb_args, est_args;
  bool no_mse = false;
  std::string spectrum_path;

  auto *run = app.add_subcommand("run", "Sweep the schemes over the SNR grid and write CSV results");
  add_common(run, run_args);
  run->add_option("--seeds", run_args.seeds, "Seed count; overrides sweep.seeds")->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Output directory; overrides out_dir");
  run->add_flag("--no-mse", no_mse, "Skip the MUSIC MSE study");

  auto *crb = app.add_subcommand("crb", "Print the angle bound of the initial and optimized designs");
  add_common(crb, crb_args);

  auto *est = app.add_subcommand("estimate", "Design once and run a single MUSIC estimate");
  add_common(est, est_args);
  est->add_option("--spectrum", spectrum_path, "Write the pseudo-spectrum CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run)
      return cmd_run(run_args, no_mse);
    if (*crb)
      return cmd_crb(crb_args);
    return cmd_estimate(est_args, spectrum_path);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
