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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fdjcas/channels.hpp"
#include "fdjcas/csv.hpp"
#include "fdjcas/experiments.hpp"
#include "fdjcas/parallel.hpp"
#include "fdjcas/sensing_crb.hpp"

namespace fdjcas {

double power_for_snr(const ExperimentConfig &config, double snr_db) {
  return std::pow(10.0, snr_db / 10.0) * config.channels.user_noise_var;
}

JcasOptions scheme_options(const ExperimentConfig &config, Scheme scheme, double snr_db) {
  JcasOptions o = config.design;
  o.power_budget = power_for_snr(config, snr_db);
  if (!uses_sensing(scheme)) {
    o.include_si = false;
    o.crb_constraint = false;
  }
  return o;
}

Scene scheme_scene(const ExperimentConfig &config, Scheme scheme) {
  const Scene s = make_scene(config.scene);
  return uses_ris(scheme) ? s : without_ris(s);
}

namespace {

// Fixed per-scheme inputs, built once and shared read-only by every cell.
struct SchemeSetup {
  Scene scene;
  Scheme scheme;
};

CellResult run_cell_in(const ExperimentConfig &config, const SchemeSetup &setup, double snr_db,
                       std::uint64_t seed, std::uint64_t batch_seed) {
  const Scene &scene = setup.scene;
  const ChannelSet ch = build_channel_set(scene, config.channels, seed);
  const PathCoefficients coeffs = PathCoefficients::draw(seed, config.direct_magnitude, config.ris_magnitude);
  const CVec phi0 = RisPhase::random(ch.ris_size(), seed).phi;
  const JcasOptions opt = scheme_options(config, setup.scheme, snr_db);

  CellResult cell;
  JcasResult res;
  try {
    res = jcas_optimize(scene, ch, coeffs, phi0, opt);
  } catch (const InfeasibleError &) {
    cell.infeasible = true;
    return cell;
  }
  cell.converged = res.converged;
  cell.iterations = res.iterations;
  cell.rate = res.trace.back().rate;
  cell.si_power = res.trace.back().si_power;
  cell.si_initial = res.trace.front().si_power;
  cell.crb = res.trace.back().crb;

  if (uses_sensing(setup.scheme) && config.sensing.trials_per_seed > 0) {
    double sum = 0.0;
    for (int t = 0; t < config.sensing.trials_per_seed; ++t) {
      const SnapshotBatch b =
          simulate_snapshots(scene, ch, res.precoder, res.phi, coeffs, config.sensing.snapshots, batch_seed + t);
      const double e = music_estimate(b, scene, config.sensing.music).theta_hat - b.true_theta;
      sum += e * e;
    }
    cell.mse = sum / config.sensing.trials_per_seed;
  }
  return cell;
}

// Snapshot seeds of a sweep cell: disjoint blocks of trials_per_seed per design seed.
std::uint64_t cell_batch_seed(const ExperimentConfig &config, std::uint64_t seed) {
  return config.sensing.seed + seed * static_cast<std::uint64_t>(config.sensing.trials_per_seed);
}

} // namespace

CellResult run_cell(const ExperimentConfig &config, Scheme scheme, double snr_db, std::uint64_t seed) {
  const SchemeSetup setup{scheme_scene(config, scheme), scheme};
  return run_cell_in(config, setup, snr_db, seed, cell_batch_seed(config, seed));
}

SchemeRow aggregate(double snr_db, const std::vector<CellResult> &cells) {
  SchemeRow row;
  row.snr_db = snr_db;
  row.seeds = static_cast<int>(cells.size());
  double rate = 0.0, si_db = 0.0, crb = 0.0, mse = 0.0;
  int feasible = 0, with_mse = 0;
  for (const auto &c : cells) {
    if (c.infeasible) {
      ++row.infeasible_seeds;
      continue;
    }
    ++feasible;
    row.converged_seeds += c.converged ? 1 : 0;
    rate += c.rate;
    si_db += 10.0 * std::log10(c.si_power);
    crb += c.crb;
    if (c.mse) {
      mse += *c.mse;
      ++with_mse;
    }
  }
  if (feasible > 0) {
    row.rate = rate / feasible;
    row.si_db = si_db / feasible;
    row.crb = crb / feasible;
  }
  if (with_mse > 0)
    row.mse = mse / with_mse;
  return row;
}

std::vector<SchemeResult> run_schemes(const ExperimentConfig &config) {
  config.validate();
  std::vector<SchemeSetup> setups;
  for (const Scheme s : config.schemes)
    setups.push_back({scheme_scene(config, s), s});

  const std::size_t n_snr = config.snr_db.size();
  const auto n_seed = static_cast<std::size_t>(config.seeds);
  const std::size_t per_scheme = n_snr * n_seed;
  std::vector<CellResult> cells(setups.size() * per_scheme);
  parallel_for(cells.size(), config.workers, [&](std::size_t i) {
    const std::size_t k = i / per_scheme;
    const std::size_t j = (i % per_scheme) / n_seed;
    const std::uint64_t seed = config.seed_base + i % n_seed;
    cells[i] = run_cell_in(config, setups[k], config.snr_db[j], seed, cell_batch_seed(config, seed));
  });

  std::vector<SchemeResult> out;
  for (std::size_t k = 0; k < setups.size(); ++k) {
    SchemeResult r;
    r.scheme = setups[k].scheme;
    for (std::size_t j = 0; j < n_snr; ++j) {
      const auto first = cells.begin() + static_cast<std::ptrdiff_t>(k * per_scheme + j * n_seed);
      r.rows.push_back(aggregate(config.snr_db[j], std::vector<CellResult>(first, first + n_seed)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

SchemeResult run_scheme(const ExperimentConfig &config, Scheme scheme) {
  ExperimentConfig c = config;
  c.schemes = {scheme};
  return run_schemes(c).front();
}

std::vector<MseRow> run_mse_study(const ExperimentConfig &config) {
  Scheme scheme = Scheme::ris_with_sensing;
  for (const Scheme s : config.schemes)
    if (uses_sensing(s)) {
      scheme = s;
      break;
    }
  const Scene scene = scheme_scene(config, scheme);
  const ChannelSet ch = build_channel_set(scene, config.channels, config.seed_base);
  const PathCoefficients coeffs = PathCoefficients::draw(config.seed_base, config.direct_magnitude, config.ris_magnitude);
  const CVec phi0 = RisPhase::random(ch.ris_size(), config.seed_base).phi;

  MseOptions o;
  o.snr_db = config.snr_db;
  o.trials = config.sensing.trials;
  o.seed = config.sensing.seed;
  o.snapshots = config.sensing.snapshots;
  o.music = config.sensing.music;
  o.design = scheme_options(config, scheme, 0.0);
  o.workers = config.workers;
  return monte_carlo_mse(scene, ch, coeffs, phi0, o);
}

void write_scheme_csv(std::ostream &out, const SchemeResult &result) {
  csv::write_row(out, {"snr_db", "rate_bps_hz", "si_db", "crb_rad2", "mse_rad2", "seeds", "infeasible_seeds",
                       "converged_seeds"});
  for (const auto &r : result.rows)
    csv::write_row(out, {csv::format(r.snr_db), csv::format(r.rate), csv::format(r.si_db), csv::format(r.crb),
                         csv::format(r.mse), std::to_string(r.seeds), std::to_string(r.infeasible_seeds),
                         std::to_string(r.converged_seeds)});
}

void write_combined_csv(std::ostream &out, const std::vector<SchemeResult> &results) {
  csv::write_row(out, {"scheme", "snr_db", "metric", "value"});
  for (const auto &res : results) {
    const std::string name = to_string(res.scheme);
    for (const auto &r : res.rows) {
      const std::string snr = csv::format(r.snr_db);
      csv::write_row(out, {name, snr, "rate_bps_hz", csv::format(r.rate)});
      csv::write_row(out, {name, snr, "si_db", csv::format(r.si_db)});
      csv::write_row(out, {name, snr, "crb_rad2", csv::format(r.crb)});
      csv::write_row(out, {name, snr, "mse_rad2", csv::format(r.mse)});
      csv::write_row(out, {name, snr, "infeasible_seeds", std::to_string(r.infeasible_seeds)});
    }
  }
}

namespace {

template <class Writer> void write_file(const std::filesystem::path &path, Writer &&writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out)
    throw Error("failed writing '" + path.string() + "'");
}

} // namespace

void emit_outputs(const std::string &dir, const std::vector<SchemeResult> &results, const std::vector<MseRow> *mse) {
  const std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec)
    throw Error("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto &r : results)
    write_file(root / (to_string(r.scheme) + ".csv"), [&](std::ostream &o) { write_scheme_csv(o, r); });
  write_file(root / "combined.csv", [&](std::ostream &o) { write_combined_csv(o, results); });
  if (mse)
    write_file(root / "mse.csv", [&](std::ostream &o) { write_mse_csv(o, *mse); });
}

} // namespace fdjcas
