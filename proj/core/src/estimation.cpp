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
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "fdjcas/csv.hpp"
#include "fdjcas/estimation.hpp"
#include "fdjcas/parallel.hpp"
#include "fdjcas/rng.hpp"
#include "fdjcas/sensing_crb.hpp"

namespace fdjcas {

std::string to_string(SiMode mode) {
  switch (mode) {
  case SiMode::none:
    return "none";
  case SiMode::full:
    return "full";
  case SiMode::post_cancellation:
    return "post_cancellation";
  }
  return "unknown";
}

SiMode si_mode_from_string(const std::string &name) {
  if (name == "none")
    return SiMode::none;
  if (name == "full")
    return SiMode::full;
  if (name == "post_cancellation")
    return SiMode::post_cancellation;
  throw ConfigError("unknown self-interference mode '" + name + "' (none, full, post_cancellation)");
}

namespace {

CMat si_channel(const ChannelSet &ch, const CVec &phi, const SnapshotOptions &opt) {
  if (opt.si_mode == SiMode::none)
    return CMat::Zero(ch.rx_count(), ch.tx_count());
  CMat s = effective_si_channel(ch, phi);
  if (ch.si_nlos.size() > 0) {
    const double scale = opt.si_mode == SiMode::full ? 1.0 : opt.residual_si_factor;
    s += scale * ch.si_nlos;
  }
  return s;
}

} // namespace

SnapshotBatch simulate_snapshots(const Scene &scene, const ChannelSet &channels, const CMat &precoder,
                                 const CVec &phi, const PathCoefficients &coeffs, const SnapshotOptions &options,
                                 std::uint64_t seed) {
  if (options.snapshots < 1)
    throw Error("simulate_snapshots: snapshot count must be at least 1");
  if (precoder.rows() != channels.tx_count())
    throw DimensionError("simulate_snapshots: precoder rows must match the transmit array");

  const CMat a = assemble_path_matrix(make_steering_set(scene), phi, coeffs);
  const CMat g = (a + si_channel(channels, phi, options)) * precoder;

  auto eng = make_stream(seed, "radar_snapshots");
  const CMat s = complex_normal_matrix(eng, precoder.cols(), options.snapshots, 1.0);
  CMat y = g * s;
  if (channels.radar_noise_var < 0.0)
    throw Error("simulate_snapshots: radar noise variance must be nonnegative");
  if (channels.radar_noise_var > 0.0)
    y += complex_normal_matrix(eng, y.rows(), y.cols(), channels.radar_noise_var);

  SnapshotBatch b;
  b.samples = std::move(y);
  b.snapshots = options.snapshots;
  b.true_theta = scene.target_angle;
  b.si_mode = options.si_mode;
  return b;
}

MusicResult music_estimate(const SnapshotBatch &batch, const Scene &scene, const MusicOptions &options) {
  const Eigen::Index n = batch.samples.rows();
  if (n != static_cast<Eigen::Index>(scene.rx_count()))
    throw DimensionError("music_estimate: batch rows must match the receive array");
  if (options.subspace_dim < 1 || options.subspace_dim >= n)
    throw Error("music_estimate: signal subspace dimension must be in [1, N_b)");
  if (!(options.grid_resolution > 0.0))
    throw Error("music_estimate: grid resolution must be positive");
  if (batch.samples.cols() < n)
    throw Error("music_estimate: " + std::to_string(batch.samples.cols()) +
                " snapshots give a rank-deficient sample covariance; use at least " + std::to_string(n));

  const int count = static_cast<int>(n);
  CMat cov = batch.samples * batch.samples.adjoint() / static_cast<double>(batch.samples.cols());
  cov = 0.5 * (cov + cov.adjoint());

  Eigen::SelfAdjointEigenSolver<CMat> es(cov);
  if (es.info() != Eigen::Success)
    throw Error("music_estimate: eigendecomposition failed");
  // eigenvalues ascend: the first n - dim eigenvectors span the noise subspace
  const CMat noise = es.eigenvectors().leftCols(n - options.subspace_dim);

  const double lo = -0.5 * kPi;
  const auto points = static_cast<Eigen::Index>(std::floor(kPi / options.grid_resolution)) + 1;
  MusicResult r;
  r.grid.resize(points);
  r.pseudo_spectrum = RVec::Zero(points);
  CMat steer(n, points);
  for (Eigen::Index g = 0; g < points; ++g) {
    r.grid(g) = lo + static_cast<double>(g) * options.grid_resolution;
    steer.col(g) = ula_steering(r.grid(g), count, scene.element_spacing, scene.wavelength);
  }
  const RVec leak = (noise.adjoint() * steer).colwise().squaredNorm().transpose();

  Eigen::Index best = 0;
  for (Eigen::Index g = 0; g < points; ++g) {
    // an exact noise-free subspace can leave zero leakage at the true angle
    r.pseudo_spectrum(g) = 1.0 / std::max(leak(g), 1e-300);
    if (r.pseudo_spectrum(g) > r.pseudo_spectrum(best))
      best = g;
  }
  r.theta_hat = r.grid(best);
  return r;
}

std::vector<MseRow> monte_carlo_mse(const Scene &scene, const ChannelSet &channels, const PathCoefficients &coeffs,
                                    const CVec &phi0, const MseOptions &options) {
  if (options.trials < 1)
    throw Error("monte_carlo_mse: trial count must be at least 1");

  std::vector<MseRow> rows;
  rows.reserve(options.snr_db.size());
  for (const double snr : options.snr_db) {
    MseRow row;
    row.snr_db = snr;
    JcasOptions design = options.design;
    design.power_budget = std::pow(10.0, snr / 10.0) * channels.user_noise_var;

    JcasResult res;
    try {
      res = jcas_optimize(scene, channels, coeffs, phi0, design);
    } catch (const InfeasibleError &) {
      row.infeasible = true;
      rows.push_back(row);
      continue;
    }

    const SensingContext ctx = make_sensing_context(scene, res.phi, coeffs, channels.radar_noise_var);
    try {
      row.crb = crb_theta(res.precoder, ctx.path_matrix_derivative, ctx.noise_cov,
                          static_cast<double>(options.snapshots.snapshots));
    } catch (const UnobservableError &) {
      row.crb = std::numeric_limits<double>::infinity();
    }

    std::vector<double> err(static_cast<std::size_t>(options.trials));
    parallel_for(err.size(), options.workers, [&](std::size_t t) {
      const SnapshotBatch b =
          simulate_snapshots(scene, channels, res.precoder, res.phi, coeffs, options.snapshots, options.seed + t);
      const double e = music_estimate(b, scene, options.music).theta_hat - b.true_theta;
      err[t] = e * e;
    });
    double sum = 0.0;
    for (const double e : err)
      sum += e;
    row.mse = sum / static_cast<double>(options.trials);
    row.trials = options.trials;
    rows.push_back(row);
  }
  return rows;
}

void write_mse_csv(std::ostream &out, const std::vector<MseRow> &rows) {
  csv::write_row(out, {"snr_db", "mse_rad2", "crb_rad2", "trials"});
  for (const auto &r : rows) {
    std::optional<double> mse;
    std::optional<double> crb;
    if (!r.infeasible) {
      mse = r.mse;
      crb = r.crb;
    }
    csv::write_row(out, {csv::format(r.snr_db), csv::format(mse), csv::format(crb), std::to_string(r.trials)});
  }
}

} // namespace fdjcas
