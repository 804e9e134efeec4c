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

#include <benchmark/benchmark.h>

#include "fdjcas/estimation.hpp"
#include "fdjcas/sensing_crb.hpp"

using namespace fdjcas;

namespace {

void BM_Crb(benchmark::State &state) {
  const Scene scene = make_scene(SceneParams{});
  const ChannelSet ch = build_channel_set(scene, {}, 2);
  const CVec phi = RisPhase::random(ch.ris_size(), 2).phi;
  const SensingContext ctx = make_sensing_context(scene, phi, PathCoefficients::draw(2), ch.radar_noise_var);
  const CMat v = initial_precoder(ch, phi, 2, 10.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(crb_theta(v, ctx.path_matrix_derivative, ctx.noise_cov));
}
BENCHMARK(BM_Crb);

void BM_Music(benchmark::State &state) {
  const Scene scene = make_scene(SceneParams{});
  const ChannelSet ch = build_channel_set(scene, {}, 3);
  const PathCoefficients coeffs = PathCoefficients::draw(3);
  const CVec phi = RisPhase::random(ch.ris_size(), 3).phi;
  const CMat v = initial_precoder(ch, phi, 2, 100.0);
  SnapshotOptions so;
  so.snapshots = static_cast<int>(state.range(0));
  const SnapshotBatch batch = simulate_snapshots(scene, ch, v, phi, coeffs, so, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(music_estimate(batch, scene, MusicOptions{}));
}
BENCHMARK(BM_Music)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Snapshots(benchmark::State &state) {
  const Scene scene = make_scene(SceneParams{});
  const ChannelSet ch = build_channel_set(scene, {}, 4);
  const PathCoefficients coeffs = PathCoefficients::draw(4);
  const CVec phi = RisPhase::random(ch.ris_size(), 4).phi;
  const CMat v = initial_precoder(ch, phi, 2, 100.0);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_snapshots(scene, ch, v, phi, coeffs, SnapshotOptions{}, ++seed));
}
BENCHMARK(BM_Snapshots)->Unit(benchmark::kMicrosecond);

} // namespace
