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
#include <random>

#include <benchmark/benchmark.h>

#include "fdjcas/channels.hpp"
#include "fdjcas/geometry.hpp"
#include "fdjcas/optimizer.hpp"
#include "fdjcas/rng.hpp"
#include "fdjcas/steering.hpp"

using namespace fdjcas;

namespace {

struct Bed {
  Scene scene = make_scene(SceneParams{});
  ChannelSet ch;
  PathCoefficients coeffs;
  SensingContext ctx;
  CVec phi;
  CMat v, f, w;

  explicit Bed(double snr_db) {
    ch = build_channel_set(scene, {}, 1);
    coeffs = PathCoefficients::draw(1);
    phi = RisPhase::random(ch.ris_size(), 1).phi;
    ctx = make_sensing_context(scene, phi, coeffs, ch.radar_noise_var);
    v = initial_precoder(ch, phi, 2, std::pow(10.0, snr_db / 10.0));
    const CMat h = effective_user_channel(ch, phi);
    f = mmse_combiner(h, v, ch.user_noise_var);
    w = weight_matrix(mse_matrix(h, v, ch.user_noise_var), 1.0);
  }
};

void BM_PrecoderUpdate(benchmark::State &state) {
  const Bed b(static_cast<double>(state.range(0)));
  const double p = std::pow(10.0, static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        precoder_update(b.f, b.w, b.ch, b.phi, b.ctx.path_matrix_derivative, b.ctx.noise_cov, p, 0.01));
}
BENCHMARK(BM_PrecoderUpdate)->Arg(0)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_SurfaceQuadratic(benchmark::State &state) {
  const Bed b(10.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(ris_quadratics(b.v, b.f, b.w, b.ch, true));
}
BENCHMARK(BM_SurfaceQuadratic)->Unit(benchmark::kMicrosecond);

void BM_MmStep(benchmark::State &state) {
  const Bed b(10.0);
  const RisQuadratic q = ris_quadratics(b.v, b.f, b.w, b.ch, true);
  CVec phi = b.phi;
  for (auto _ : state) {
    phi = mm_step(phi, q);
    benchmark::DoNotOptimize(phi.data());
  }
}
BENCHMARK(BM_MmStep);

void BM_RisOptimize(benchmark::State &state) {
  const Bed b(10.0);
  const RisQuadratic q = ris_quadratics(b.v, b.f, b.w, b.ch, true);
  const bool accelerate = state.range(0) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(ris_optimize(b.phi, q, 1e-8, 2000, accelerate));
}
BENCHMARK(BM_RisOptimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_JcasOptimize(benchmark::State &state) {
  const Bed b(static_cast<double>(state.range(0)));
  JcasOptions o;
  o.power_budget = std::pow(10.0, static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(jcas_optimize(b.scene, b.ch, b.coeffs, b.phi, o));
}
BENCHMARK(BM_JcasOptimize)->Arg(0)->Arg(20)->Unit(benchmark::kMillisecond)->Iterations(3);

} // namespace

BENCHMARK_MAIN();
