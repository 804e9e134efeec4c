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

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace fdjcas;
using fdjcas::testing::random_matrix;

TEST(RisPhase, RandomIsSeededAndUnitModulus) {
  const RisPhase a = RisPhase::random(100, 4);
  EXPECT_LT(a.modulus_error(), 1e-15);
  EXPECT_EQ(a.phi, RisPhase::random(100, 4).phi);
  EXPECT_NE(a.phi, RisPhase::random(100, 5).phi);
  EXPECT_EQ(RisPhase::identity(3).phi, CVec::Ones(3));
}

TEST(EffectiveChannel, MatchesElementwiseSum) {
  const ChannelSet ch = build_channel_set(fdjcas::testing::small_scene(), {}, 2);
  std::mt19937_64 eng(1);
  const CVec phi = fdjcas::testing::random_phases(eng, ch.ris_size());
  const CMat h = effective_user_channel(ch, phi);
  for (Eigen::Index j = 0; j < h.rows(); ++j)
    for (Eigen::Index m = 0; m < h.cols(); ++m) {
      cplx expect = ch.bs_to_user(j, m);
      for (Eigen::Index i = 0; i < ch.ris_size(); ++i)
        expect += ch.ris_to_user(j, i) * phi(i) * ch.bs_to_ris(i, m);
      EXPECT_NEAR(std::abs(h(j, m) - expect), 0.0, 1e-12);
    }
  const CMat hs = effective_si_channel(ch, phi);
  EXPECT_LT((hs - ch.si_los - ch.ris_to_bs * phi.asDiagonal() * ch.bs_to_ris).norm(), 1e-12);
  EXPECT_THROW(effective_user_channel(ch, CVec::Ones(2)), DimensionError);
}

TEST(DlRate, EqualsNegativeLogDetOfMse) {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const CMat h = random_matrix(eng, 5, 15);
    const CMat v = random_matrix(eng, 15, 2, 0.1 + trial * 0.05);
    const double noise = 0.5 + 0.01 * trial;
    const CMat e = mse_matrix(h, v, noise);
    const double expect = -std::log2(e.determinant().real());
    EXPECT_NEAR(dl_rate(h, v, noise), expect, 1e-10 * std::max(1.0, expect));
  }
}

TEST(DlRate, MatchesReceiveSideDeterminant) {
  std::mt19937_64 eng(12);
  const CMat h = random_matrix(eng, 4, 6);
  const CMat v = random_matrix(eng, 6, 2);
  const CMat r = CMat::Identity(4, 4) + h * v * v.adjoint() * h.adjoint() / 2.0;
  EXPECT_NEAR(dl_rate(h, v, 2.0), std::log2(r.determinant().real()), 1e-10);
  EXPECT_THROW(dl_rate(h, v, 0.0), Error);
}

TEST(MmseCombiner, GivesClosedFormMseAndIsOptimal) {
  std::mt19937_64 eng(13);
  const CMat h = random_matrix(eng, 5, 8);
  const CMat v = random_matrix(eng, 8, 2);
  const CMat f = mmse_combiner(h, v, 1.5);
  const CMat e = mse_matrix(h, v, f, 1.5);
  EXPECT_LT((e - mse_matrix(h, v, 1.5)).norm(), 1e-12);
  for (int k = 0; k < 20; ++k) {
    const CMat g = f + 0.05 * random_matrix(eng, f.rows(), f.cols());
    EXPECT_GT(mse_matrix(h, v, g, 1.5).trace().real(), e.trace().real());
  }
}

TEST(WeightMatrix, IsScaledInverse) {
  std::mt19937_64 eng(14);
  const CMat a = random_matrix(eng, 3, 3);
  const CMat e = a * a.adjoint() + CMat::Identity(3, 3);
  const CMat w = weight_matrix(e, 2.0);
  EXPECT_LT((w * e - 2.0 / std::log(2.0) * CMat::Identity(3, 3)).norm(), 1e-12);
  EXPECT_THROW(weight_matrix(CMat::Zero(2, 2), 1.0), Error);
  EXPECT_THROW(weight_matrix(CMat::Identity(2, 3), 1.0), DimensionError);
}

TEST(WeightMatrix, MinimizesAugmentedCostOverWeights) {
  // Tr(W E) - log det W / ln 2 is minimized at W = E^{-1} / ln 2; nearby Hermitian weights never do better.
  std::mt19937_64 eng(15);
  const CMat h = random_matrix(eng, 5, 8);
  const CMat v = random_matrix(eng, 8, 2);
  const CMat e = mse_matrix(h, v, 1.0);
  auto cost = [&](const CMat &w) {
    return (w * e).trace().real() - std::log(w.determinant().real()) / std::log(2.0);
  };
  const CMat w = weight_matrix(e, 1.0);
  for (int k = 0; k < 50; ++k) {
    const CMat p = 0.05 * random_matrix(eng, 2, 2);
    const CMat w2 = w + 0.5 * (p + p.adjoint());
    if (Eigen::SelfAdjointEigenSolver<CMat>(w2).eigenvalues().minCoeff() > 0.0) {
      EXPECT_GE(cost(w2), cost(w) - 1e-12);
    }
  }
}

TEST(WmmseCost, AddsSelfInterferenceEnergyWhenRequested) {
  const ChannelSet ch = build_channel_set(fdjcas::testing::small_scene(), {}, 3);
  std::mt19937_64 eng(16);
  const CVec phi = fdjcas::testing::random_phases(eng, ch.ris_size());
  const CMat v = random_matrix(eng, ch.tx_count(), 2);
  const CMat h = effective_user_channel(ch, phi);
  const CMat f = mmse_combiner(h, v, ch.user_noise_var);
  const CMat w = weight_matrix(mse_matrix(h, v, ch.user_noise_var), 1.0);
  const double comm = (w * mse_matrix(h, v, f, ch.user_noise_var)).trace().real();
  const double si = si_matrix(v, phi, ch).trace().real();
  EXPECT_NEAR(wmmse_cost(ch, phi, v, f, w, false), comm, 1e-10 * comm);
  EXPECT_NEAR(wmmse_cost(ch, phi, v, f, w, true), comm + si, 1e-10 * (comm + si));
  EXPECT_NEAR(si, (effective_si_channel(ch, phi) * v).squaredNorm(), 1e-10 * si);
}

TEST(InitialPrecoder, UsesDominantEigenvectorsAtFullPower) {
  const ChannelSet ch = build_channel_set(fdjcas::testing::reference_scene(), {}, 1);
  const CVec phi = RisPhase::random(100, 1).phi;
  const CMat v = initial_precoder(ch, phi, 2, 3.0);
  EXPECT_NEAR(v.squaredNorm(), 3.0, 1e-12);
  const CMat h = effective_user_channel(ch, phi);
  Eigen::SelfAdjointEigenSolver<CMat> es(h.adjoint() * h);
  const double top = es.eigenvalues()(es.eigenvalues().size() - 1);
  EXPECT_NEAR((h * v.col(0)).squaredNorm() / v.col(0).squaredNorm(), top, 1e-9 * top);
  EXPECT_THROW(initial_precoder(ch, phi, 0, 1.0), DimensionError);
}
