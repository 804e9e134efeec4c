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

#include "fdjcas/optimizer.hpp"
#include "fdjcas/rng.hpp"

namespace fdjcas {

namespace {

CMat surface_path(const ChannelSet &ch, const CMat &left, const CVec &phi) {
  if (phi.size() != ch.ris_size())
    throw DimensionError("surface phase vector length does not match the channel set");
  return left * (phi.asDiagonal() * ch.bs_to_ris);
}

CMat hermitian_part(const CMat &m) { return 0.5 * (m + m.adjoint()); }

} // namespace

RisPhase RisPhase::random(Eigen::Index size, std::uint64_t seed) {
  auto eng = make_stream(seed, "ris_init");
  RisPhase p{CVec(size)};
  for (Eigen::Index i = 0; i < size; ++i)
    p.phi(i) = random_phase(eng);
  return p;
}

double RisPhase::modulus_error() const {
  if (phi.size() == 0)
    return 0.0;
  return (phi.array().abs() - 1.0).abs().maxCoeff();
}

CMat effective_user_channel(const ChannelSet &ch, const CVec &phi) {
  return ch.bs_to_user + surface_path(ch, ch.ris_to_user, phi);
}

CMat effective_si_channel(const ChannelSet &ch, const CVec &phi) {
  return ch.si_los + surface_path(ch, ch.ris_to_bs, phi);
}

CMat mmse_combiner(const CMat &h, const CMat &v, double noise_var) {
  if (!(noise_var > 0.0))
    throw Error("mmse_combiner: noise variance must be positive");
  if (h.cols() != v.rows())
    throw DimensionError("mmse_combiner: channel and precoder do not fit");
  const CMat hv = h * v;
  const CMat r = hv * hv.adjoint() + noise_var * CMat::Identity(h.rows(), h.rows());
  // F = (R^{-1} H V)^H since R is Hermitian
  return r.llt().solve(hv).adjoint();
}

CMat mse_matrix(const CMat &h, const CMat &v, double noise_var) {
  if (!(noise_var > 0.0))
    throw Error("mse_matrix: noise variance must be positive");
  if (h.cols() != v.rows())
    throw DimensionError("mse_matrix: channel and precoder do not fit");
  const CMat hv = h * v;
  const CMat inner = CMat::Identity(v.cols(), v.cols()) + hv.adjoint() * hv / noise_var;
  return hermitian_part(inner.llt().solve(CMat::Identity(v.cols(), v.cols())));
}

CMat mse_matrix(const CMat &h, const CMat &v, const CMat &f, double noise_var) {
  const CMat err = CMat::Identity(v.cols(), v.cols()) - f * h * v;
  return hermitian_part(err * err.adjoint() + noise_var * f * f.adjoint());
}

CMat weight_matrix(const CMat &e, double priority) {
  if (e.rows() != e.cols())
    throw DimensionError("weight_matrix: MSE matrix must be square");
  Eigen::LLT<CMat> llt(hermitian_part(e));
  if (llt.info() != Eigen::Success)
    throw Error("weight_matrix: MSE matrix is singular");
  const CMat inv = llt.solve(CMat::Identity(e.rows(), e.cols()));
  if (!inv.allFinite())
    throw Error("weight_matrix: MSE matrix is singular");
  return hermitian_part(priority / std::log(2.0) * inv);
}

CMat si_matrix(const CMat &v, const CVec &phi, const ChannelSet &ch) {
  const CMat hv = effective_si_channel(ch, phi) * v;
  return hermitian_part(hv * hv.adjoint());
}

double dl_rate(const CMat &h, const CMat &v, double noise_var) {
  if (!(noise_var > 0.0))
    throw Error("dl_rate: noise variance must be positive");
  const CMat hv = h * v;
  // Sylvester: det(I + H V V^H H^H / s) = det(I + V^H H^H H V / s)
  const CMat inner = CMat::Identity(v.cols(), v.cols()) + hv.adjoint() * hv / noise_var;
  Eigen::LLT<CMat> llt(hermitian_part(inner));
  const auto &l = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    logdet += 2.0 * std::log(l(i, i).real());
  return logdet / std::log(2.0);
}

double wmmse_cost(const ChannelSet &ch, const CVec &phi, const CMat &v, const CMat &f, const CMat &w,
                  bool include_si) {
  double cost = (w * mse_matrix(effective_user_channel(ch, phi), v, f, ch.user_noise_var)).trace().real();
  if (include_si)
    cost += (effective_si_channel(ch, phi) * v).squaredNorm();
  return cost;
}

} // namespace fdjcas
