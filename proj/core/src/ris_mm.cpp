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

namespace fdjcas {

double RisQuadratic::objective(const CVec &phi) const {
  return (phi.adjoint() * lambda * phi)(0, 0).real() + 2.0 * (d.transpose() * phi)(0, 0).real();
}

double RisQuadratic::majorizer(const CVec &phi, const CVec &anchor) const {
  const CMat shifted = lambda_max * CMat::Identity(lambda.rows(), lambda.cols()) - lambda;
  const double quad = lambda_max * phi.squaredNorm() - 2.0 * (phi.adjoint() * shifted * anchor)(0, 0).real() +
                      (anchor.adjoint() * shifted * anchor)(0, 0).real();
  return quad + 2.0 * (d.transpose() * phi)(0, 0).real();
}

RisQuadratic ris_quadratics(const CMat &v, const CMat &f, const CMat &w, const ChannelSet &ch, bool include_si) {
  const Eigen::Index n = ch.ris_size();
  RisQuadratic q;
  q.lambda = CMat::Zero(n, n);
  q.d = CVec::Zero(n);
  if (n == 0)
    return q;
  if (v.rows() != ch.bs_to_ris.cols())
    throw DimensionError("ris_quadratics: precoder rows must match the transmit array");

  const CMat hv = ch.bs_to_ris * v;    // H_ib V
  const CMat s_ris = hv * hv.adjoint(); // H_ib S H_ib^H
  const CMat x = f.adjoint() * w * f;  // F^H W F

  CMat left = ch.ris_to_user.adjoint() * x * ch.ris_to_user;
  CMat cross = ch.bs_to_user.adjoint() * x * ch.ris_to_user;
  if (include_si) {
    left += ch.ris_to_bs.adjoint() * ch.ris_to_bs;
    cross += ch.si_los.adjoint() * ch.ris_to_bs;
  }
  q.lambda = left.cwiseProduct(s_ris.transpose());
  q.lambda = 0.5 * (q.lambda + q.lambda.adjoint());

  // diag(H_ib V V^H cross) - diag(H_ib V W F H_ji)
  const CMat lin = hv * (v.adjoint() * cross) - hv * (w * f * ch.ris_to_user);
  q.d = lin.diagonal();

  Eigen::SelfAdjointEigenSolver<CMat> es(q.lambda, Eigen::EigenvaluesOnly);
  q.lambda_max = es.eigenvalues()(n - 1);
  return q;
}

CVec mm_step(const CVec &phi, const RisQuadratic &quad) {
  const CVec q = quad.lambda_max * phi - quad.lambda * phi - quad.d.conjugate();
  CVec next = phi;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) != cplx(0.0, 0.0))
      next(i) = std::polar(1.0, std::arg(q(i)));
  return next;
}

namespace {

RVec phase_diff(const CVec &to, const CVec &from) {
  RVec d(to.size());
  for (Eigen::Index i = 0; i < to.size(); ++i)
    d(i) = std::arg(to(i) * std::conj(from(i)));
  return d;
}

} // namespace

RisOptimizeResult ris_optimize(const CVec &phi0, const RisQuadratic &quad, double tol, int max_iter,
                               bool accelerate) {
  if (!(tol > 0.0))
    throw Error("ris_optimize: tolerance must be positive");
  RisOptimizeResult r;
  r.phi = phi0;
  r.objective.push_back(quad.objective(phi0));

  auto accept = [&](CVec phi, double f) {
    const double f_prev = r.objective.back();
    r.phi = std::move(phi);
    r.objective.push_back(f);
    const double change = std::abs(f - f_prev);
    const double rel = f != 0.0 ? change / std::abs(f) : change;
    r.converged = rel <= tol;
    return r.converged;
  };

  while (r.iterations < max_iter) {
    CVec p1 = mm_step(r.phi, quad);
    const double f1 = quad.objective(p1);
    ++r.iterations;
    if (!accelerate || r.iterations + 2 > max_iter) {
      if (accept(std::move(p1), f1))
        break;
      continue;
    }
    CVec p2 = mm_step(p1, quad);
    const double f2 = quad.objective(p2);
    ++r.iterations;

    // squared extrapolation in the phase angles, kept only if it beats the plain steps
    const RVec d1 = phase_diff(p1, r.phi);
    const RVec dd = phase_diff(p2, p1) - d1;
    const double dn = dd.norm();
    bool jumped = false;
    if (dn > 0.0) {
      double step = std::min(-d1.norm() / dn, -1.0);
      for (int b = 0; b < 4 && step < -1.0 && r.iterations < max_iter; ++b, step = 0.5 * (step - 1.0)) {
        CVec e(r.phi.size());
        for (Eigen::Index i = 0; i < e.size(); ++i)
          e(i) = r.phi(i) * std::polar(1.0, -2.0 * step * d1(i) + step * step * dd(i));
        CVec p3 = mm_step(e, quad);
        const double f3 = quad.objective(p3);
        ++r.iterations;
        if (f3 <= f2) {
          if (accept(std::move(p3), f3))
            return r;
          jumped = true;
          break;
        }
      }
    }
    if (!jumped) {
      r.objective.push_back(f1);
      r.phi = p1;
      if (accept(std::move(p2), f2))
        break;
    }
  }
  return r;
}

} // namespace fdjcas
