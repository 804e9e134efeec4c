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
#include <sstream>

#include "fdjcas/optimizer.hpp"
#include "fdjcas/sensing_crb.hpp"

namespace fdjcas {

namespace {

CMat hermitian_part(const CMat &m) { return 0.5 * (m + m.adjoint()); }

// Spectral view of G - 2 mu Q for one value of mu. Solves for lambda0 in
// closed form per candidate, so each lambda0 trial costs O(M d).
class Spectrum {
public:
  Spectrum(const PrecoderProblem &pr, double mu) {
    CMat m = pr.gram;
    if (mu != 0.0)
      m -= 2.0 * mu * pr.fisher_form;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
    if (es.info() != Eigen::Success)
      throw Error("precoder: eigendecomposition failed");
    eig_ = es.eigenvalues();
    basis_ = es.eigenvectors();
    proj_ = basis_.adjoint() * pr.rhs;
    weight_ = proj_.rowwise().squaredNorm();
    scale_ = std::max(eig_.cwiseAbs().maxCoeff(), 1.0);
    floor_ = std::max(0.0, -eig_(0));
  }

  double floor() const { return floor_; }
  double total_weight() const { return weight_.sum(); }

  bool singular(Eigen::Index i, double lambda) const { return eig_(i) + lambda <= 1e-12 * scale_; }

  // Weight of B on the components that are singular at this shift.
  double null_weight(double lambda) const {
    double w = 0.0;
    for (Eigen::Index i = 0; i < eig_.size(); ++i)
      if (singular(i, lambda))
        w += weight_(i);
    return w;
  }

  double power(double lambda) const {
    double p = 0.0;
    for (Eigen::Index i = 0; i < eig_.size(); ++i)
      if (!singular(i, lambda))
        p += weight_(i) / ((eig_(i) + lambda) * (eig_(i) + lambda));
    return p;
  }

  CMat precoder(double lambda) const {
    CMat coef = proj_;
    for (Eigen::Index i = 0; i < eig_.size(); ++i)
      coef.row(i) *= singular(i, lambda) ? 0.0 : 1.0 / (eig_(i) + lambda);
    return basis_ * coef;
  }

  // Lowest eigenvector; orthogonal to every component the pseudo-inverse keeps.
  CVec null_direction() const { return basis_.col(0); }

private:
  RVec eig_;
  CMat basis_;
  CMat proj_;
  RVec weight_;
  double scale_ = 1.0;
  double floor_ = 0.0;
};

struct PowerSolve {
  CMat precoder;
  double lambda0 = 0.0;
  double power = 0.0;
  bool active = false;
};

PowerSolve solve_power(const PrecoderProblem &pr, double mu, const PrecoderOptions &opt) {
  const Spectrum sp(pr, mu);
  const double p = pr.power_budget;
  const double lo0 = sp.floor();
  PowerSolve out;

  // The floor solution exists only when B has no weight on the singular
  // directions; otherwise the power diverges there and lambda0 lies above it.
  const double p_floor = sp.power(lo0);
  if (sp.null_weight(lo0) <= 1e-20 * sp.total_weight() && p_floor <= p) {
    out.lambda0 = lo0;
    out.precoder = sp.precoder(lo0);
    if (lo0 > 0.0) {
      // indefinite matrix: the constraint binds, spend the slack in the null direction
      out.precoder.col(0) += std::sqrt(std::max(p - p_floor, 0.0)) * sp.null_direction();
      out.active = true;
    }
    out.power = out.precoder.squaredNorm();
    return out;
  }

  double lo = lo0;
  double hi = lo0 + std::sqrt(sp.total_weight() / p);
  for (int k = 0; k < opt.max_bisection; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double pm = sp.power(mid);
    if (pm > p)
      lo = mid;
    else
      hi = mid;
    if (pm <= p && pm >= p * (1.0 - opt.power_tol))
      break;
  }
  out.lambda0 = hi;
  out.precoder = sp.precoder(hi);
  out.power = out.precoder.squaredNorm();
  out.active = true;
  return out;
}

double fisher_of(const PrecoderProblem &pr, const CMat &v) { return (v.adjoint() * pr.fisher_form * v).trace().real(); }

// Near a singular shift the Fisher trace jumps with mu, and every split of the
// power along the lowest eigenvector u of G - 2 mu Q is (nearly) a Lagrangian
// minimizer. Writes V = V0 + u c^T and turns c, at fixed norm, so that
// Tr(V^H Q V) = F0 + |c|^2 q + 2 Re(h^T c), h_k = v_k^H Q u, meets the target.
void match_fisher(const PrecoderProblem &pr, double mu, PowerSolve &ps, double target) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(pr.gram - 2.0 * mu * pr.fisher_form));
  if (es.info() != Eigen::Success)
    return;
  const CVec u = es.eigenvectors().col(0);
  const CVec c0 = (u.adjoint() * ps.precoder).transpose();
  const double t = c0.squaredNorm();
  if (t <= 0.0)
    return;
  const CMat base = ps.precoder - u * c0.transpose();
  const CVec qu = pr.fisher_form * u;
  const double q = u.dot(qu).real();
  const CVec h = base.adjoint() * qu;
  const double hn = h.norm();
  const double mid = fisher_of(pr, base) + t * q;
  CVec dir = CVec::Zero(base.cols());
  double cos_psi = 1.0;
  if (hn > 0.0) {
    dir = h.conjugate() / hn;
    cos_psi = std::clamp((target - mid) / (2.0 * std::sqrt(t) * hn), -1.0, 1.0);
  } else {
    dir(0) = 1.0;
  }
  const CVec c = std::sqrt(t) * std::polar(1.0, std::acos(cos_psi)) * dir;
  ps.precoder = base + u * c.transpose();
  ps.power = ps.precoder.squaredNorm();
}

double lambda_max(const CMat &m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

PrecoderSolution finish(const PrecoderProblem &pr, const PowerSolve &ps, double mu, bool crb_active) {
  PrecoderSolution s;
  s.precoder = ps.precoder;
  s.lambda0 = ps.lambda0;
  s.mu = mu;
  s.power = ps.power;
  s.fisher = pr.fisher_form.size() > 0 ? fisher_of(pr, ps.precoder) : 0.0;
  s.power_active = ps.active;
  s.crb_active = crb_active;
  return s;
}

} // namespace

PrecoderProblem make_precoder_problem(const CMat &f, const CMat &w, const ChannelSet &ch, const CVec &phi,
                                      bool include_si) {
  const CMat fh = f * effective_user_channel(ch, phi);
  if (w.rows() != fh.rows() || w.cols() != fh.rows())
    throw DimensionError("precoder: weight and combiner do not fit");
  PrecoderProblem pr;
  pr.rhs = fh.adjoint() * w;
  pr.gram = fh.adjoint() * w * fh;
  if (include_si) {
    const CMat hs = effective_si_channel(ch, phi);
    pr.gram += hs.adjoint() * hs;
  }
  pr.gram = hermitian_part(pr.gram);
  return pr;
}

CMat precoder_for(const PrecoderProblem &pr, double lambda0, double mu) {
  return Spectrum(pr, mu).precoder(lambda0);
}

PrecoderSolution solve_precoder(const PrecoderProblem &pr, const PrecoderOptions &opt) {
  if (!(pr.power_budget > 0.0))
    throw Error("precoder: power budget must be positive");
  if (pr.gram.rows() != pr.gram.cols() || pr.rhs.rows() != pr.gram.rows())
    throw DimensionError("precoder: Gram matrix and right-hand side do not fit");

  const PowerSolve base = solve_power(pr, 0.0, opt);
  if (!pr.has_crb_constraint())
    return finish(pr, base, 0.0, false);
  if (pr.fisher_form.rows() != pr.gram.rows() || pr.fisher_form.cols() != pr.gram.cols())
    throw DimensionError("precoder: Fisher form does not match the precoder dimension");

  const double target = pr.fisher_target();
  if (fisher_of(pr, base.precoder) >= target)
    return finish(pr, base, 0.0, false);

  // the largest Fisher trace any precoder within the budget can reach
  const double qmax = lambda_max(pr.fisher_form);
  const double best = pr.power_budget * std::max(qmax, 0.0);
  if (best < target) {
    const double achieved = best > 0.0 ? 0.5 / (pr.crb_snapshots * best) : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "sensing bound " << pr.crb_threshold << " is unreachable with power " << pr.power_budget
        << "; best achievable bound is " << achieved;
    throw InfeasibleError(msg.str(), achieved);
  }

  const double gmax = lambda_max(pr.gram);
  const double unit = (gmax > 0.0 ? gmax : 1.0) / qmax;
  const double mu_cap = opt.mu_limit * unit;

  double lo = 0.0;
  double hi = unit;
  PowerSolve at_hi = solve_power(pr, hi, opt);
  while (fisher_of(pr, at_hi.precoder) < target) {
    lo = hi;
    if (hi >= mu_cap) {
      const double achieved = 0.5 / (pr.crb_snapshots * fisher_of(pr, at_hi.precoder));
      std::ostringstream msg;
      msg << "sensing bound " << pr.crb_threshold << " not reached before the multiplier limit; bound is "
          << achieved;
      throw InfeasibleError(msg.str(), achieved);
    }
    hi = std::min(4.0 * hi, mu_cap);
    at_hi = solve_power(pr, hi, opt);
  }

  for (int k = 0; k < opt.max_bisection; ++k) {
    if (fisher_of(pr, at_hi.precoder) <= target * (1.0 + opt.fisher_tol))
      break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    PowerSolve at_mid = solve_power(pr, mid, opt);
    if (fisher_of(pr, at_mid.precoder) >= target) {
      hi = mid;
      at_hi = std::move(at_mid);
    } else {
      lo = mid;
    }
  }
  if (fisher_of(pr, at_hi.precoder) > target * (1.0 + opt.fisher_tol))
    match_fisher(pr, hi, at_hi, target);
  return finish(pr, at_hi, hi, true);
}

PrecoderSolution precoder_update(const CMat &f, const CMat &w, const ChannelSet &ch, const CVec &phi,
                                 const CMat &abar, const CMat &sigma, double power_budget, double crb_threshold,
                                 bool include_si, double crb_snapshots, const PrecoderOptions &opt) {
  PrecoderProblem pr = make_precoder_problem(f, w, ch, phi, include_si);
  pr.power_budget = power_budget;
  pr.crb_threshold = crb_threshold;
  pr.crb_snapshots = crb_snapshots;
  if (std::isfinite(crb_threshold))
    pr.fisher_form = fisher_form(abar, sigma);
  return solve_precoder(pr, opt);
}

} // namespace fdjcas
