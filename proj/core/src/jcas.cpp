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
#include <limits>
#include <ostream>
#include <string>

#include "fdjcas/csv.hpp"
#include "fdjcas/optimizer.hpp"
#include "fdjcas/sensing_crb.hpp"

namespace fdjcas {

namespace {

double crb_or_inf(const CMat &v, const SensingContext &ctx, double snapshots) {
  try {
    return crb_theta(v, ctx.path_matrix_derivative, ctx.noise_cov, snapshots);
  } catch (const UnobservableError &) {
    return std::numeric_limits<double>::infinity();
  }
}

double relative_change(double prev, double cur) {
  const double change = std::abs(cur - prev);
  return cur != 0.0 ? change / std::abs(cur) : change;
}

// Per-element phase increments from a to b, wrapped to (-pi, pi].
RVec phase_steps(const CVec &a, const CVec &b) {
  RVec t(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    t(i) = std::arg(b(i) * std::conj(a(i)));
  return t;
}

struct State {
  CVec phi;
  CMat precoder;
  SensingContext ctx;
  IterationRecord rec;
};

class Runner {
public:
  Runner(const ChannelSet &ch, const PathCoefficients &coeffs, const JcasOptions &opt, JcasResult &res)
      : ch_(ch), coeffs_(coeffs), opt_(opt), res_(res) {
    constrained_ = opt.crb_constraint && std::isfinite(opt.crb_threshold);
    zeta_ = constrained_ ? opt.crb_threshold : std::numeric_limits<double>::infinity();
    move_ris_ = opt.optimize_ris && ch.ris_size() > 0;
  }

  void fill(State &s, int iter, double lambda0, double mu) const {
    IterationRecord &r = s.rec;
    r.iter = iter;
    r.rate = dl_rate(effective_user_channel(ch_, s.phi), s.precoder, ch_.user_noise_var);
    r.si_power = si_matrix(s.precoder, s.phi, ch_).trace().real();
    r.objective = (opt_.include_si ? r.si_power : 0.0) - opt_.user_weight * r.rate;
    r.crb = crb_or_inf(s.precoder, s.ctx, opt_.crb_snapshots);
    r.lambda0 = lambda0;
    r.mu = mu;
  }

  // One pass of combiner, weight, precoder and surface updates.
  State update(const State &in) {
    const int k = ++res_.iterations;
    State s = in;
    const CMat h = effective_user_channel(ch_, s.phi);
    const CMat f = mmse_combiner(h, s.precoder, ch_.user_noise_var);
    const CMat w = weight_matrix(mse_matrix(h, s.precoder, ch_.user_noise_var), opt_.user_weight);

    PrecoderSolution sol;
    try {
      sol = precoder_update(f, w, ch_, s.phi, s.ctx.path_matrix_derivative, s.ctx.noise_cov, opt_.power_budget, zeta_,
                            opt_.include_si, opt_.crb_snapshots, opt_.precoder);
    } catch (const InfeasibleError &e) {
      throw InfeasibleError("outer iteration " + std::to_string(k) + ": " + e.what(), e.achieved_crb());
    }
    s.precoder = sol.precoder;

    if (move_ris_)
      ris_update(s, f, w);
    fill(s, k, sol.lambda0, sol.mu);
    return s;
  }

  // Extrapolation uses phase angles for the surface, so steps stay on the
  // unit circle, and rescales the precoder onto the power budget if needed.
  State extrapolate(const State &s0, const State &s1, const State &s2, double step) const {
    const RVec t1 = phase_steps(s0.phi, s1.phi);
    const RVec t2 = phase_steps(s1.phi, s2.phi);
    const RVec angle = -2.0 * step * t1 + step * step * (t2 - t1);
    const CMat dv = s1.precoder - s0.precoder;
    const CMat ddv = s2.precoder - s1.precoder - dv;
    State e = s2;
    for (Eigen::Index i = 0; i < e.phi.size(); ++i)
      e.phi(i) = s0.phi(i) * std::polar(1.0, angle(i));
    e.precoder = s0.precoder - 2.0 * step * dv + step * step * ddv;
    const double power = e.precoder.squaredNorm();
    if (power > opt_.power_budget)
      e.precoder *= std::sqrt(opt_.power_budget / power);
    refresh_sensing_context(e.ctx, e.phi, coeffs_);
    return e;
  }

  static double step_length(const State &s0, const State &s1, const State &s2) {
    const RVec t1 = phase_steps(s0.phi, s1.phi);
    const RVec t2 = phase_steps(s1.phi, s2.phi);
    const CMat dv = s1.precoder - s0.precoder;
    const CMat ddv = s2.precoder - 2.0 * s1.precoder + s0.precoder;
    const double r = std::sqrt(t1.squaredNorm() + dv.squaredNorm());
    const double v = std::sqrt((t2 - t1).squaredNorm() + ddv.squaredNorm());
    if (!(v > 0.0))
      return 0.0;
    return std::min(-r / v, -1.0);
  }

private:
  // Majorization-minimization on the phases. The stopping test measures the
  // change against the full block cost rather than the quadratic alone, whose
  // phase-independent offset can dwarf the cost. With the sensing bound active,
  // the sequence stops before the first iterate that would violate it.
  void ris_update(State &s, const CMat &f, const CMat &w) {
    const RisQuadratic quad = ris_quadratics(s.precoder, f, w, ch_, opt_.include_si);
    const double offset = wmmse_cost(ch_, s.phi, s.precoder, f, w, opt_.include_si) - quad.objective(s.phi);
    const bool guard = constrained_ && opt_.ris_crb_guard;
    double f_prev = quad.objective(s.phi);
    bool moved = false;
    for (int k = 0; k < opt_.ris_max_iter; ++k) {
      CVec next = mm_step(s.phi, quad);
      if (guard) {
        refresh_sensing_context(s.ctx, next, coeffs_);
        if (crb_or_inf(s.precoder, s.ctx, opt_.crb_snapshots) > zeta_) {
          ++res_.ris_guard_hits;
          break;
        }
      }
      const double f_next = quad.objective(next);
      s.phi = std::move(next);
      moved = true;
      const double rel = std::abs(f_next - f_prev) / std::max(std::abs(f_next + offset), 1e-300);
      f_prev = f_next;
      if (rel <= opt_.ris_tol)
        break;
    }
    if (moved || guard)
      refresh_sensing_context(s.ctx, s.phi, coeffs_);
  }

  const ChannelSet &ch_;
  const PathCoefficients &coeffs_;
  const JcasOptions &opt_;
  JcasResult &res_;
  bool constrained_ = false;
  bool move_ris_ = false;
  double zeta_ = 0.0;
};

} // namespace

CMat initial_precoder(const ChannelSet &ch, const CVec &phi, int streams, double power_budget) {
  const CMat h = effective_user_channel(ch, phi);
  if (streams < 1 || streams > h.cols())
    throw DimensionError("initial_precoder: stream count must be between 1 and the transmit array size");
  Eigen::SelfAdjointEigenSolver<CMat> es(h.adjoint() * h);
  const Eigen::Index m = h.cols();
  CMat v(m, streams);
  for (int s = 0; s < streams; ++s)
    v.col(s) = es.eigenvectors().col(m - 1 - s);
  return std::sqrt(power_budget / streams) * v;
}

double jcas_objective(const ChannelSet &ch, const CVec &phi, const CMat &v, double user_weight, bool include_si) {
  const double rate = dl_rate(effective_user_channel(ch, phi), v, ch.user_noise_var);
  const double si = include_si ? (effective_si_channel(ch, phi) * v).squaredNorm() : 0.0;
  return si - user_weight * rate;
}

JcasResult jcas_optimize(const Scene &scene, const ChannelSet &ch, const PathCoefficients &coeffs, const CVec &phi0,
                         const JcasOptions &opt) {
  if (phi0.size() != ch.ris_size())
    throw DimensionError("jcas_optimize: initial surface phases do not match the channel set");
  if (static_cast<Eigen::Index>(scene.tx_count()) != ch.tx_count() ||
      static_cast<Eigen::Index>(scene.rx_count()) != ch.rx_count() ||
      static_cast<Eigen::Index>(scene.ris_size()) != ch.ris_size())
    throw DimensionError("jcas_optimize: scene and channel set disagree on array sizes");
  if (!(opt.power_budget > 0.0))
    throw Error("jcas_optimize: power budget must be positive");

  JcasResult res;
  Runner run(ch, coeffs, opt, res);

  State cur;
  cur.phi = phi0;
  cur.ctx = make_sensing_context(scene, cur.phi, coeffs, ch.radar_noise_var);
  cur.precoder = initial_precoder(ch, cur.phi, opt.streams, opt.power_budget);
  run.fill(cur, 0, 0.0, 0.0);
  res.trace.push_back(cur.rec);

  // records an accepted state; true once the objective has settled
  auto accept = [&](State &&s) {
    const double prev = res.trace.back().objective;
    res.trace.push_back(s.rec);
    cur = std::move(s);
    if (relative_change(prev, cur.rec.objective) <= opt.outer_tol)
      res.converged = true;
    return res.converged;
  };

  while (!res.converged && res.iterations < opt.max_outer) {
    State s0 = cur;
    if (accept(run.update(s0)) || !opt.accelerate || res.iterations >= opt.max_outer)
      continue;
    State s1 = cur;
    if (accept(run.update(s1)) || res.iterations >= opt.max_outer)
      continue;
    const State &s2 = cur;

    double step = Runner::step_length(s0, s1, s2);
    if (step == 0.0)
      continue;
    for (int b = 0; b < opt.extrapolation_backtracks && res.iterations < opt.max_outer; ++b) {
      State e;
      try {
        e = run.update(run.extrapolate(s0, s1, s2, step));
      } catch (const InfeasibleError &) {
        e.rec.objective = std::numeric_limits<double>::infinity();
      }
      if (e.rec.objective <= s2.rec.objective) {
        ++res.extrapolations;
        accept(std::move(e));
        break;
      }
      step = 0.5 * (step - 1.0);
      if (step > -1.5)
        break;
    }
    if (res.converged)
      break;
  }

  res.phi = cur.phi;
  res.precoder = cur.precoder;
  const CMat h = effective_user_channel(ch, res.phi);
  res.combiner = mmse_combiner(h, res.precoder, ch.user_noise_var);
  res.weight = weight_matrix(mse_matrix(h, res.precoder, ch.user_noise_var), opt.user_weight);
  return res;
}

void write_trace_csv(std::ostream &out, const std::vector<IterationRecord> &trace) {
  csv::write_row(out, {"iter", "objective", "rate_bps_hz", "si_power", "crb", "lambda0", "mu_k"});
  for (const auto &r : trace)
    csv::write_row(out, {std::to_string(r.iter), csv::format(r.objective), csv::format(r.rate),
                         csv::format(r.si_power), csv::format(r.crb), csv::format(r.lambda0), csv::format(r.mu)});
}

} // namespace fdjcas
