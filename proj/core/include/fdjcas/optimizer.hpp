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

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "fdjcas/channels.hpp"
#include "fdjcas/common.hpp"
#include "fdjcas/geometry.hpp"
#include "fdjcas/steering.hpp"

namespace fdjcas {

// ---------------------------------------------------------------------------
// Surface configuration

/// Unit-modulus reflection vector phi; the surface applies diag(phi).
struct RisPhase {
  CVec phi;

  static RisPhase random(Eigen::Index size, std::uint64_t seed);
  static RisPhase identity(Eigen::Index size) { return {CVec::Ones(size)}; }

  Eigen::Index size() const { return phi.size(); }
  CMat diagonal() const { return phi.asDiagonal(); }
  /// max_i | |phi_i| - 1 |
  double modulus_error() const;
};

// ---------------------------------------------------------------------------
// Downlink WMMSE building blocks

/// H_eff = H_jb + H_ji diag(phi) H_ib
CMat effective_user_channel(const ChannelSet &ch, const CVec &phi);

/// H_si = H_bb^l + H_bi diag(phi) H_ib (the line-of-sight part the design can act on)
CMat effective_si_channel(const ChannelSet &ch, const CVec &phi);

/// MMSE receive filter F = V^H H^H (H V V^H H^H + sigma^2 I)^{-1}.
CMat mmse_combiner(const CMat &h_eff, const CMat &precoder, double noise_var);

/// MSE matrix at the MMSE combiner, (I + V^H H^H H V / sigma^2)^{-1}.
CMat mse_matrix(const CMat &h_eff, const CMat &precoder, double noise_var);

/// MSE matrix for an arbitrary combiner: (I - F H V)(I - F H V)^H + sigma^2 F F^H.
CMat mse_matrix(const CMat &h_eff, const CMat &precoder, const CMat &combiner, double noise_var);

/// W = (w / ln 2) E^{-1}. Throws Error if E is singular.
CMat weight_matrix(const CMat &mse, double priority);

/// E_SI = H_si V V^H H_si^H.
CMat si_matrix(const CMat &precoder, const CVec &phi, const ChannelSet &ch);

/// log2 det(I + H V V^H H^H / sigma^2) in bit/s/Hz.
double dl_rate(const CMat &h_eff, const CMat &precoder, double noise_var);

/// Tr(E_SI) + Tr(W E(F, V)) for the given blocks, i.e. the quantity the
/// precoder and surface updates descend on. `include_si` drops the first term.
double wmmse_cost(const ChannelSet &ch, const CVec &phi, const CMat &precoder, const CMat &combiner,
                  const CMat &weight, bool include_si);

// ---------------------------------------------------------------------------
// Precoder with power and sensing-bound multipliers

struct PrecoderProblem {
  CMat gram;                 // G = H^H F^H W F H (+ H_si^H H_si)
  CMat rhs;                  // B = H^H F^H W
  CMat fisher_form;          // Q = Abar^H Sigma^{-1} Abar; empty when unconstrained
  double power_budget = 1.0; // p_o
  double crb_threshold = std::numeric_limits<double>::infinity(); // zeta
  double crb_snapshots = 1.0;

  bool has_crb_constraint() const { return fisher_form.size() > 0 && std::isfinite(crb_threshold); }
  /// Fisher trace needed to meet the threshold: 1 / (2 L zeta).
  double fisher_target() const { return 0.5 / (crb_snapshots * crb_threshold); }
};

struct PrecoderOptions {
  double power_tol = 1e-10;  // relative, active power constraint
  double fisher_tol = 1e-8;  // relative, active sensing constraint
  int max_bisection = 200;
  double mu_limit = 1e12;    // in units of lambda_max(G) / lambda_max(Q)
};

struct PrecoderSolution {
  CMat precoder;
  double lambda0 = 0.0;
  double mu = 0.0;
  double power = 0.0;
  double fisher = 0.0;
  bool power_active = false;
  bool crb_active = false;
};

/// Assembles G and B for the current combiner, weight and surface.
PrecoderProblem make_precoder_problem(const CMat &combiner, const CMat &weight, const ChannelSet &ch,
                                      const CVec &phi, bool include_si);

/// V(lambda0, mu) = (G - 2 mu Q + lambda0 I)^+ B for fixed multipliers.
CMat precoder_for(const PrecoderProblem &problem, double lambda0, double mu);

/// Solves min Tr(V^H G V) - 2 Re Tr(V^H B) s.t. Tr(V V^H) <= p_o and
/// Tr(V^H Q V) >= 1 / (2 L zeta). lambda0 comes from bisection on the power for
/// each candidate mu; mu comes from an outer bisection on the Fisher trace.
/// Throws InfeasibleError when the bound cannot be met at full power.
PrecoderSolution solve_precoder(const PrecoderProblem &problem, const PrecoderOptions &options = {});

/// One precoder update of the alternating design.
PrecoderSolution precoder_update(const CMat &combiner, const CMat &weight, const ChannelSet &ch, const CVec &phi,
                                 const CMat &path_derivative, const CMat &noise_cov, double power_budget,
                                 double crb_threshold, bool include_si = true, double crb_snapshots = 1.0,
                                 const PrecoderOptions &options = {});

// ---------------------------------------------------------------------------
// Surface update by majorization-minimization

/// f(phi) = phi^H Lambda phi + 2 Re{d^T phi}, equal to the WMMSE cost restricted
/// to the surface up to a phi-independent constant.
struct RisQuadratic {
  CMat lambda;
  CVec d;
  double lambda_max = 0.0;

  double objective(const CVec &phi) const;
  /// Upper bound g(phi | anchor) of f, tight at phi = anchor for unit-modulus phi.
  double majorizer(const CVec &phi, const CVec &anchor) const;
};

/// Builds Lambda and d. With S = V V^H and X = F^H W F:
///   Lambda = (H_bi^H H_bi + H_ji^H X H_ji) o (H_ib S H_ib^H)^T
///   d      = diag(H_ib S (H_bb^H H_bi + H_jb^H X H_ji) - H_ib V W F H_ji)
/// The self-interference pieces are dropped when `include_si` is false.
RisQuadratic ris_quadratics(const CMat &precoder, const CMat &combiner, const CMat &weight, const ChannelSet &ch,
                            bool include_si = true);

/// One MM step: q = (lambda_max I - Lambda) phi - conj(d), phi_i <- exp(i arg q_i).
/// Elements with q_i = 0 keep their phase.
CVec mm_step(const CVec &phi, const RisQuadratic &quad);

struct RisOptimizeResult {
  CVec phi;
  std::vector<double> objective; // f at every accepted iterate, starting with phi0
  int iterations = 0;
  bool converged = false;
};

/// Iterates mm_step until |f_{n+1} - f_n| / |f_{n+1}| <= tol (absolute when
/// f_{n+1} = 0) or max_iter steps. With `accelerate`, every pair of steps is
/// followed by a squared extrapolation in the phase angles plus one more step,
/// kept only when it ends below the pair; `objective` lists accepted iterates
/// and `iterations` counts mm_step calls.
RisOptimizeResult ris_optimize(const CVec &phi0, const RisQuadratic &quad, double tol, int max_iter,
                               bool accelerate = true);

// ---------------------------------------------------------------------------
// Alternating design

struct JcasOptions {
  double power_budget = 1.0;
  int streams = 2;
  double user_weight = 1.0;
  bool include_si = true;      // false: half-duplex, communications only
  bool crb_constraint = true;
  double crb_threshold = 0.01;
  double crb_snapshots = 1.0;
  bool optimize_ris = true;
  /// Stop the surface update at its last iterate that keeps the current
  /// precoder within the sensing bound.
  bool ris_crb_guard = true;
  /// Squared extrapolation over (precoder, phases) between plain updates. An
  /// extrapolated state is kept only when it lowers the objective.
  bool accelerate = true;
  int extrapolation_backtracks = 4;
  double outer_tol = 1e-4;
  int max_outer = 100; // counts every update, extrapolated or not
  double ris_tol = 1e-5;
  int ris_max_iter = 500;
  PrecoderOptions precoder;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;  // Tr(E_SI) - w * rate, the WMMSE objective up to a constant
  double rate = 0.0;       // bit/s/Hz
  double si_power = 0.0;   // Tr(E_SI)
  double crb = 0.0;        // rad^2, +inf when unobservable
  double lambda0 = 0.0;
  double mu = 0.0;
};

struct JcasResult {
  CMat precoder;
  CMat combiner;
  CMat weight;
  CVec phi;
  std::vector<IterationRecord> trace; // trace[0] is the initial point
  bool converged = false;
  int iterations = 0;          // outer updates evaluated
  int ris_guard_hits = 0;      // surface updates cut short by the sensing bound
  int extrapolations = 0;      // accepted extrapolated states
};

/// Dominant eigenvectors of H_eff^H H_eff, scaled to the full power budget.
CMat initial_precoder(const ChannelSet &ch, const CVec &phi, int streams, double power_budget);

/// Objective of a state, consistent with IterationRecord::objective.
double jcas_objective(const ChannelSet &ch, const CVec &phi, const CMat &precoder, double user_weight,
                      bool include_si);

/// Alternating optimization: combiner, weight, precoder with multiplier search,
/// then the surface phases, repeated until the objective settles. trace[k] holds
/// every accepted state; rejected extrapolations are not recorded.
JcasResult jcas_optimize(const Scene &scene, const ChannelSet &ch, const PathCoefficients &coeffs,
                         const CVec &phi0, const JcasOptions &options);

/// CSV with columns iter,objective,rate_bps_hz,si_power,crb,lambda0,mu_k.
void write_trace_csv(std::ostream &out, const std::vector<IterationRecord> &trace);

} // namespace fdjcas
