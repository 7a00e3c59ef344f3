// Copyright 2026 The quasiprob Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QP_NOISE_HPP_
#define QP_NOISE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qp/quasiprob.hpp"

namespace qp {

enum class NoiseKind { GaussianProduct, LaplaceProduct, DeltaCorrelatedGroups };

// One factor of a delta-correlated model: every member variable shares the
// same noise value, drawn from a single Gaussian/Laplace factor.
struct NoiseGroup {
  std::vector<int> members;
  NoiseKind kind = NoiseKind::LaplaceProduct;
  double param = 1.0;
};

// Classical noise density over n variables. Product models carry one
// positive parameter per variable: a variance sigma^2 for Gaussian factors
// (density ~ exp(-u^2/(2 sigma^2))), a rate alpha for Laplace factors
// (density (alpha/2) exp(-alpha|u|)). Characteristic functions are
// exp(-sigma^2 k^2 / 2) and alpha^2/(alpha^2 + k^2) respectively.
class NoiseModel {
 public:
  static NoiseModel gaussian_product(std::vector<double> variances);
  static NoiseModel laplace_product(std::vector<double> rates);
  static NoiseModel delta_correlated(int variables,
                                     std::vector<NoiseGroup> groups);

  NoiseKind kind() const { return kind_; }
  int variables() const { return variables_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<NoiseGroup>& groups() const { return groups_; }

  bool is_product() const { return kind_ != NoiseKind::DeltaCorrelatedGroups; }
  double log_factor(int var, double u) const;  // product models only
  double characteristic(int var, double k) const;
  double variance(int var) const;  // sigma^2 | 2/alpha^2

  static double log_factor_of(NoiseKind kind, double param, double u);

 private:
  NoiseModel() = default;
  NoiseKind kind_ = NoiseKind::GaussianProduct;
  int variables_ = 0;
  std::vector<double> params_;
  std::vector<NoiseGroup> groups_;
};

// P = N * Q, evaluable in closed form (finitely many atoms, analytic N).
struct ConvolvedDensity {
  QuasiDistribution q;
  NoiseModel noise;

  void validate() const;
};

// A density evaluation in scaled form: value = scaled_sum * exp(log_scale).
// The scaled fields survive underflow for long sequences; `tolerance` bounds
// the rounding error of the atom sum at the same scale.
struct DensityValue {
  double value = 0.0;
  double scaled_sum = 0.0;
  double scaled_abs = 0.0;
  double log_scale = 0.0;
  bool off_support = false;

  double tolerance() const;
  bool negative_beyond_tolerance() const;
};

// Closed-form evaluation of P at a point; no quadrature. For
// delta-correlated models only atoms whose sheet passes through the point
// contribute; if none does, the result is tagged off_support (the density
// is singular transverse to the sheets, and zero elsewhere).
DensityValue density_eval(const ConvolvedDensity& p,
                          const std::vector<double>& point);

struct PositivityReport {
  enum class Verdict { PositiveOnDecisionSet, NegativeWitness };

  Verdict verdict = Verdict::PositiveOnDecisionSet;
  std::vector<double> witness;  // empty unless NegativeWitness
  double witness_value = 0.0;
  double witness_log_scale = 0.0;
  double eval_tolerance = 0.0;
  std::vector<double> min_point;  // most negative point on the decision set
  double min_value = 0.0;
  double min_log_scale = 0.0;
  std::string regions_checked;
  std::vector<std::string> warnings;

  std::string verdict_name() const;
};

// Exhaustive sign decision over (i) a grid on the support box extended by
// box_margin per coordinate and (ii) every tail region (subset of
// coordinates beyond the box with a sign each). Laplace tails reduce
// exactly: beyond the support every factor is exp(-alpha s (x - a)) and the
// atom-dependent part e^{alpha s a} is constant in x. Gaussian tails reduce
// to the dominant atoms (largest s*a per tail coordinate, filtered in
// ascending coordinate order) and are asymptotic rather than exact.
// Reduced functions are grid-searched recursively over the remaining
// coordinates. Passing box_margin or grid_step <= 0 selects the documented
// defaults (margin 5/min rate or 6 max sigma; step such that one factor
// varies by < 5% per cell).
PositivityReport positivity_decide(const ConvolvedDensity& p,
                                   double box_margin = 0.0,
                                   double grid_step = 0.0, int threads = 1);

double default_box_margin(const NoiseModel& noise);
double default_grid_step(const NoiseModel& noise, double support_halfwidth,
                         double box_margin);

struct LongSequenceResult {
  std::optional<int> n_fail;
  std::vector<double> witness;
  double value = 0.0;
  double log_scale = 0.0;
};

// Schedules A, B, ..., B of length n = 2..n_max on |+><+|, with independent
// per-step noise (a 1-variable product model replicated per coordinate).
// All-but-first outcomes of every atom coincide, so the candidate point
// (a0, b0, ..., b0) with (a0, b0+1) at the noise maximum turns negative once
// the repeated small factors outweigh the single large one. Returns the
// smallest failing n, or nullopt if none up to n_max.
LongSequenceResult long_sequence_failure(int n_max,
                                         const NoiseModel& per_step_noise,
                                         const EnumerationLimits& limits = {});

struct DeltaCorrelatedResult {
  bool negative = false;
  std::vector<double> witness;
  double value = 0.0;
  double log_scale = 0.0;
};

// The B, A, B schedule with noise N_a(a) N_0(b1) delta(b1 - b2): the shared
// b-noise pins the evaluation to sheets x3 - x1 = b2 - b1 over atoms, and
// the sheet through the negative atom gets no compensation from the
// positive ones. Searches the sheets and returns the most negative point.
DeltaCorrelatedResult delta_correlated_failure(const DensityState& state,
                                               NoiseKind factor_kind,
                                               double a_param, double b_param);

struct NoiseFloorEstimate {
  double particle_count = 0.0;
  double box_side = 0.0;      // m
  double duration = 0.0;      // time converted to meters
  double micro_length = 0.0;  // m
  double micro_time = 0.0;    // m
  double n_macro = 0.0;       // e^2 / m^4, with e = 1
  double n_micro = 0.0;       // e^2 / m^4
};

// Macroscopic invisibility bound n_macro = particles^2 / (box^3 * duration)
// against the single-atom scale n_micro = 1 / (length^3 * time), both in
// units e = c = 1 with lengths in meters.
NoiseFloorEstimate noise_floor_estimate(double particle_count,
                                        double box_side_m, double duration_s,
                                        double micro_length_m,
                                        double micro_time_m);

}  // namespace qp

#endif  // QP_NOISE_HPP_
