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

#ifndef QP_WEAKMEAS_HPP_
#define QP_WEAKMEAS_HPP_

#include <string>
#include <vector>

#include "qp/quasiprob.hpp"

namespace qp {

// Finite-strength Gaussian detector: K(a) = C(eta) exp(-eta^2 (A - a)^2).
// Expanding over eigenprojector pairs rewrites K(a) X K(a)^dag as a mixture
// of Gaussians in the outcome, centered at the eigenvalue midpoints with
// variance 1/(4 eta^2), times damped operator weights
// exp(-eta^2 (lambda_i - lambda_j)^2 / 2) Pi_i X Pi_j.
struct GaussianDetector {
  double eta = 0.1;

  void validate() const;
  double outcome_variance() const { return 0.25 / (eta * eta); }
};

struct Branch {
  std::vector<double> means;  // one per completed step
  Matrix op;                  // accumulated operator weight
};

struct BranchMixture {
  double eta = 0.0;
  int steps = 0;
  std::vector<Branch> branches;

  double outcome_variance() const { return 0.25 / (eta * eta); }
  // Sum of branch traces; every Gaussian factor integrates to one, so this
  // is the total integrated weight of the outcome density.
  double total_weight() const;
};

// One measurement applied to an operator: branches keyed by the midpoint
// classes of the observable, each with its Gaussian mean and damped
// operator weight. Class members share a mean, so their weights merge.
std::vector<Branch> kraus_step(const Matrix& x, const HermitianObservable& obs,
                               double eta);

// Sequential application over a schedule starting from the state.
BranchMixture branch_mixture(const DensityState& state,
                             const Schedule& schedule, double eta,
                             const EnumerationLimits& limits = {});

// Joint outcome density of the mixture at a point (sum of branch traces
// times Gaussian factors). Used to cross-check the closed forms.
double mixture_density(const BranchMixture& mix,
                       const std::vector<double>& point);

// Exact closed-form moment <prod_t a_t> over the selected steps (repeats
// raise the power); per-branch polynomial-times-Gaussian integrals.
// Total degree is capped at 6.
double joint_moments(const DensityState& state, const Schedule& schedule,
                     double eta, const std::vector<int>& selection,
                     const EnumerationLimits& limits = {});

struct ExtrapolationReport {
  std::vector<double> etas;    // strictly decreasing, >= 3 entries
  std::vector<double> values;  // joint_moments at each eta
  double extrapolated = 0.0;   // Richardson limit in eta^2
  double reference = 0.0;      // q_correlator, Markovian kernel
  double discrepancy = 0.0;
  double fitted_order = 0.0;   // NaN when values are eta-independent
  bool converged = false;
  std::vector<std::string> notes;
};

inline const std::vector<double> kDefaultEtaList{0.2, 0.1, 0.05, 0.025};

// Richardson extrapolation of joint_moments in eta^2 toward the noninvasive
// limit, compared against the quasiprobability correlator. A growing
// residual flags the report instead of throwing.
ExtrapolationReport weak_limit(const DensityState& state,
                               const Schedule& schedule,
                               const std::vector<int>& selection,
                               const std::vector<double>& eta_list =
                                   kDefaultEtaList);

}  // namespace qp

#endif  // QP_WEAKMEAS_HPP_
