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

#include "qp/weakmeas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qp {

void GaussianDetector::validate() const {
  if (!(eta > 0.0) || eta > 1.0)
    throw ValidationError("gaussian detector: eta must be in (0, 1]");
}

double BranchMixture::total_weight() const {
  double s = 0.0;
  for (const Branch& b : branches) s += b.op.trace().real();
  return s;
}

std::vector<Branch> kraus_step(const Matrix& x, const HermitianObservable& obs,
                               double eta) {
  GaussianDetector{eta}.validate();
  const MidpointClasses mc = midpoint_classes(obs);
  const int d = obs.dim();
  const Matrix y = mc.eigvecs.adjoint() * x * mc.eigvecs;
  std::vector<Branch> out;
  for (std::size_t c = 0; c < mc.values.size(); ++c) {
    Matrix yc = Matrix::Zero(d, d);
    bool empty = true;
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) {
        const int li = mc.level_of_col[r], lj = mc.level_of_col[s];
        if (mc.class_of(li, lj) != static_cast<int>(c)) continue;
        const double gap = mc.level_values[li] - mc.level_values[lj];
        yc(r, s) = y(r, s) * std::exp(-0.5 * eta * eta * gap * gap);
        empty = false;
      }
    if (empty) continue;
    out.push_back(
        {{mc.values[c]}, mc.eigvecs * yc * mc.eigvecs.adjoint()});
  }
  return out;
}

BranchMixture branch_mixture(const DensityState& state,
                             const Schedule& schedule, double eta,
                             const EnumerationLimits& limits) {
  schedule.validate();
  GaussianDetector{eta}.validate();
  if (state.dim() != schedule.registry[0].dim())
    throw ValidationError("branch_mixture: state dimension mismatch");

  BranchMixture mix;
  mix.eta = eta;
  mix.steps = schedule.step_count();
  mix.branches = {{{}, state.matrix()}};
  for (int t = 0; t < schedule.step_count(); ++t) {
    const HermitianObservable obs = schedule.observable_at(t);
    std::vector<Branch> next;
    for (const Branch& b : mix.branches) {
      for (Branch& child : kraus_step(b.op, obs, eta)) {
        if (child.op.cwiseAbs().maxCoeff() < limits.prune_weight) continue;
        Branch nb;
        nb.means = b.means;
        nb.means.push_back(child.means[0]);
        nb.op = std::move(child.op);
        next.push_back(std::move(nb));
        if (next.size() > limits.max_atoms)
          throw ResourceError("branch_mixture: branch count exceeds limit");
      }
    }
    mix.branches = std::move(next);
  }
  return mix;
}

double mixture_density(const BranchMixture& mix,
                       const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != mix.steps)
    throw ValidationError("mixture_density: point length mismatch");
  const double var = mix.outcome_variance();
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
  double s = 0.0;
  for (const Branch& b : mix.branches) {
    double g = 1.0;
    for (int t = 0; t < mix.steps; ++t) {
      const double u = point[t] - b.means[t];
      g *= norm * std::exp(-0.5 * u * u / var);
    }
    s += g * b.op.trace().real();
  }
  return s;
}

namespace {

// E[(mu + sigma Z)^k] for standard normal Z.
double gaussian_power_moment(double mu, double var, int k) {
  double s = 0.0;
  double dfact = 1.0;  // (j-1)!! over even j
  for (int j = 0; j <= k; j += 2) {
    if (j > 0) dfact *= (j - 1);
    double binom = 1.0;
    for (int i = 1; i <= j; ++i) binom = binom * (k - j + i) / i;
    s += binom * std::pow(mu, k - j) * std::pow(var, j / 2) * dfact;
  }
  return s;
}

}  // namespace

double joint_moments(const DensityState& state, const Schedule& schedule,
                     double eta, const std::vector<int>& selection,
                     const EnumerationLimits& limits) {
  if (static_cast<int>(selection.size()) > 6)
    throw ValidationError("joint_moments: degree overflow (cap 6)");
  for (int s : selection)
    if (s < 0 || s >= schedule.step_count())
      throw ValidationError("joint_moments: selection index out of range");

  std::vector<int> exponent(schedule.step_count(), 0);
  for (int s : selection) exponent[s] += 1;

  const BranchMixture mix = branch_mixture(state, schedule, eta, limits);
  const double var = mix.outcome_variance();
  double total = 0.0;
  for (const Branch& b : mix.branches) {
    double factor = 1.0;
    for (int t = 0; t < mix.steps; ++t)
      if (exponent[t] > 0)
        factor *= gaussian_power_moment(b.means[t], var, exponent[t]);
    total += factor * b.op.trace().real();
  }
  return total;
}

ExtrapolationReport weak_limit(const DensityState& state,
                               const Schedule& schedule,
                               const std::vector<int>& selection,
                               const std::vector<double>& eta_list) {
  if (eta_list.size() < 3)
    throw ValidationError("weak_limit: need at least 3 eta values");
  for (std::size_t i = 0; i + 1 < eta_list.size(); ++i)
    if (!(eta_list[i] > eta_list[i + 1]))
      throw ValidationError("weak_limit: eta list must be strictly "
                            "decreasing");

  ExtrapolationReport rep;
  rep.etas = eta_list;
  for (double eta : eta_list)
    rep.values.push_back(joint_moments(state, schedule, eta, selection));

  // Neville extrapolation to x = eta^2 -> 0.
  std::vector<double> x, p = rep.values;
  for (double eta : eta_list) x.push_back(eta * eta);
  const std::size_t m = p.size();
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = 0; i + j < m; ++i)
      p[i] = (-x[i + j] * p[i] + x[i] * p[i + j]) / (x[i] - x[i + j]);
  rep.extrapolated = p[0];

  rep.reference =
      q_correlator(state, schedule, MemoryKernel::markovian(), selection);
  rep.discrepancy = rep.extrapolated - rep.reference;

  // Convergence-order fit on |value - extrapolated| vs eta, skipping
  // differences at rounding level.
  const double atol =
      1e-13 * std::max({1.0, std::abs(rep.reference),
                        std::abs(rep.values.front())});
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = std::abs(rep.values[i] - rep.extrapolated);
    if (d > atol) {
      lx.push_back(std::log(eta_list[i]));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() < 2) {
    rep.fitted_order = std::numeric_limits<double>::quiet_NaN();
    rep.converged = true;
    rep.notes.push_back(
        "values are eta-independent at numerical resolution; no order to "
        "fit");
    return rep;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double nfit = static_cast<double>(lx.size());
  rep.fitted_order = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);

  // Residuals should shrink with eta (etas are stored decreasing).
  bool shrinking = true;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double d0 = std::abs(rep.values[i] - rep.extrapolated);
    const double d1 = std::abs(rep.values[i + 1] - rep.extrapolated);
    if (d1 > d0 + atol) shrinking = false;
  }
  rep.converged = shrinking;
  if (!shrinking)
    rep.notes.push_back("residuals grow as eta decreases; extrapolation is "
                        "unreliable");
  return rep;
}

}  // namespace qp
