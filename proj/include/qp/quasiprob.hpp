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

#ifndef QP_QUASIPROB_HPP_
#define QP_QUASIPROB_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "qp/core.hpp"

namespace qp {

struct Step {
  int observable = 0;  // index into the registry
  double time = 0.0;
};

// An ordered observation plan. With a Hamiltonian present, each step's
// observable is Heisenberg-evolved to the step time before branching.
struct Schedule {
  std::vector<HermitianObservable> registry;
  std::vector<Step> steps;
  std::optional<HermitianObservable> hamiltonian;

  void validate() const;  // non-decreasing times, valid ids, matching dims
  int step_count() const { return static_cast<int>(steps.size()); }
  // The step's observable, evolved to its time when a Hamiltonian is set.
  HermitianObservable observable_at(int step) const;
  Schedule without_step(int step) const;
};

// One eigenvalue-midpoint of the symmetrized superoperator of an observable,
// together with the superprojector onto its eigenspace. In the observable's
// eigenbasis the projector for value mu keeps exactly the entries X_ij with
// (lambda_i + lambda_j)/2 = mu.
struct SpectralDelta {
  double value;
  Superoperator projector;
};

// Eigen-midpoint resolution of delta(a - sym(A)): values are the distinct
// midpoints (ascending); projectors are idempotent, mutually annihilating,
// and sum to the identity superoperator.
std::vector<SpectralDelta> spectral_delta(const HermitianObservable& obs,
                                          double tol = kHermTol);

// Compact form of the same branching, shared by the branch enumerators.
struct MidpointClasses {
  Matrix eigvecs;                  // unitary, columns ordered by level
  std::vector<int> level_of_col;   // merged-level index per column
  std::vector<double> level_values;
  std::vector<double> values;      // midpoint per class, ascending
  Eigen::MatrixXi class_of;        // (level, level) -> class index
};

MidpointClasses midpoint_classes(const HermitianObservable& obs,
                                 double tol = kHermTol);

struct EnumerationLimits {
  std::size_t max_atoms = 10'000'000;  // enumerated leaves before merging
  double prune_weight = 1e-14;
};

// Finite signed measure over outcome tuples. Atoms are keyed by per-step
// indices into `support` so that merging is exact; the midpoints themselves
// are deduplicated within 1e-9 per coordinate when the supports are built.
class QuasiDistribution {
 public:
  QuasiDistribution(std::vector<std::vector<double>> support,
                    std::map<std::vector<int>, double> atoms);

  int step_count() const { return static_cast<int>(support_.size()); }
  const std::vector<std::vector<double>>& support() const { return support_; }
  const std::map<std::vector<int>, double>& atoms() const { return atoms_; }

  std::vector<double> outcomes(const std::vector<int>& key) const;
  // Weight of the atom at an outcome tuple, 1e-9 tolerance per coordinate;
  // zero if no atom sits there.
  double weight_at(const std::vector<double>& outcome) const;
  double total_weight() const;
  // Plain power moment sum_atoms w * prod_t outcome_t^e_t.
  double moment(const std::vector<int>& exponents) const;

 private:
  std::vector<std::vector<double>> support_;
  std::map<std::vector<int>, double> atoms_;
};

// Exact branch enumeration of the Markovian quasiprobability:
// Q(a_1..a_n) = Tr[P_n(a_n)(...P_1(a_1)(rho)...)], earliest step first.
QuasiDistribution quasi_distribution(const DensityState& state,
                                     const Schedule& schedule,
                                     const EnumerationLimits& limits = {});

// Sum out one step; equals the distribution of the schedule with that step
// deleted (noninvasiveness at the quasiprobability level).
QuasiDistribution marginalize(const QuasiDistribution& q, int step);

// Integer-lag kernels attached to each observation. `sym` weights
// symmetrized-product insertions (default: identity kernel, lag 0 -> 1,
// which reproduces plain averages); `comm` weights commutator-type
// insertions (empty = Markovian). `sym` must be causal (no negative lags);
// `comm` may reach into the future, which only ever affects later
// observations because a temporally-last commutator insertion is traceless.
struct MemoryKernel {
  std::map<int, double> sym{{0, 1.0}};
  std::map<int, double> comm;

  static MemoryKernel markovian() { return MemoryKernel{}; }
  void validate() const;
};

struct CorrelatorDiagnostics {
  bool equal_time_noncommuting = false;
  std::vector<std::string> warnings;
};

// Time-ordered correlator <a_{s1} ... a_{sm}>_Q. Each selected observation
// expands into sym/comm insertions per the kernel, products distribute
// multilinearly, insertions apply earliest-first to the state, equal times
// break ties by (step index, sym before comm). Schedule times must lie on a
// common integer grid (gcd of differences); kernel lags live on that grid.
double q_correlator(const DensityState& state, const Schedule& schedule,
                    const MemoryKernel& kernel,
                    const std::vector<int>& selection,
                    CorrelatorDiagnostics* diag = nullptr);

}  // namespace qp

#endif  // QP_QUASIPROB_HPP_
