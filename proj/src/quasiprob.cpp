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

#include "qp/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qp {

namespace {

constexpr double kMidpointMergeTol = 1e-9;

}  // namespace

void Schedule::validate() const {
  if (registry.empty()) throw ValidationError("schedule: empty registry");
  const int d = registry[0].dim();
  for (const auto& obs : registry)
    if (obs.dim() != d)
      throw ValidationError("schedule: registry dimensions differ");
  if (hamiltonian && hamiltonian->dim() != d)
    throw ValidationError("schedule: hamiltonian dimension mismatch");
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step& s = steps[i];
    if (s.observable < 0 || s.observable >= static_cast<int>(registry.size()))
      throw ValidationError("schedule: step " + std::to_string(i) +
                            " references unknown observable " +
                            std::to_string(s.observable));
    if (s.time < prev)
      throw ValidationError("schedule: times must be non-decreasing (step " +
                            std::to_string(i) + ")");
    prev = s.time;
  }
}

HermitianObservable Schedule::observable_at(int step) const {
  const Step& s = steps.at(step);
  const HermitianObservable& obs = registry.at(s.observable);
  if (!hamiltonian) return obs;
  return evolve_observable(obs, *hamiltonian, s.time);
}

Schedule Schedule::without_step(int step) const {
  Schedule out = *this;
  out.steps.erase(out.steps.begin() + step);
  return out;
}

MidpointClasses midpoint_classes(const HermitianObservable& obs, double tol) {
  SpectralDecomposition sd = hermitian_eig(obs, tol);
  const int d = obs.dim();
  const int levels = sd.levels();

  MidpointClasses mc;
  mc.level_values = sd.eigenvalues;
  mc.eigvecs = Matrix(d, d);
  mc.level_of_col.resize(d);

  // Re-derive an orthonormal column basis per merged level from the
  // projectors (their column spaces), keeping a level tag per column.
  int col = 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(obs.matrix());
  const Eigen::VectorXd& ev = es.eigenvalues();
  for (int c = 0; c < d; ++c) {
    // Assign each raw eigenvector to the nearest merged level.
    int best = 0;
    double bestdist = std::abs(ev(c) - sd.eigenvalues[0]);
    for (int k = 1; k < levels; ++k) {
      double dist = std::abs(ev(c) - sd.eigenvalues[k]);
      if (dist < bestdist) {
        bestdist = dist;
        best = k;
      }
    }
    mc.eigvecs.col(col) = es.eigenvectors().col(c);
    mc.level_of_col[col] = best;
    ++col;
  }

  // Cluster the level-pair midpoints.
  struct Mid {
    double value;
    int i, j;
  };
  std::vector<Mid> mids;
  for (int i = 0; i < levels; ++i)
    for (int j = 0; j < levels; ++j)
      mids.push_back({0.5 * (sd.eigenvalues[i] + sd.eigenvalues[j]), i, j});
  std::sort(mids.begin(), mids.end(),
            [](const Mid& a, const Mid& b) { return a.value < b.value; });

  mc.class_of = Eigen::MatrixXi::Constant(levels, levels, -1);
  std::size_t k = 0;
  while (k < mids.size()) {
    std::size_t end = k + 1;
    while (end < mids.size() &&
           mids[end].value - mids[end - 1].value <= kMidpointMergeTol)
      ++end;
    double value = 0.0;
    for (std::size_t m = k; m < end; ++m) value += mids[m].value;
    value /= static_cast<double>(end - k);
    const int cls = static_cast<int>(mc.values.size());
    mc.values.push_back(value);
    for (std::size_t m = k; m < end; ++m)
      mc.class_of(mids[m].i, mids[m].j) = cls;
    k = end;
  }
  return mc;
}

std::vector<SpectralDelta> spectral_delta(const HermitianObservable& obs,
                                          double tol) {
  SpectralDecomposition sd = hermitian_eig(obs, tol);
  MidpointClasses mc = midpoint_classes(obs, tol);
  const int d = obs.dim();
  std::vector<SpectralDelta> out;
  for (std::size_t c = 0; c < mc.values.size(); ++c) {
    Superoperator proj{d, Matrix::Zero(d * d, d * d)};
    for (int i = 0; i < sd.levels(); ++i)
      for (int j = 0; j < sd.levels(); ++j)
        if (mc.class_of(i, j) == static_cast<int>(c))
          proj.action += kron(sd.projectors[j].transpose(), sd.projectors[i]);
    out.push_back({mc.values[c], std::move(proj)});
  }
  return out;
}

QuasiDistribution::QuasiDistribution(std::vector<std::vector<double>> support,
                                     std::map<std::vector<int>, double> atoms)
    : support_(std::move(support)), atoms_(std::move(atoms)) {}

std::vector<double> QuasiDistribution::outcomes(
    const std::vector<int>& key) const {
  std::vector<double> out(key.size());
  for (std::size_t t = 0; t < key.size(); ++t) out[t] = support_[t][key[t]];
  return out;
}

double QuasiDistribution::weight_at(const std::vector<double>& outcome) const {
  if (outcome.size() != support_.size())
    throw ValidationError("weight_at: outcome length mismatch");
  std::vector<int> key(outcome.size());
  for (std::size_t t = 0; t < outcome.size(); ++t) {
    const auto& vals = support_[t];
    int found = -1;
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (std::abs(vals[k] - outcome[t]) <= kMidpointMergeTol) {
        found = static_cast<int>(k);
        break;
      }
    if (found < 0) return 0.0;
    key[t] = found;
  }
  auto it = atoms_.find(key);
  return it == atoms_.end() ? 0.0 : it->second;
}

double QuasiDistribution::total_weight() const {
  double s = 0.0;
  for (const auto& [k, w] : atoms_) s += w;
  return s;
}

double QuasiDistribution::moment(const std::vector<int>& exponents) const {
  if (exponents.size() != support_.size())
    throw ValidationError("moment: exponent length mismatch");
  double s = 0.0;
  for (const auto& [key, w] : atoms_) {
    double term = w;
    for (std::size_t t = 0; t < key.size(); ++t)
      term *= std::pow(support_[t][key[t]], exponents[t]);
    s += term;
  }
  return s;
}

namespace {

struct Enumerator {
  const std::vector<MidpointClasses>& steps;
  const EnumerationLimits& limits;
  std::map<std::vector<int>, double> atoms;
  std::size_t leaves = 0;
  std::vector<int> key;

  void run(const Matrix& x, std::size_t t) {
    if (t == steps.size()) {
      if (++leaves > limits.max_atoms)
        throw ResourceError(
            "quasi_distribution: enumerated atoms exceed the configured "
            "limit of " +
            std::to_string(limits.max_atoms));
      const double w = x.trace().real();
      if (std::abs(w) >= limits.prune_weight) {
        auto [it, fresh] = atoms.emplace(key, w);
        if (!fresh) it->second += w;
      }
      return;
    }
    const MidpointClasses& mc = steps[t];
    const int d = static_cast<int>(mc.eigvecs.rows());
    const Matrix y = mc.eigvecs.adjoint() * x * mc.eigvecs;
    for (std::size_t c = 0; c < mc.values.size(); ++c) {
      Matrix yc = Matrix::Zero(d, d);
      double norm2 = 0.0;
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s)
          if (mc.class_of(mc.level_of_col[r], mc.level_of_col[s]) ==
              static_cast<int>(c)) {
            yc(r, s) = y(r, s);
            norm2 += std::norm(y(r, s));
          }
      // A dead branch stays dead: the class maps are orthogonal projections
      // in the Hilbert-Schmidt sense, so the final trace of anything grown
      // from yc is bounded by sqrt(d) * ||yc||_F.
      if (std::sqrt(norm2) < limits.prune_weight) continue;
      key.push_back(static_cast<int>(c));
      run(mc.eigvecs * yc * mc.eigvecs.adjoint(), t + 1);
      key.pop_back();
    }
  }
};

}  // namespace

QuasiDistribution quasi_distribution(const DensityState& state,
                                     const Schedule& schedule,
                                     const EnumerationLimits& limits) {
  schedule.validate();
  if (state.dim() != schedule.registry[0].dim())
    throw ValidationError("quasi_distribution: state dimension mismatch");

  std::vector<MidpointClasses> steps;
  steps.reserve(schedule.steps.size());
  for (int t = 0; t < schedule.step_count(); ++t)
    steps.push_back(midpoint_classes(schedule.observable_at(t)));

  Enumerator en{steps, limits, {}, 0, {}};
  en.run(state.matrix(), 0);

  std::vector<std::vector<double>> support;
  support.reserve(steps.size());
  for (const auto& mc : steps) support.push_back(mc.values);

  std::erase_if(en.atoms, [&](const auto& kv) {
    return std::abs(kv.second) < limits.prune_weight;
  });
  return QuasiDistribution(std::move(support), std::move(en.atoms));
}

QuasiDistribution marginalize(const QuasiDistribution& q, int step) {
  if (step < 0 || step >= q.step_count())
    throw ValidationError("marginalize: step out of range");
  std::vector<std::vector<double>> support = q.support();
  support.erase(support.begin() + step);
  std::map<std::vector<int>, double> atoms;
  for (const auto& [key, w] : q.atoms()) {
    std::vector<int> reduced = key;
    reduced.erase(reduced.begin() + step);
    auto [it, fresh] = atoms.emplace(std::move(reduced), w);
    if (!fresh) it->second += w;
  }
  return QuasiDistribution(std::move(support), std::move(atoms));
}

void MemoryKernel::validate() const {
  for (const auto& [lag, w] : sym)
    if (lag < 0 && w != 0.0)
      throw ValidationError(
          "memory kernel: sym kernel must be causal (no negative lags)");
}

namespace {

// Maps schedule times onto an integer grid via a tolerant real gcd.
struct TimeGrid {
  double origin = 0.0;
  double unit = 1.0;
  std::vector<long> ticks;
};

double real_gcd(double a, double b, double eps) {
  a = std::abs(a);
  b = std::abs(b);
  while (b > eps) {
    double r = std::fmod(a, b);
    if (r > b - eps) r = 0.0;  // landed just under a full multiple
    a = b;
    b = r;
  }
  return a;
}

TimeGrid make_time_grid(const std::vector<double>& times) {
  TimeGrid g;
  if (times.empty()) return g;
  g.origin = times[0];
  double scale = 0.0;
  for (double t : times) scale = std::max(scale, std::abs(t - g.origin));
  const double eps = std::max(scale, 1.0) * 1e-9;
  double gcd = 0.0;
  for (double t : times) {
    const double d = std::abs(t - g.origin);
    if (d <= eps) continue;
    gcd = (gcd <= eps) ? d : real_gcd(gcd, d, eps);
  }
  g.unit = (gcd <= eps) ? 1.0 : gcd;
  g.ticks.reserve(times.size());
  for (double t : times) {
    const double ratio = (t - g.origin) / g.unit;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6)
      throw ValidationError(
          "schedule times do not lie on a common integer grid (offending "
          "time " +
          std::to_string(t) + ")");
    g.ticks.push_back(static_cast<long>(rounded));
  }
  return g;
}

enum class InsertionType { Sym = 0, Comm = 1 };

struct Insertion {
  long tick;
  int origin_step;
  InsertionType type;
  int selection_pos;
  double coeff;
};

bool insertion_before(const Insertion& a, const Insertion& b) {
  if (a.tick != b.tick) return a.tick < b.tick;
  if (a.origin_step != b.origin_step) return a.origin_step < b.origin_step;
  if (a.type != b.type) return a.type < b.type;  // sym before comm
  return a.selection_pos < b.selection_pos;
}

}  // namespace

double q_correlator(const DensityState& state, const Schedule& schedule,
                    const MemoryKernel& kernel,
                    const std::vector<int>& selection,
                    CorrelatorDiagnostics* diag) {
  schedule.validate();
  kernel.validate();
  for (int s : selection)
    if (s < 0 || s >= schedule.step_count())
      throw ValidationError("q_correlator: selection index out of range");

  std::vector<double> times;
  times.reserve(schedule.steps.size());
  for (const Step& s : schedule.steps) times.push_back(s.time);
  const TimeGrid grid = make_time_grid(times);

  // Insertion options per selected observation.
  std::vector<std::vector<Insertion>> options;
  for (std::size_t p = 0; p < selection.size(); ++p) {
    const int s = selection[p];
    std::vector<Insertion> opts;
    for (const auto& [lag, w] : kernel.sym)
      if (w != 0.0)
        opts.push_back({grid.ticks[s] - lag, s, InsertionType::Sym,
                        static_cast<int>(p), w});
    for (const auto& [lag, w] : kernel.comm)
      if (w != 0.0)
        opts.push_back({grid.ticks[s] - lag, s, InsertionType::Comm,
                        static_cast<int>(p), 0.5 * w});
    options.push_back(std::move(opts));
  }

  // Heisenberg-evolved operators, cached per (observable id, tick).
  std::map<std::pair<int, long>, Matrix> evolved;
  auto operator_at = [&](int step, long tick) -> const Matrix& {
    const int id = schedule.steps[step].observable;
    auto key = std::make_pair(id, tick);
    auto it = evolved.find(key);
    if (it != evolved.end()) return it->second;
    Matrix m;
    if (schedule.hamiltonian) {
      const double t = grid.origin + static_cast<double>(tick) * grid.unit;
      m = evolve_observable(schedule.registry[id], *schedule.hamiltonian, t)
              .matrix();
    } else {
      m = schedule.registry[id].matrix();
    }
    return evolved.emplace(key, std::move(m)).first->second;
  };

  double total = 0.0;
  std::vector<Insertion> term(selection.size());
  bool warned = false;

  auto accumulate_term = [&]() {
    std::vector<Insertion> ordered = term;
    std::stable_sort(ordered.begin(), ordered.end(), insertion_before);
    if (diag && !warned) {
      for (std::size_t i = 0; i + 1 < ordered.size(); ++i)
        if (ordered[i].tick == ordered[i + 1].tick) {
          const Matrix& a = operator_at(ordered[i].origin_step,
                                        ordered[i].tick);
          const Matrix& b = operator_at(ordered[i + 1].origin_step,
                                        ordered[i + 1].tick);
          const double scale =
              a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();
          if ((a * b - b * a).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            diag->equal_time_noncommuting = true;
            diag->warnings.push_back(
                "equal-time non-commuting insertions ordered by (step, "
                "sym-before-comm); result is convention-dependent");
            warned = true;
            break;
          }
        }
    }
    double coeff = 1.0;
    for (const Insertion& ins : ordered) coeff *= ins.coeff;
    Matrix x = state.matrix();
    for (const Insertion& ins : ordered) {
      const Matrix& a = operator_at(ins.origin_step, ins.tick);
      x = (ins.type == InsertionType::Sym) ? apply_sym(a, x)
                                           : apply_comm(a, x);
    }
    total += coeff * x.trace().real();
  };

  // Distribute the product of per-observation insertion sums.
  auto expand = [&](auto&& self, std::size_t p) -> void {
    if (p == options.size()) {
      accumulate_term();
      return;
    }
    for (const Insertion& ins : options[p]) {
      term[p] = ins;
      self(self, p + 1);
    }
  };
  expand(expand, 0);
  return total;
}

}  // namespace qp
