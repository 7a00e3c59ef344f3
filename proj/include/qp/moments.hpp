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

#ifndef QP_MOMENTS_HPP_
#define QP_MOMENTS_HPP_

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qp/quasiprob.hpp"

namespace qp {

using MultiIndex = std::vector<int>;

int multi_degree(const MultiIndex& a);
// All multi-indices over `variables` with degree <= max_degree, graded
// (degree-major) then lexicographic. This ordering fixes moment-matrix
// bases and serialization everywhere.
std::vector<MultiIndex> multi_indices(int variables, int max_degree);

// Complete store of moments M_alpha for all |alpha| <= max_degree; M_0 = 1.
struct MomentTable {
  int variables = 0;
  int max_degree = 0;
  std::map<MultiIndex, double> values;

  double at(const MultiIndex& a) const;
  void validate() const;
};

// Complete store of cumulants; C_0 = 0.
struct CumulantTable {
  int variables = 0;
  int max_degree = 0;
  std::map<MultiIndex, double> values;

  double at(const MultiIndex& a) const;
  void validate() const;
};

inline constexpr int kDefaultMomentCap = 12;

// Exact finite sums over atoms: M_alpha = sum_e w_e prod_t outcome_t^alpha_t.
MomentTable moments_of_quasi(const QuasiDistribution& q, int max_degree);

// Truncated log/exp of the moment generating series, realized through the
// recurrence M_{b+e_i} = sum_{g<=b} C(b,g) Cum_{g+e_i} M_{b-g}.
CumulantTable moments_to_cumulants(const MomentTable& m);
MomentTable cumulants_to_moments(const CumulantTable& c);

// Cumulants of independent distributions add.
CumulantTable combine_independent(const CumulantTable& a,
                                  const CumulantTable& b);

// Centered Gaussian product noise: only the second-order diagonal cumulants
// are nonzero.
CumulantTable gaussian_cumulants(int variables,
                                 const std::vector<double>& variances,
                                 int max_degree);

// Symmetric matrix M_{alpha+beta} over the monomial basis of degree <= D.
// Variables are rescaled to unit second moment before assembly (diagonal
// congruence; does not change the PSD verdict) and the scales are kept so
// witnesses can be mapped back to unscaled coefficients.
struct MomentMatrix {
  std::vector<MultiIndex> basis;
  std::vector<double> scales;  // per variable
  Eigen::MatrixXd entries;
};

MomentMatrix moment_matrix(const MomentTable& m, int degree);

struct PsdReport {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  Eigen::VectorXd witness;  // eigenvector of the smallest eigenvalue
};

// PSD test with eigenvalue tolerance relative to the trace: passes when
// min eigenvalue >= -tol * max(trace, 0). A failing witness encodes a
// square polynomial with negative expectation.
PsdReport psd_check(const MomentMatrix& mm, double tol);

using Polynomial = std::map<MultiIndex, double>;

int poly_degree(const Polynomial& p);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);

// The witness eigenvector as a polynomial in the original (unscaled)
// variables; its square has expectation min_eigenvalue * ||v||^2 under the
// table the matrix was built from.
Polynomial witness_polynomial(const MomentMatrix& mm,
                              const Eigen::VectorXd& v);

double expectation_of_polynomial(const MomentTable& m, const Polynomial& p);

struct CauchySchwarzReport {
  double lhs = 0.0;  // <u v>^2
  double rhs = 0.0;  // <u^2><v^2>
  bool violated = false;
};

CauchySchwarzReport cauchy_schwarz_check(const MomentTable& m,
                                         const Polynomial& u,
                                         const Polynomial& v);

// Nonnegative polynomials that are not sums of squares (except the first);
// tested by direct expectation rather than certified by the matrix.
std::vector<Polynomial> positive_polynomial_catalog();

struct CalibrationResult {
  double variance = 0.0;  // minimal passing isotropic variance (bracket top)
  double lo = 0.0;        // fails here, unless variance == 0
  double hi = 0.0;        // passes here
  double min_eigenvalue_at_variance = 0.0;
  bool scan_used = false;
};

// Minimal isotropic Gaussian variance v such that the degree-D moment
// matrix of Q convolved with that noise is PSD within 1e-9 * trace.
// Doubling brackets the crossing, bisection narrows it to bracket_width;
// if the 20-point monotonicity probe of the minimal eigenvalue fails, a
// linear scan with step bracket_width replaces the bisection. `direction`
// optionally fixes per-variable variance ratios (default isotropic); only
// the common scale is optimized.
CalibrationResult calibrate_gaussian_noise(
    const MomentTable& q_moments, int degree, double bracket_width,
    const std::vector<double>& direction = {});

}  // namespace qp

#endif  // QP_MOMENTS_HPP_
