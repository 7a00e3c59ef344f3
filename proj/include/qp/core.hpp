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

#ifndef QP_CORE_HPP_
#define QP_CORE_HPP_

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Superoperators are d^2 x d^2 and branch enumeration grows combinatorially,
// so the operator dimension is capped at the API boundary.
inline constexpr int kMaxDim = 8;
inline constexpr double kHermTol = 1e-12;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column-stacking vectorization: vec(X)(i + d*j) = X(i, j).
CVector vec(const Matrix& x);
Matrix unvec(const CVector& v, int dim);

// Kronecker product, used to assemble superoperator actions:
// vec(A X B) = (B^T (x) A) vec(X) under column stacking.
Matrix kron(const Matrix& a, const Matrix& b);

bool is_finite(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = kHermTol);

// Throws ValidationError naming the offending entry if `m` is not Hermitian
// within `tol` (absolute, entrywise), not finite, or larger than kMaxDim.
void require_hermitian(const Matrix& m, double tol, const std::string& what);

// A Hermitian matrix, validated on construction.
class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix m, double tol = kHermTol);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Matrix m_;
};

// A density matrix: Hermitian, unit trace, eigenvalues >= -1e-10.
class DensityState {
 public:
  explicit DensityState(Matrix m);
  static DensityState pure(const CVector& psi);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Matrix m_;
};

// Linear map on operators, stored as its matrix on column-stacked vectors.
struct Superoperator {
  int dim = 0;
  Matrix action;  // dim^2 x dim^2

  static Superoperator identity(int dim);

  Matrix apply(const Matrix& x) const;
  // (*this) after `inner`: (this ∘ inner)(X) = this(inner(X)).
  Superoperator compose(const Superoperator& inner) const;
  bool is_zero(double tol = 1e-12) const;
};

// Left/right multiplication, symmetrized product {A,.}/2, and the scaled
// commutator [A,.]/i. The symmetrized and commutator forms satisfy
// 2*sym = left + right and i*comm = left - right.
Superoperator superop_left(const HermitianObservable& a);
Superoperator superop_right(const HermitianObservable& a);
Superoperator superop_sym(const HermitianObservable& a);
Superoperator superop_comm(const HermitianObservable& a);

// Direct operator forms of the superoperator actions (cheaper than going
// through the d^2 x d^2 matrix when only the image is needed).
Matrix apply_sym(const Matrix& a, const Matrix& x);
Matrix apply_comm(const Matrix& a, const Matrix& x);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending, tolerance-merged
  std::vector<Matrix> projectors;   // Hermitian, idempotent, sum to identity

  Matrix reconstruct() const;
  int levels() const { return static_cast<int>(eigenvalues.size()); }
};

// Hermitian eigendecomposition with degeneracy merging. Eigenvalues closer
// than max(tol, 1e-9 * spectral range) are treated as one level; the
// quasiprobability branching keys on distinct levels, so near-degenerate
// pairs must not split into separate branches.
SpectralDecomposition hermitian_eig(const HermitianObservable& obs,
                                    double tol = kHermTol);

// Heisenberg evolution exp(+iHt) A exp(-iHt), computed via the spectral
// decomposition of H. The +iHt-on-the-left sign convention is fixed here
// and used everywhere.
HermitianObservable evolve_observable(const HermitianObservable& obs,
                                      const HermitianObservable& hamiltonian,
                                      double t);

}  // namespace qp

#endif  // QP_CORE_HPP_
