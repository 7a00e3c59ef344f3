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

#include "qp/core.hpp"

#include <cmath>
#include <sstream>

namespace qp {

CVector vec(const Matrix& x) {
  const int d = static_cast<int>(x.rows());
  CVector v(d * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) v(i + d * j) = x(i, j);
  return v;
}

Matrix unvec(const CVector& v, int dim) {
  Matrix x(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) x(i, j) = v(i + dim * j);
  return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

bool is_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

void require_hermitian(const Matrix& m, double tol, const std::string& what) {
  if (m.rows() != m.cols())
    throw ValidationError(what + ": matrix is not square");
  if (m.rows() < 1 || m.rows() > kMaxDim)
    throw ValidationError(what + ": dimension " + std::to_string(m.rows()) +
                          " outside supported range [1," +
                          std::to_string(kMaxDim) + "]");
  if (!is_finite(m)) throw ValidationError(what + ": non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
        std::ostringstream os;
        os << what << ": not Hermitian at entry (" << i << "," << j
           << "): " << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+")
           << std::abs(m(i, j).imag()) << "i vs conj of (" << j << "," << i
           << ")";
        throw ValidationError(os.str());
      }
}

HermitianObservable::HermitianObservable(Matrix m, double tol)
    : m_(std::move(m)) {
  require_hermitian(m_, tol, "observable");
}

DensityState::DensityState(Matrix m) : m_(std::move(m)) {
  require_hermitian(m_, kHermTol, "density state");
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-12 || std::abs(m_.trace().imag()) > 1e-12)
    throw ValidationError("density state: trace is " + std::to_string(tr) +
                          ", expected 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("density state: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
}

DensityState DensityState::pure(const CVector& psi) {
  const double n = psi.norm();
  if (n <= 0.0) throw ValidationError("density state: zero state vector");
  CVector u = psi / n;
  return DensityState(u * u.adjoint());
}

Superoperator Superoperator::identity(int dim) {
  return {dim, Matrix::Identity(dim * dim, dim * dim)};
}

Matrix Superoperator::apply(const Matrix& x) const {
  if (static_cast<int>(x.rows()) != dim || static_cast<int>(x.cols()) != dim)
    throw ValidationError("superoperator: operand dimension mismatch");
  return unvec(action * vec(x), dim);
}

Superoperator Superoperator::compose(const Superoperator& inner) const {
  if (inner.dim != dim)
    throw ValidationError("superoperator: composition dimension mismatch");
  return {dim, action * inner.action};
}

bool Superoperator::is_zero(double tol) const {
  return action.cwiseAbs().maxCoeff() <= tol;
}

Superoperator superop_left(const HermitianObservable& a) {
  const int d = a.dim();
  return {d, kron(Matrix::Identity(d, d), a.matrix())};
}

Superoperator superop_right(const HermitianObservable& a) {
  const int d = a.dim();
  return {d, kron(a.matrix().transpose(), Matrix::Identity(d, d))};
}

Superoperator superop_sym(const HermitianObservable& a) {
  Superoperator l = superop_left(a);
  Superoperator r = superop_right(a);
  return {l.dim, 0.5 * (l.action + r.action)};
}

Superoperator superop_comm(const HermitianObservable& a) {
  Superoperator l = superop_left(a);
  Superoperator r = superop_right(a);
  return {l.dim, Complex(0, -1) * (l.action - r.action)};
}

Matrix apply_sym(const Matrix& a, const Matrix& x) {
  return 0.5 * (a * x + x * a);
}

Matrix apply_comm(const Matrix& a, const Matrix& x) {
  return Complex(0, -1) * (a * x - x * a);
}

Matrix SpectralDecomposition::reconstruct() const {
  Matrix m = Matrix::Zero(projectors[0].rows(), projectors[0].cols());
  for (std::size_t k = 0; k < eigenvalues.size(); ++k)
    m += eigenvalues[k] * projectors[k];
  return m;
}

SpectralDecomposition hermitian_eig(const HermitianObservable& obs,
                                    double tol) {
  const Matrix& a = obs.matrix();
  require_hermitian(a, tol, "hermitian_eig input");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("hermitian_eig: eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Matrix& v = es.eigenvectors();
  const int d = static_cast<int>(a.rows());
  const double range = ev(d - 1) - ev(0);
  const double merge = std::max(tol, 1e-9 * range);

  SpectralDecomposition out;
  int k = 0;
  while (k < d) {
    int end = k + 1;
    while (end < d && ev(end) - ev(end - 1) <= merge) ++end;
    double level = 0.0;
    Matrix proj = Matrix::Zero(d, d);
    for (int c = k; c < end; ++c) {
      level += ev(c);
      proj += v.col(c) * v.col(c).adjoint();
    }
    out.eigenvalues.push_back(level / (end - k));
    out.projectors.push_back(std::move(proj));
    k = end;
  }
  return out;
}

HermitianObservable evolve_observable(const HermitianObservable& obs,
                                      const HermitianObservable& hamiltonian,
                                      double t) {
  if (obs.dim() != hamiltonian.dim())
    throw ValidationError("evolve_observable: dimension mismatch");
  SpectralDecomposition h = hermitian_eig(hamiltonian);
  const int d = obs.dim();
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < h.levels(); ++k)
    u += std::exp(Complex(0, h.eigenvalues[k] * t)) * h.projectors[k];
  Matrix evolved = u * obs.matrix() * u.adjoint();
  evolved = 0.5 * (evolved + evolved.adjoint().eval());  // strip rounding skew
  return HermitianObservable(std::move(evolved));
}

}  // namespace qp
