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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qp/core.hpp"
#include "support/oracles.hpp"

using namespace qp;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return m;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("vec/unvec round trip and kron identity") {
  std::mt19937 rng(7);
  Matrix a = testing::random_hermitian(3, rng);
  CHECK(max_abs(unvec(vec(a), 3) - a) == 0.0);

  // vec(A X B) = (B^T kron A) vec(X)
  Matrix b = testing::random_hermitian(3, rng);
  Matrix x = testing::random_hermitian(3, rng);
  CVector lhs = vec(a * x * b);
  CVector rhs = kron(b.transpose(), a) * vec(x);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian validation names the offending entry") {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(0, 0);
  CHECK_THROWS_WITH_AS(HermitianObservable{m}, doctest::Contains("(0,1)"),
                       ValidationError);

  Matrix big = Matrix::Identity(9, 9);
  CHECK_THROWS_AS(HermitianObservable{big}, ValidationError);

  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 0) = Complex(std::nan(""), 0);
  CHECK_THROWS_AS(HermitianObservable{nan}, ValidationError);
}

TEST_CASE("density state validation") {
  CHECK_THROWS_AS(DensityState(2.0 * Matrix::Identity(2, 2)),
                  ValidationError);
  Matrix neg(2, 2);
  neg << Complex(1.5, 0), Complex(0, 0), Complex(0, 0), Complex(-0.5, 0);
  CHECK_THROWS_AS(DensityState{neg}, ValidationError);

  CVector psi(2);
  psi << Complex(1, 0), Complex(1, 0);
  DensityState rho = DensityState::pure(psi);
  CHECK(std::abs(rho.matrix()(0, 1).real() - 0.5) < 1e-15);
}

TEST_CASE("hermitian_eig on sigma_x gives +-1 with (1 +- A)/2 projectors") {
  HermitianObservable a(pauli_x());
  SpectralDecomposition sd = hermitian_eig(a);
  REQUIRE(sd.levels() == 2);
  CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  Matrix minus = 0.5 * (Matrix::Identity(2, 2) - pauli_x());
  Matrix plus = 0.5 * (Matrix::Identity(2, 2) + pauli_x());
  CHECK(max_abs(sd.projectors[0] - minus) < 1e-12);
  CHECK(max_abs(sd.projectors[1] - plus) < 1e-12);
}

TEST_CASE("hermitian_eig identity matrix collapses to one level") {
  HermitianObservable a(Matrix::Identity(3, 3));
  SpectralDecomposition sd = hermitian_eig(a);
  REQUIRE(sd.levels() == 1);
  CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(max_abs(sd.projectors[0] - Matrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("hermitian_eig random 4x4: reconstruction and charpoly oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    HermitianObservable a(testing::random_hermitian(4, rng));
    SpectralDecomposition sd = hermitian_eig(a);
    CHECK(max_abs(sd.reconstruct() - a.matrix()) < 1e-10);

    // projector algebra
    Matrix sum = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < sd.projectors.size(); ++i) {
      sum += sd.projectors[i];
      CHECK(max_abs(sd.projectors[i] * sd.projectors[i] - sd.projectors[i]) <
            1e-10);
      for (std::size_t j = i + 1; j < sd.projectors.size(); ++j)
        CHECK(max_abs(sd.projectors[i] * sd.projectors[j]) < 1e-10);
    }
    CHECK(max_abs(sum - Matrix::Identity(4, 4)) < 1e-10);

    std::vector<double> oracle = testing::charpoly_roots(a.matrix());
    // expand merged levels by projector rank
    std::vector<double> mine;
    for (int k = 0; k < sd.levels(); ++k) {
      const int rank =
          static_cast<int>(std::round(sd.projectors[k].trace().real()));
      for (int r = 0; r < rank; ++r) mine.push_back(sd.eigenvalues[k]);
    }
    REQUIRE(mine.size() == oracle.size());
    for (std::size_t i = 0; i < mine.size(); ++i)
      CHECK(mine[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
  }
}

TEST_CASE("hermitian_eig merges degenerate levels") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  SpectralDecomposition sd = hermitian_eig(HermitianObservable(m));
  REQUIRE(sd.levels() == 2);
  CHECK(sd.projectors[0].trace().real() == doctest::Approx(2.0));
}

TEST_CASE("superoperator actions match their operator definitions") {
  std::mt19937 rng(23);
  HermitianObservable a(testing::random_hermitian(3, rng));
  Matrix x = testing::random_hermitian(3, rng);

  CHECK(max_abs(superop_left(a).apply(x) - a.matrix() * x) < 1e-12);
  CHECK(max_abs(superop_right(a).apply(x) - x * a.matrix()) < 1e-12);
  CHECK(max_abs(superop_sym(a).apply(x) - apply_sym(a.matrix(), x)) < 1e-12);
  CHECK(max_abs(superop_comm(a).apply(x) - apply_comm(a.matrix(), x)) <
        1e-12);

  // 2 sym = left + right, i comm = left - right
  Matrix two_sym = 2.0 * superop_sym(a).action;
  Matrix lr = superop_left(a).action + superop_right(a).action;
  CHECK(max_abs(two_sym - lr) < 1e-12);
  Matrix i_comm = Complex(0, 1) * superop_comm(a).action;
  Matrix lmr = superop_left(a).action - superop_right(a).action;
  CHECK(max_abs(i_comm - lmr) < 1e-12);
}

TEST_CASE("sym superoperator of sigma_x reproduces the 4x4 half matrix") {
  Superoperator s = superop_sym(HermitianObservable(pauli_x()));
  Matrix expected(4, 4);
  expected << 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0;
  expected *= 0.5;
  CHECK(max_abs(s.action - expected) < 1e-12);

  // and their eigenvalues are the midpoints 1, 0, 0, -1
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.action);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(0.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(0.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0));

  Superoperator sb = superop_sym(HermitianObservable(pauli_z()));
  Matrix eb = Matrix::Zero(4, 4);
  eb(0, 0) = 1.0;
  eb(3, 3) = -1.0;
  CHECK(max_abs(sb.action - eb) < 1e-12);
}

TEST_CASE("sym of a diagonal observable fixes its eigenoperators") {
  HermitianObservable b(pauli_z());
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1.0;  // |+><+|
  CHECK(max_abs(superop_sym(b).apply(proj) - proj) < 1e-12);
}

TEST_CASE("commutator superoperator is traceless on random operators") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  HermitianObservable a(testing::random_hermitian(3, rng));
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x(i, j) = Complex(u(rng), u(rng));
    CHECK(std::abs(apply_comm(a.matrix(), x).trace()) < 1e-12);
  }
}

TEST_CASE("sym superoperator is self-adjoint for the HS inner product") {
  std::mt19937 rng(37);
  HermitianObservable a(testing::random_hermitian(4, rng));
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = testing::random_hermitian(4, rng);
    Matrix y = testing::random_hermitian(4, rng);
    Complex lhs = (y.adjoint() * apply_sym(a.matrix(), x)).trace();
    Complex rhs = (apply_sym(a.matrix(), y).adjoint() * x).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("superoperator composition is associative, identity is neutral") {
  std::mt19937 rng(41);
  Superoperator f = superop_sym(HermitianObservable(
      testing::random_hermitian(2, rng)));
  Superoperator g = superop_comm(HermitianObservable(
      testing::random_hermitian(2, rng)));
  Superoperator h = superop_left(HermitianObservable(
      testing::random_hermitian(2, rng)));
  Matrix lhs = f.compose(g.compose(h)).action;
  Matrix rhs = f.compose(g).compose(h).action;
  CHECK(max_abs(lhs - rhs) < 1e-12);

  Superoperator id = Superoperator::identity(2);
  CHECK(max_abs(f.compose(id).action - f.action) < 1e-15);
  Matrix x = testing::random_hermitian(2, rng);
  CHECK(max_abs(id.apply(x) - x) == 0.0);
}

TEST_CASE("evolve_observable at t = 0 is the identity map") {
  std::mt19937 rng(43);
  HermitianObservable a(testing::random_hermitian(3, rng));
  HermitianObservable h(testing::random_hermitian(3, rng));
  CHECK(max_abs(evolve_observable(a, h, 0.0).matrix() - a.matrix()) < 1e-12);
}

TEST_CASE("qubit rotation alternates sigma_x toward sigma_z") {
  // H = i(|-><+| - |+><-|) = sigma_y; exp(iHt) A exp(-iHt) rotates
  // cos(2t) sigma_x + sin(2t) sigma_z (checked against the expm oracle).
  HermitianObservable a(pauli_x());
  HermitianObservable h(pauli_y());

  auto oracle = [&](double t) {
    Matrix u = testing::expm(Complex(0, t) * pauli_y());
    return (u * pauli_x() * u.adjoint()).eval();
  };

  for (double t : {0.3, M_PI / 4, M_PI / 2, 1.7, 3.0}) {
    Matrix mine = evolve_observable(a, h, t).matrix();
    CHECK(max_abs(mine - oracle(t)) < 1e-12);
    Matrix expected = std::cos(2 * t) * pauli_x() + std::sin(2 * t) * pauli_z();
    CHECK(max_abs(mine - expected) < 1e-12);
  }

  // the quarter period swaps the pair: t = pi/4 lands on sigma_z, and a
  // half period later the sign flips
  CHECK(max_abs(evolve_observable(a, h, M_PI / 4).matrix() - pauli_z()) <
        1e-12);
  CHECK(max_abs(evolve_observable(a, h, 3 * M_PI / 4).matrix() + pauli_z()) <
        1e-12);
  CHECK(max_abs(evolve_observable(a, h, M_PI / 2).matrix() + pauli_x()) <
        1e-12);
}

TEST_CASE("unitary evolution preserves the spectrum") {
  std::mt19937 rng(47);
  HermitianObservable a(testing::random_hermitian(4, rng));
  HermitianObservable h(testing::random_hermitian(4, rng));
  SpectralDecomposition before = hermitian_eig(a);
  SpectralDecomposition after = hermitian_eig(evolve_observable(a, h, 0.83));
  REQUIRE(before.levels() == after.levels());
  for (int k = 0; k < before.levels(); ++k)
    CHECK(after.eigenvalues[k] ==
          doctest::Approx(before.eigenvalues[k]).epsilon(1e-10));
}
