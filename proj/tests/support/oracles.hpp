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

// Test-only oracles, independent of the library's computation paths.

#ifndef QP_TESTS_SUPPORT_ORACLES_HPP_
#define QP_TESTS_SUPPORT_ORACLES_HPP_

#include <random>
#include <vector>

#include "qp/core.hpp"

namespace qp::testing {

// Matrix exponential by scaling-and-squaring with a Taylor core.
Matrix expm(const Matrix& a);

// Real roots (ascending) of the characteristic polynomial of a Hermitian
// matrix, via Faddeev-LeVerrier coefficients and derivative-chain root
// isolation. Intended for matrices with simple spectrum.
std::vector<double> charpoly_roots(const Matrix& hermitian);

// Gauss-Hermite rule for the weight exp(-x^2) on the whole line.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// Finitely supported distribution, for exact discrete convolutions.
struct PointMass {
  std::vector<double> point;
  double weight;
};
std::vector<PointMass> convolve(const std::vector<PointMass>& a,
                                const std::vector<PointMass>& b);
double moment_of(const std::vector<PointMass>& d,
                 const std::vector<int>& exponents);

Matrix random_hermitian(int d, std::mt19937& rng);
DensityState random_density(int d, std::mt19937& rng);

}  // namespace qp::testing

#endif  // QP_TESTS_SUPPORT_ORACLES_HPP_
