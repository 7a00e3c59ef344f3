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

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace qp::testing {

Matrix expm(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Matrix b = a / std::pow(2.0, s);
  Matrix term = Matrix::Identity(d, d);
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (term * b) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

namespace {

// coeffs[i] multiplies x^i
double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i)
    d.push_back(c[i] * static_cast<double>(i));
  return d;
}

double bisect_root(const std::vector<double>& c, double lo, double hi) {
  double flo = poly_eval(c, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = poly_eval(c, mid);
    if ((flo <= 0 && fm <= 0) || (flo >= 0 && fm >= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> real_roots(const std::vector<double>& c) {
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};
  double bound = 0.0;
  for (std::size_t i = 0; i < deg; ++i)
    bound = std::max(bound, std::abs(c[i] / c[deg]));
  bound += 1.0;
  std::vector<double> crit = real_roots(poly_derivative(c));
  std::sort(crit.begin(), crit.end());
  std::vector<double> edges = {-bound};
  for (double x : crit) edges.push_back(x);
  edges.push_back(bound);
  std::vector<double> roots;
  double scale = 0.0;
  for (double ci : c) scale = std::max(scale, std::abs(ci));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const double fa = poly_eval(c, a), fb = poly_eval(c, b);
    if ((fa < 0) != (fb < 0)) {
      roots.push_back(bisect_root(c, a, b));
    } else if (i + 1 < edges.size() - 1 &&
               std::abs(fb) < 1e-10 * std::max(scale, 1.0)) {
      roots.push_back(b);  // critical point touching zero
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> charpoly_roots(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  // Faddeev-LeVerrier: p(x) = x^n + c_{n-1} x^{n-1} + ... + c_0.
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * (m + c[n - k + 1] * Matrix::Identity(n, n));
    c[n - k] = -m.trace().real() / k;
  }
  return real_roots(c);
}

GaussHermite gauss_hermite(int n) {
  GaussHermite gh;
  gh.nodes.assign(n, 0.0);
  gh.weights.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * gh.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * gh.nodes[1];
    else
      z = 2.0 * z - gh.nodes[i - 2];
    for (int its = 0; its < 200; ++its) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

std::vector<PointMass> convolve(const std::vector<PointMass>& a,
                                const std::vector<PointMass>& b) {
  std::vector<PointMass> out;
  for (const PointMass& pa : a)
    for (const PointMass& pb : b) {
      PointMass p;
      p.point.resize(pa.point.size());
      for (std::size_t i = 0; i < pa.point.size(); ++i)
        p.point[i] = pa.point[i] + pb.point[i];
      p.weight = pa.weight * pb.weight;
      out.push_back(std::move(p));
    }
  return out;
}

double moment_of(const std::vector<PointMass>& d,
                 const std::vector<int>& exponents) {
  double s = 0.0;
  for (const PointMass& p : d) {
    double term = p.weight;
    for (std::size_t i = 0; i < exponents.size(); ++i)
      term *= std::pow(p.point[i], exponents[i]);
    s += term;
  }
  return s;
}

Matrix random_hermitian(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = Complex(u(rng), 0.0);
    for (int j = i + 1; j < d; ++j) {
      m(i, j) = Complex(u(rng), u(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityState random_density(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(u(rng), u(rng));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityState(rho);
}

}  // namespace qp::testing
