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

#include "qp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace qp {

int multi_degree(const MultiIndex& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

namespace {

void gen_indices(int variables, int budget, MultiIndex& cur,
                 std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == variables) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= budget; ++e) {
    cur.push_back(e);
    gen_indices(variables, budget - e, cur, out);
    cur.pop_back();
  }
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double index_binomial(const MultiIndex& a, const MultiIndex& b) {
  double c = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) c *= binomial(a[i], b[i]);
  return c;
}

// Visit every g with 0 <= g <= b coordinatewise.
void for_each_sub(const MultiIndex& b, const std::function<void(
                                           const MultiIndex&)>& fn) {
  MultiIndex g(b.size(), 0);
  for (;;) {
    fn(g);
    std::size_t i = 0;
    while (i < b.size() && g[i] == b[i]) g[i++] = 0;
    if (i == b.size()) return;
    ++g[i];
  }
}

template <typename Table>
void validate_table(const Table& t, double zeroth, const char* what) {
  const MultiIndex zero(t.variables, 0);
  auto it = t.values.find(zero);
  if (it == t.values.end() || std::abs(it->second - zeroth) > 1e-12)
    throw ValidationError(std::string(what) + ": zeroth entry must be " +
                          std::to_string(zeroth));
  for (const MultiIndex& a : multi_indices(t.variables, t.max_degree))
    if (!t.values.count(a))
      throw ValidationError(std::string(what) +
                            ": incomplete table (missing an index of degree " +
                            std::to_string(multi_degree(a)) + ")");
}

template <typename Table>
double table_at(const Table& t, const MultiIndex& a, const char* what) {
  auto it = t.values.find(a);
  if (it == t.values.end())
    throw ValidationError(std::string(what) + ": index not present");
  return it->second;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int variables, int max_degree) {
  std::vector<MultiIndex> all;
  MultiIndex cur;
  gen_indices(variables, max_degree, cur, all);
  std::sort(all.begin(), all.end(), [](const MultiIndex& a,
                                       const MultiIndex& b) {
    const int da = multi_degree(a), db = multi_degree(b);
    if (da != db) return da < db;
    return a < b;
  });
  return all;
}

double MomentTable::at(const MultiIndex& a) const {
  return table_at(*this, a, "moment table");
}

void MomentTable::validate() const { validate_table(*this, 1.0, "moments"); }

double CumulantTable::at(const MultiIndex& a) const {
  return table_at(*this, a, "cumulant table");
}

void CumulantTable::validate() const {
  validate_table(*this, 0.0, "cumulants");
}

MomentTable moments_of_quasi(const QuasiDistribution& q, int max_degree) {
  if (max_degree < 0 || max_degree > kDefaultMomentCap)
    throw ValidationError("moments_of_quasi: degree cap is " +
                          std::to_string(kDefaultMomentCap));
  MomentTable m;
  m.variables = q.step_count();
  m.max_degree = max_degree;
  for (const MultiIndex& a : multi_indices(m.variables, max_degree))
    m.values[a] = q.moment(a);
  return m;
}

CumulantTable moments_to_cumulants(const MomentTable& m) {
  m.validate();
  CumulantTable c;
  c.variables = m.variables;
  c.max_degree = m.max_degree;
  c.values[MultiIndex(m.variables, 0)] = 0.0;
  for (const MultiIndex& a : multi_indices(m.variables, m.max_degree)) {
    if (multi_degree(a) == 0) continue;
    std::size_t pivot = 0;
    while (a[pivot] == 0) ++pivot;
    MultiIndex b = a;
    b[pivot] -= 1;
    double sum = 0.0;
    for_each_sub(b, [&](const MultiIndex& g) {
      if (g == b) return;  // that term is the unknown C_a itself
      MultiIndex ge = g;
      ge[pivot] += 1;
      MultiIndex rest(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) rest[i] = b[i] - g[i];
      sum += index_binomial(b, g) * c.values.at(ge) * m.at(rest);
    });
    c.values[a] = m.at(a) - sum;
  }
  return c;
}

MomentTable cumulants_to_moments(const CumulantTable& c) {
  c.validate();
  MomentTable m;
  m.variables = c.variables;
  m.max_degree = c.max_degree;
  m.values[MultiIndex(c.variables, 0)] = 1.0;
  for (const MultiIndex& a : multi_indices(c.variables, c.max_degree)) {
    if (multi_degree(a) == 0) continue;
    std::size_t pivot = 0;
    while (a[pivot] == 0) ++pivot;
    MultiIndex b = a;
    b[pivot] -= 1;
    double sum = 0.0;
    for_each_sub(b, [&](const MultiIndex& g) {
      MultiIndex ge = g;
      ge[pivot] += 1;
      MultiIndex rest(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) rest[i] = b[i] - g[i];
      sum += index_binomial(b, g) * c.at(ge) * m.values.at(rest);
    });
    m.values[a] = sum;
  }
  return m;
}

CumulantTable combine_independent(const CumulantTable& a,
                                  const CumulantTable& b) {
  if (a.variables != b.variables || a.max_degree != b.max_degree)
    throw ValidationError("combine_independent: table shapes differ");
  a.validate();
  b.validate();
  CumulantTable out = a;
  for (auto& [k, v] : out.values) v += b.at(k);
  return out;
}

CumulantTable gaussian_cumulants(int variables,
                                 const std::vector<double>& variances,
                                 int max_degree) {
  if (static_cast<int>(variances.size()) != variables)
    throw ValidationError("gaussian_cumulants: variance count mismatch");
  CumulantTable c;
  c.variables = variables;
  c.max_degree = max_degree;
  for (const MultiIndex& a : multi_indices(variables, max_degree))
    c.values[a] = 0.0;
  for (int i = 0; i < variables; ++i) {
    if (variances[i] < 0.0)
      throw ValidationError("gaussian_cumulants: negative variance");
    if (max_degree >= 2) {
      MultiIndex a(variables, 0);
      a[i] = 2;
      c.values[a] = variances[i];
    }
  }
  return c;
}

MomentMatrix moment_matrix(const MomentTable& m, int degree) {
  m.validate();
  if (2 * degree > m.max_degree)
    throw ValidationError(
        "moment_matrix: table must be complete to twice the matrix degree");
  MomentMatrix mm;
  mm.basis = multi_indices(m.variables, degree);
  mm.scales.assign(m.variables, 1.0);
  for (int i = 0; i < m.variables; ++i) {
    MultiIndex sq(m.variables, 0);
    sq[i] = 2;
    const double second = m.at(sq);
    if (second > 0.0) mm.scales[i] = 1.0 / std::sqrt(second);
  }
  const int size = static_cast<int>(mm.basis.size());
  mm.entries.resize(size, size);
  for (int r = 0; r < size; ++r)
    for (int col = r; col < size; ++col) {
      MultiIndex sum(m.variables);
      double scale = 1.0;
      for (int i = 0; i < m.variables; ++i) {
        sum[i] = mm.basis[r][i] + mm.basis[col][i];
        scale *= std::pow(mm.scales[i], sum[i]);
      }
      const double v = m.at(sum) * scale;
      mm.entries(r, col) = v;
      mm.entries(col, r) = v;
    }
  return mm;
}

PsdReport psd_check(const MomentMatrix& mm, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm.entries);
  PsdReport r;
  r.min_eigenvalue = es.eigenvalues()(0);
  r.trace = mm.entries.trace();
  r.witness = es.eigenvectors().col(0);
  r.is_psd = r.min_eigenvalue >= -tol * std::max(r.trace, 0.0);
  return r;
}

int poly_degree(const Polynomial& p) {
  int d = 0;
  for (const auto& [a, c] : p)
    if (c != 0.0) d = std::max(d, multi_degree(a));
  return d;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ia, ca] : a)
    for (const auto& [ib, cb] : b) {
      if (ia.size() != ib.size())
        throw ValidationError("poly_mul: variable counts differ");
      MultiIndex s(ia.size());
      for (std::size_t i = 0; i < ia.size(); ++i) s[i] = ia[i] + ib[i];
      out[s] += ca * cb;
    }
  return out;
}

Polynomial witness_polynomial(const MomentMatrix& mm,
                              const Eigen::VectorXd& v) {
  Polynomial p;
  for (std::size_t k = 0; k < mm.basis.size(); ++k) {
    double coeff = v(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < mm.scales.size(); ++i)
      coeff *= std::pow(mm.scales[i], mm.basis[k][i]);
    if (coeff != 0.0) p[mm.basis[k]] += coeff;
  }
  return p;
}

double expectation_of_polynomial(const MomentTable& m, const Polynomial& p) {
  double s = 0.0;
  for (const auto& [a, c] : p) {
    if (c == 0.0) continue;
    if (static_cast<int>(a.size()) != m.variables)
      throw ValidationError(
          "expectation_of_polynomial: variable count mismatch");
    if (multi_degree(a) > m.max_degree)
      throw ValidationError("expectation_of_polynomial: degree overflow");
    s += c * m.at(a);
  }
  return s;
}

CauchySchwarzReport cauchy_schwarz_check(const MomentTable& m,
                                         const Polynomial& u,
                                         const Polynomial& v) {
  if (poly_degree(u) + poly_degree(v) > m.max_degree)
    throw ValidationError("cauchy_schwarz_check: degree overflow");
  CauchySchwarzReport r;
  const double uv = expectation_of_polynomial(m, poly_mul(u, v));
  r.lhs = uv * uv;
  r.rhs = expectation_of_polynomial(m, poly_mul(u, u)) *
          expectation_of_polynomial(m, poly_mul(v, v));
  r.violated = r.lhs > r.rhs + 1e-12;
  return r;
}

std::vector<Polynomial> positive_polynomial_catalog() {
  Polynomial square_gap{{{2, 0}, 1.0}, {{1, 2}, -2.0}, {{0, 4}, 1.0}};
  Polynomial motzkin{
      {{2, 4}, 1.0}, {{4, 0}, 1.0}, {{0, 2}, 1.0}, {{2, 2}, -3.0}};
  Polynomial three_var{{{0, 0, 0}, 1.0},
                       {{2, 2, 0}, 1.0},
                       {{0, 2, 2}, 1.0},
                       {{2, 0, 2}, 1.0},
                       {{1, 1, 1}, -4.0}};
  return {square_gap, motzkin, three_var};
}

namespace {

constexpr double kPsdTol = 1e-9;
constexpr double kVarianceCap = 1e12;

}  // namespace

CalibrationResult calibrate_gaussian_noise(const MomentTable& q_moments,
                                           int degree, double bracket_width,
                                           const std::vector<double>& dir) {
  q_moments.validate();
  if (2 * degree > q_moments.max_degree)
    throw ValidationError(
        "calibrate_gaussian_noise: moments must be complete to twice the "
        "degree");
  if (!(bracket_width > 0.0))
    throw ValidationError("calibrate_gaussian_noise: bracket width must be "
                          "positive");
  std::vector<double> direction = dir;
  if (direction.empty()) direction.assign(q_moments.variables, 1.0);
  if (static_cast<int>(direction.size()) != q_moments.variables)
    throw ValidationError("calibrate_gaussian_noise: direction size mismatch");
  double dmax = 0.0;
  for (double d : direction) {
    if (d < 0.0)
      throw ValidationError(
          "calibrate_gaussian_noise: direction must be nonnegative");
    dmax = std::max(dmax, d);
  }
  if (dmax == 0.0)
    throw ValidationError("calibrate_gaussian_noise: zero direction");

  const CumulantTable cq = moments_to_cumulants(q_moments);
  auto report_at = [&](double v) {
    std::vector<double> variances(direction.size());
    for (std::size_t i = 0; i < direction.size(); ++i)
      variances[i] = v * direction[i];
    const CumulantTable cn = gaussian_cumulants(
        q_moments.variables, variances, q_moments.max_degree);
    const MomentTable mp = cumulants_to_moments(combine_independent(cq, cn));
    return psd_check(moment_matrix(mp, degree), kPsdTol);
  };

  CalibrationResult out;
  PsdReport at_zero = report_at(0.0);
  if (at_zero.is_psd) {
    out.variance = 0.0;
    out.lo = 0.0;
    out.hi = 0.0;
    out.min_eigenvalue_at_variance = at_zero.min_eigenvalue;
    return out;
  }

  double lo = 0.0, hi = 1.0;
  while (!report_at(hi).is_psd) {
    lo = hi;
    hi *= 2.0;
    if (hi > kVarianceCap)
      throw ConvergenceError(
          "calibrate_gaussian_noise: no PSD variance below " +
          std::to_string(kVarianceCap) + " (min eigenvalue at cap: " +
          std::to_string(report_at(kVarianceCap).min_eigenvalue) + ")");
  }

  // Empirical monotonicity probe of the decision margin.
  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const double v = hi * (k + 1) / 20.0;
    const PsdReport r = report_at(v);
    const double margin =
        r.min_eigenvalue / std::max(std::abs(r.trace), 1e-300);
    if (margin < prev - 1e-12) {
      monotone = false;
      break;
    }
    prev = margin;
  }

  if (monotone) {
    while (hi - lo > bracket_width) {
      const double mid = 0.5 * (lo + hi);
      if (report_at(mid).is_psd)
        hi = mid;
      else
        lo = mid;
    }
  } else {
    out.scan_used = true;
    double v = lo;
    std::size_t iter = 0;
    while (!report_at(v + bracket_width).is_psd) {
      v += bracket_width;
      if (++iter > 100'000'000)
        throw ConvergenceError(
            "calibrate_gaussian_noise: scan exceeded iteration budget");
    }
    lo = v;
    hi = v + bracket_width;
  }

  out.lo = lo;
  out.hi = hi;
  out.variance = hi;
  out.min_eigenvalue_at_variance = report_at(hi).min_eigenvalue;
  return out;
}

}  // namespace qp
