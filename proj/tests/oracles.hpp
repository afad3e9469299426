#pragma once

// Independent reference computations shared by the unit and acceptance
// tests.

#include <cmath>
#include <random>

#include "dbnad/dag.hpp"
#include "dbnad/dependence.hpp"
#include "dbnad/rng.hpp"

namespace oracle {

using dbnad::Matrix;
using dbnad::Vector;

/// Random correlation matrix from a random factor covariance.
inline Matrix random_correlation(int n, dbnad::Rng& rng, double ridge = 0.3) {
  Matrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = dbnad::standard_normal(rng);
  const Matrix c = w * w.transpose() + ridge * Matrix::Identity(n, n);
  Matrix r = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r(i, j) = r(j, i) = c(i, j) / std::sqrt(c(i, i) * c(j, j));
  return r;
}

/// Random DAG: a random permutation defines the order, each forward pair is
/// an edge with probability p.
inline dbnad::Dag random_dag(int n, double p, dbnad::Rng& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  dbnad::Dag g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (dbnad::uniform01(rng) < p) g.add_edge(perm[a], perm[b]);
  return g;
}

/// Correlation matrix implied by DAG partials through a linear structural
/// equation model. Parents are whitened in slot order; the semi-partial
/// correlation with slot k is s_k = c_k sqrt(1 - sum_{l<k} s_l^2), the
/// covariance with the parents is L s (L the Cholesky factor of R_PP), and
/// every other predecessor j gets beta^T R_Pj with beta = R_PP^{-1} R_Pi.
inline Matrix sem_correlation(const dbnad::Dag& g, const std::vector<int>& ordering,
                              const std::vector<dbnad::NodePartials>& partials) {
  const int n = g.size();
  Matrix R = Matrix::Identity(n, n);
  for (std::size_t idx = 0; idx < ordering.size(); ++idx) {
    const int i = ordering[idx];
    const auto& P = partials[i].parents;
    const int m = static_cast<int>(P.size());
    Vector beta = Vector::Zero(m);
    if (m > 0) {
      Matrix rpp(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) rpp(a, b) = R(P[a], P[b]);
      const Matrix L = Eigen::LLT<Matrix>(rpp).matrixL();
      Vector s(m);
      double used = 0.0;
      for (int k = 0; k < m; ++k) {
        s(k) = partials[i].rho[k] * std::sqrt(1.0 - used);
        used += s(k) * s(k);
      }
      const Vector rpi = L * s;
      for (int a = 0; a < m; ++a) R(i, P[a]) = R(P[a], i) = rpi(a);
      beta = rpp.llt().solve(rpi);
    }
    for (std::size_t jdx = 0; jdx < idx; ++jdx) {
      const int j = ordering[jdx];
      if (g.has_edge(j, i)) continue;
      double v = 0.0;
      for (int a = 0; a < m; ++a) v += beta(a) * R(P[a], j);
      R(i, j) = R(j, i) = v;
    }
  }
  return R;
}

}  // namespace oracle
