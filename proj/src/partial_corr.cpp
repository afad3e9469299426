#include "dbnad/partial_corr.hpp"

#include <cmath>
#include <vector>

#include "dbnad/error.hpp"

namespace dbnad {

double long_run_partial(const Matrix& R, int i, int j, std::span<const int> given) {
  std::vector<int> vars{i, j};
  vars.insert(vars.end(), given.begin(), given.end());
  const int m = static_cast<int>(vars.size());
  Matrix sub(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) sub(a, b) = R(vars[a], vars[b]);
  Eigen::LLT<Matrix> llt(sub);
  if (llt.info() != Eigen::Success) throw NumericError("long_run_partial: singular or indefinite sub-block");
  const Matrix K = llt.solve(Matrix::Identity(m, m));
  return -K(0, 1) / std::sqrt(K(0, 0) * K(1, 1));
}

double recursion_drop(double rho_ij_given_z, double rho_ik, double rho_jk) {
  return rho_ij_given_z * std::sqrt((1.0 - rho_ik * rho_ik) * (1.0 - rho_jk * rho_jk)) + rho_ik * rho_jk;
}

double recursion_add(double rho_ij, double rho_ik, double rho_jk) {
  const double denom = std::sqrt((1.0 - rho_ik * rho_ik) * (1.0 - rho_jk * rho_jk));
  if (!(denom > 0.0)) throw NumericError("recursion_add: conditioning correlation at +-1");
  return (rho_ij - rho_ik * rho_jk) / denom;
}

double partial_corr_recursive(const Matrix& R, int i, int j, std::span<const int> given) {
  // Q holds correlations among the remaining variables conditional on the
  // conditioning variables eliminated so far.
  std::vector<int> vars(given.begin(), given.end());
  vars.push_back(i);
  vars.push_back(j);
  const int m = static_cast<int>(vars.size());
  Matrix Q(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) Q(a, b) = R(vars[a], vars[b]);
  for (int k = 0; k + 2 < m; ++k) {
    Matrix next = Q;
    for (int a = k + 1; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        next(a, b) = recursion_add(Q(a, b), Q(a, k), Q(b, k));
        next(b, a) = next(a, b);
      }
    Q = std::move(next);
  }
  return Q(m - 2, m - 1);
}

}  // namespace dbnad
