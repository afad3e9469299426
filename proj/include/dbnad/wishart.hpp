#pragma once

#include <functional>

#include "dbnad/rng.hpp"
#include "dbnad/types.hpp"

namespace dbnad {

/// Wishart_n(dof, scale) draw by the Bartlett decomposition. Requires
/// dof > n - 1 and a PD scale.
Matrix sample_wishart(double dof, const Matrix& scale, Rng& rng);

/// Log-density of Wishart_n(dof, scale) at PD `x`.
double wishart_logpdf(const Matrix& x, double dof, const Matrix& scale);

/// Correlation matrix and variances of a covariance matrix. The diagonal of
/// `r` is exactly 1.
struct CorrScale {
  Matrix r;
  Vector d;
};
CorrScale split_covariance(const Matrix& sigma);
Matrix join_covariance(const Matrix& r, const Vector& d);

/// Density of (R, D) when D^{1/2} R D^{1/2} ~ Wishart(dof, scale):
/// the Wishart density times prod d_i^{(n-1)/2}.
double log_f_rd(const Matrix& r, const Vector& d, double dof, const Matrix& scale);

/// Parameter-extended Metropolis-Hastings for a correlation matrix.
///
/// The auxiliary variances D carry the proposal scale; the proposal is
/// Wishart(N, Sigma/N) with Sigma = D^{1/2} R D^{1/2}. N is tuned on the log
/// scale toward the target acceptance, kept in (n + 2, kMaxDof).
class PxmhSampler {
 public:
  static constexpr double kMaxDof = 1e8;

  PxmhSampler(Matrix r, double dof, double target = 0.234);

  const Matrix& r() const { return r_; }
  const Vector& d() const { return d_; }
  double dof() const { return dof_; }
  int iteration() const { return m_; }

  struct Step {
    bool accepted = false;
    double accept_prob = 0.0;
  };

  /// One update. `log_target(R)` is the unnormalised log full conditional of
  /// the correlation matrix; `current_log_target` its value at r(). Returns
  /// the accept decision; on acceptance r() holds the new matrix and
  /// `current_log_target` is updated.
  Step step(const std::function<double(const Matrix&)>& log_target, double& current_log_target, Rng& rng,
            bool adapt = true);

  /// Sets the state, e.g. after an external change.
  void reset(Matrix r);

 private:
  Matrix r_;
  Vector d_;
  double dof_;
  double target_;
  int m_ = 0;
};

}  // namespace dbnad
