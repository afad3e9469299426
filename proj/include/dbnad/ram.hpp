#pragma once

#include <functional>

#include "dbnad/rng.hpp"
#include "dbnad/types.hpp"

namespace dbnad {

inline constexpr double kTargetAcceptance = 0.234;

/// Robust adaptive Metropolis proposal scale for one parameter block.
///
/// S is lower triangular with positive diagonal. After each accept/reject
/// step it is replaced by the Cholesky factor of
/// S (I + eta_m (alpha_m - alpha_*) u u^T / |u|^2) S^T.
class RamAdapter {
 public:
  explicit RamAdapter(int dim, double initial_scale = 0.1, double target = kTargetAcceptance);

  int dim() const { return static_cast<int>(s_.rows()); }
  const Matrix& scale() const { return s_; }
  /// Number of completed adaptation steps.
  int iteration() const { return m_; }
  double target() const { return target_; }

  /// eta_m = m^{-2/3}.
  static double step_size(int m);

  /// Draws u ~ N(0, I) and returns x + S u.
  Vector propose(const Vector& x, Rng& rng, Vector& u) const;

  /// Advances m and updates S. Returns false when the factorisation fails and
  /// S is kept as is.
  bool adapt(const Vector& u, double accept_prob);

 private:
  Matrix s_;
  double target_;
  int m_ = 0;
};

struct RamRun {
  Matrix samples;  ///< one row per iteration
  std::vector<double> accept_prob;
  std::vector<bool> accepted;
  double max_condition = 1.0;  ///< largest condition number of S seen
};

/// Generic RAM chain on an unnormalised log-density.
RamRun run_ram(const std::function<double(const Vector&)>& log_target, Vector x0, int iterations, RamAdapter& adapter,
               Rng& rng);

/// Condition number of S (ratio of extreme singular values).
double condition_number(const Matrix& s);

}  // namespace dbnad
