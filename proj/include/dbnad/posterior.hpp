#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dbnad/model.hpp"

namespace dbnad {

/// Latent state at one time step, reconstructed deterministically.
struct PathStep {
  int t = 1;  ///< 1-based time index
  Dag graph;
  EdgeChangeState counts;  ///< means, applied counts a_t, d_t
  int a_requested = 0;     ///< counts before clamping at the caps
  int d_requested = 0;
  ChangeCaps caps;
  std::vector<double> w;
  CorrState dep;
  Vector x;                      ///< observed (or simulated) return at t
  double log_lik = 0.0;          ///< log N(x_t; 0, Sigma_t)
  double log_count_prob = 0.0;   ///< truncated Poisson terms (0 at t = 1)
};

/// Reconstructed latent path. Steps are shared immutable snapshots so that a
/// proposal changing only late counts can reuse the earlier prefix.
struct LatentPath {
  std::vector<std::shared_ptr<const PathStep>> steps;
  double v_bar = 0.0;  ///< centring constant of the volatility index

  int horizon() const { return static_cast<int>(steps.size()); }
  const PathStep& at(int t) const { return *steps.at(static_cast<std::size_t>(t - 1)); }
  const PathStep& back() const { return *steps.back(); }
  /// Some requested count exceeded its cap somewhere along the path.
  bool clamped() const;
};

/// Returns as a T x n matrix (row t-1 holds day t).
using ReturnMatrix = Matrix;

/// Log-density of N(0, sigma) at x via Cholesky. Throws NumericError if
/// sigma is not positive definite.
double log_mvn_density(const Vector& x, const Matrix& sigma);

/// Builds the t = 1 step.
PathStep initial_step(const ModelParams& theta, const Vector& x1, LongRunPartials& long_run);

/// Advances one step. `prev2` is the step before `prev` (null at t = 2).
/// `x_t` may be empty when the return is drawn later (simulation); the
/// likelihood term is then left at 0.
PathStep advance_step(const ModelParams& theta, const PathStep& prev, const PathStep* prev2, int a_requested,
                      int d_requested, double v_prev_centered, LongRunPartials& long_run,
                      bool reset_correlations = false);

/// Deterministic reconstruction of the latent path from parameters and data.
///
/// When `reuse` is given, its steps before `from_t` are shared instead of
/// recomputed; the caller guarantees they are unaffected by whatever changed.
/// Errors carry the failing time index.
LatentPath reconstruct_path(const ModelParams& theta, const ReturnMatrix& data, std::span<const double> vol_index,
                            const LatentPath* reuse = nullptr, int from_t = 1);

/// Sum of the per-step Gaussian log-likelihoods.
double log_likelihood(const LatentPath& path);

/// 0 inside the feasible region, -inf outside. Includes the estimation
/// restriction beta1, beta2 > 0.5.
double log_prior(const ModelParams& theta);

/// log_prior + log-likelihood + truncated Poisson count terms; -inf if the
/// prior vanishes or a requested count exceeds its cap.
double log_posterior(const ModelParams& theta, const LatentPath& path);

/// Reconstructs and evaluates in one go; short-circuits on an infeasible
/// prior without reconstructing. Numerical failures inside the path also
/// give -inf.
double log_posterior(const ModelParams& theta, const ReturnMatrix& data, std::span<const double> vol_index);

double mean_of(std::span<const double> v);

}  // namespace dbnad
