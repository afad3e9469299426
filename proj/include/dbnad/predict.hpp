#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dbnad/graph_metrics.hpp"
#include "dbnad/sampler.hpp"

namespace dbnad {

/// One simulated day of one path.
struct PredictedStep {
  Dag graph;
  Matrix sigma;
  Vector returns;
  NetworkStats stats;
};

struct PredictionBundle {
  int horizon = 0;
  int requested_paths = 0;
  /// Surviving paths; paths[l][h - 1] is step h of path l.
  std::vector<std::vector<PredictedStep>> paths;
  std::vector<int> path_ids;  ///< original index of each surviving path
  std::vector<Matrix> sigma_hat;  ///< per-h average covariance
  std::vector<double> mean_density;
  std::vector<double> mean_clustering;
};

struct PredictConfig {
  int horizon = 1;
  int paths = 100;
  std::uint64_t seed = 1;
  /// Exogenous index over the horizon; empty holds the last observed value.
  std::vector<double> future_vol;
  /// Force all counts to zero (network frozen at G_T).
  bool freeze_network = false;
};

/// Monte Carlo forward simulation from a fitted chain. Every path uses its
/// own RNG stream derived from the seed and the path index, so the serial
/// and parallel versions produce identical bundles. Failing paths are
/// dropped; throws NumericError when fewer than half survive.
PredictionBundle predict_paths(const FittedModel& fitted, const PredictConfig& cfg);
PredictionBundle predict_paths_serial(const FittedModel& fitted, const PredictConfig& cfg);

/// Simulates one path (the kernel shared by both drivers).
std::vector<PredictedStep> simulate_path(const FittedModel& fitted, const PredictConfig& cfg, int path_index);

/// Sigma^{-1} 1 / (1^T Sigma^{-1} 1). Throws NumericError for a singular or
/// non-PD matrix.
Vector min_variance_weights(const Matrix& sigma);

/// Sample quantile with linear interpolation between order statistics
/// (position (n - 1) p).
double quantile(std::vector<double> values, double p);

struct RiskIndicators {
  double nd_bar = 0.0;
  double cc_bar = 0.0;
  double var_alpha = 0.0;
};

/// Portfolio return of each path at step h: that path's MV weights applied to
/// its own simulated return.
std::vector<double> path_portfolio_returns(const PredictionBundle& bundle, int h = 1);

/// Average density and clustering at step h and the VaR at level alpha.
RiskIndicators risk_indicators(const PredictionBundle& bundle, double alpha, int h = 1);

}  // namespace dbnad
