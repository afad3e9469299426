#pragma once

#include <span>
#include <vector>

#include "dbnad/posterior.hpp"
#include "dbnad/rng.hpp"

namespace dbnad {

/// Default exogenous volatility index: Gaussian AR(1) around `mean`.
struct Ar1Config {
  double mean = 20.0;
  double phi = 0.9;
  double sd = 0.5;
};

std::vector<double> simulate_ar1(int T, const Ar1Config& cfg, Rng& rng);

/// Draw from N(0, sigma) via Cholesky. Throws NumericError if sigma is not PD.
Vector sample_mvn(const Matrix& sigma, Rng& rng);

struct SimulatedDataset {
  ReturnMatrix returns;  ///< T x n
  std::vector<double> vol_index;
  ModelParams theta;  ///< generating parameters with the drawn counts filled in
  LatentPath truth;
};

/// Generates T days from the model. The count sequences of `theta` are
/// ignored and replaced by draws from the truncated Poisson laws; with
/// `force_zero_counts` every count is 0 (constant network). The result
/// satisfies reconstruct_path(theta, returns, vol_index) == truth.
SimulatedDataset simulate_dataset(const ModelParams& theta, int T, std::span<const double> vol_index, Rng& rng,
                                  bool force_zero_counts = false);

/// Random ground truth for recovery studies: a random DAG with the given edge
/// probability, random GARCH parameters, a random factor-model long-run
/// correlation matrix, and the supplied edge dynamics.
ModelParams random_truth(int n, double edge_prob, const EdgeDynParams& edge, double beta_es, double a_c, double b_c,
                         Rng& rng);

}  // namespace dbnad
