#include "dbnad/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dbnad/error.hpp"

namespace dbnad {

std::vector<double> simulate_ar1(int T, const Ar1Config& cfg, Rng& rng) {
  std::vector<double> v(std::max(T, 0));
  const double stationary_sd = cfg.sd / std::sqrt(std::max(1e-12, 1.0 - cfg.phi * cfg.phi));
  double x = cfg.mean + stationary_sd * standard_normal(rng);
  for (auto& vt : v) {
    vt = x;
    x = cfg.mean + cfg.phi * (x - cfg.mean) + cfg.sd * standard_normal(rng);
  }
  return v;
}

Vector sample_mvn(const Matrix& sigma, Rng& rng) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("sample_mvn: covariance not positive definite");
  Vector z(sigma.rows());
  for (int i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
  return llt.matrixL() * z;
}

SimulatedDataset simulate_dataset(const ModelParams& theta_in, int T, std::span<const double> vol_index, Rng& rng,
                                  bool force_zero_counts) {
  if (T < 1) throw ConfigError("simulate_dataset: T must be positive");
  if (static_cast<int>(vol_index.size()) != T) throw DataError("simulate_dataset: volatility index length mismatch");
  SimulatedDataset out;
  out.theta = theta_in;
  out.theta.adds.assign(T, 0);
  out.theta.dels.assign(T, 0);
  if (log_prior(out.theta) == -std::numeric_limits<double>::infinity())
    throw ConfigError("simulate_dataset: parameters are outside the feasible region");
  const int n = out.theta.n();
  out.returns.resize(T, n);
  out.vol_index.assign(vol_index.begin(), vol_index.end());

  LatentPath& path = out.truth;
  path.v_bar = mean_of(vol_index);
  LongRunPartials long_run(out.theta.dcc.r_bar);
  for (int t = 1; t <= T; ++t) {
    PathStep s;
    if (t == 1) {
      s = initial_step(out.theta, Vector(), long_run);
    } else {
      const PathStep& prev = *path.steps[t - 2];
      const PathStep* prev2 = t >= 3 ? path.steps[t - 3].get() : nullptr;
      const double v_c = vol_index[t - 2] - path.v_bar;
      int a = 0, d = 0;
      if (!force_zero_counts) {
        const auto [mu_a, mu_d] = step_means(prev.counts, v_c, out.theta.edge);
        const ChangeCaps caps = max_changes(prev.graph);
        a = sample_truncated_poisson(mu_a, caps.a_max, rng);
        d = sample_truncated_poisson(mu_d, caps.d_max, rng);
      }
      out.theta.adds[t - 1] = a;
      out.theta.dels[t - 1] = d;
      s = advance_step(out.theta, prev, prev2, a, d, v_c, long_run);
    }
    s.x = sample_mvn(s.dep.sigma, rng);
    s.log_lik = log_mvn_density(s.x, s.dep.sigma);
    out.returns.row(t - 1) = s.x.transpose();
    path.steps.push_back(std::make_shared<const PathStep>(std::move(s)));
  }
  return out;
}

ModelParams random_truth(int n, double edge_prob, const EdgeDynParams& edge, double beta_es, double a_c, double b_c,
                         Rng& rng) {
  ModelParams theta;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  theta.g1 = Dag(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (uniform01(rng) < edge_prob) theta.g1.add_edge(perm[a], perm[b]);
  theta.edge = edge;
  theta.activeness.beta_es = beta_es;
  theta.activeness.w_init.resize(n);
  for (int i = 0; i + 1 < n; ++i) theta.activeness.w_init[i] = 0.2 + 0.6 * uniform01(rng);
  theta.activeness.w_init[n - 1] = kReferenceActiveness;
  theta.garch.resize(n);
  for (auto& g : theta.garch) g = {0.03 + 0.07 * uniform01(rng), 0.80 + 0.10 * uniform01(rng),
                                   0.5 + uniform01(rng)};
  theta.dcc.a_c = a_c;
  theta.dcc.b_c = b_c;
  Matrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = standard_normal(rng);
  const Matrix cov = w * w.transpose() + 0.5 * Matrix::Identity(n, n);
  const Vector sd = cov.diagonal().array().sqrt();
  theta.dcc.r_bar = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) theta.dcc.r_bar(i, j) = theta.dcc.r_bar(j, i) = cov(i, j) / (sd(i) * sd(j));
  return theta;
}

}  // namespace dbnad
