#include "dbnad/predict.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "dbnad/error.hpp"
#include "dbnad/simulate.hpp"

namespace dbnad {
namespace {

PathStep terminal_step(const FittedModel& f) {
  PathStep s;
  s.t = f.horizon;
  s.graph = f.g_T;
  s.counts = {f.mu_a_T, f.mu_d_T, f.a_T, f.d_T, f.horizon};
  s.a_requested = f.a_T;
  s.d_requested = f.d_T;
  s.caps = max_changes(f.g_T);
  s.w = f.w_T;
  s.dep.sigma2 = f.sigma2_T;
  s.dep.sigma = f.sigma_T;
  s.x = f.x_T;
  return s;
}

PredictionBundle assemble(const PredictConfig& cfg, std::vector<std::optional<std::vector<PredictedStep>>>& runs) {
  PredictionBundle b;
  b.horizon = cfg.horizon;
  b.requested_paths = cfg.paths;
  for (int l = 0; l < cfg.paths; ++l) {
    if (!runs[l]) continue;
    b.paths.push_back(std::move(*runs[l]));
    b.path_ids.push_back(l);
  }
  if (2 * static_cast<int>(b.paths.size()) < cfg.paths)
    throw NumericError("predict_paths: only " + std::to_string(b.paths.size()) + " of " + std::to_string(cfg.paths) +
                       " paths survived");
  const double L = static_cast<double>(b.paths.size());
  for (int h = 0; h < cfg.horizon; ++h) {
    Matrix acc = Matrix::Zero(b.paths[0][h].sigma.rows(), b.paths[0][h].sigma.cols());
    double dens = 0.0, clus = 0.0;
    for (const auto& p : b.paths) {
      acc += p[h].sigma;
      dens += p[h].stats.density;
      clus += p[h].stats.clustering;
    }
    b.sigma_hat.push_back(acc / L);
    b.mean_density.push_back(dens / L);
    b.mean_clustering.push_back(clus / L);
  }
  return b;
}

void check_config(const FittedModel& f, const PredictConfig& cfg) {
  if (cfg.horizon < 1 || cfg.paths < 1) throw ConfigError("predict_paths: horizon and path count must be positive");
  if (!cfg.future_vol.empty() && static_cast<int>(cfg.future_vol.size()) < cfg.horizon)
    throw DataError("predict_paths: future volatility index shorter than the horizon");
  if (f.g_T.size() == 0 || f.sigma_T.rows() != f.g_T.size()) throw DataError("predict_paths: fitted model is empty");
}

}  // namespace

std::vector<PredictedStep> simulate_path(const FittedModel& f, const PredictConfig& cfg, int path_index) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(path_index)));
  LongRunPartials long_run(f.theta.dcc.r_bar);
  std::vector<std::shared_ptr<const PathStep>> steps{std::make_shared<const PathStep>(terminal_step(f))};
  std::vector<PredictedStep> out;
  out.reserve(cfg.horizon);
  for (int h = 1; h <= cfg.horizon; ++h) {
    const PathStep& prev = *steps[h - 1];
    const PathStep* prev2 = h >= 2 ? steps[h - 2].get() : nullptr;
    const double v_prev = h == 1 || cfg.future_vol.empty() ? f.v_last : cfg.future_vol[h - 2];
    const double v_c = v_prev - f.v_bar;
    int a = 0, d = 0;
    if (!cfg.freeze_network) {
      const auto [mu_a, mu_d] = step_means(prev.counts, v_c, f.theta.edge);
      const ChangeCaps caps = max_changes(prev.graph);
      a = sample_truncated_poisson(mu_a, caps.a_max, rng);
      d = sample_truncated_poisson(mu_d, caps.d_max, rng);
    }
    // The first predicted day restarts every conditional correlation at its
    // long-run value; later days follow the DCC recursion.
    PathStep s = advance_step(f.theta, prev, prev2, a, d, v_c, long_run, h == 1);
    s.x = sample_mvn(s.dep.sigma, rng);
    out.push_back({s.graph, s.dep.sigma, s.x, network_stats(s.graph)});
    steps.push_back(std::make_shared<const PathStep>(std::move(s)));
  }
  return out;
}

PredictionBundle predict_paths_serial(const FittedModel& f, const PredictConfig& cfg) {
  check_config(f, cfg);
  std::vector<std::optional<std::vector<PredictedStep>>> runs(cfg.paths);
  for (int l = 0; l < cfg.paths; ++l) {
    try {
      runs[l] = simulate_path(f, cfg, l);
    } catch (const Error&) {
    }
  }
  return assemble(cfg, runs);
}

PredictionBundle predict_paths(const FittedModel& f, const PredictConfig& cfg) {
  check_config(f, cfg);
  std::vector<std::optional<std::vector<PredictedStep>>> runs(cfg.paths);
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l < cfg.paths; ++l) {
    try {
      runs[l] = simulate_path(f, cfg, l);
    } catch (const Error&) {
    }
  }
  return assemble(cfg, runs);
}

Vector min_variance_weights(const Matrix& sigma) {
  Eigen::LLT<Matrix> llt(sigma);
  if (sigma.rows() == 0 || llt.info() != Eigen::Success)
    throw NumericError("min_variance_weights: covariance not positive definite");
  const Vector x = llt.solve(Vector::Ones(sigma.rows()));
  const double s = x.sum();
  if (!(std::abs(s) > 0.0) || !x.allFinite()) throw NumericError("min_variance_weights: singular covariance");
  return x / s;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DataError("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile: level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> path_portfolio_returns(const PredictionBundle& bundle, int h) {
  std::vector<double> r;
  r.reserve(bundle.paths.size());
  for (const auto& p : bundle.paths) {
    const auto& step = p.at(static_cast<std::size_t>(h - 1));
    r.push_back(min_variance_weights(step.sigma).dot(step.returns));
  }
  return r;
}

RiskIndicators risk_indicators(const PredictionBundle& bundle, double alpha, int h) {
  if (bundle.paths.empty()) throw DataError("risk_indicators: empty bundle");
  RiskIndicators ri;
  ri.nd_bar = bundle.mean_density.at(h - 1);
  ri.cc_bar = bundle.mean_clustering.at(h - 1);
  ri.var_alpha = -quantile(path_portfolio_returns(bundle, h), alpha);
  return ri;
}

}  // namespace dbnad
