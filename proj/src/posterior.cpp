#include "dbnad/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dbnad/error.hpp"

namespace dbnad {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool finite_all(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool persistence_ok(double alpha, double beta) { return alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0; }

}  // namespace

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool LatentPath::clamped() const {
  return std::any_of(steps.begin(), steps.end(), [](const auto& s) {
    return s->a_requested != s->counts.a || s->d_requested != s->counts.d;
  });
}

double log_mvn_density(const Vector& x, const Matrix& sigma) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("log_mvn_density: covariance not positive definite");
  const Matrix& L = llt.matrixLLT();
  const Vector z = llt.matrixL().solve(x);
  double log_det = 0.0;
  for (int i = 0; i < L.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
  const double n = static_cast<double>(x.size());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

PathStep initial_step(const ModelParams& theta, const Vector& x1, LongRunPartials& long_run) {
  PathStep s;
  s.t = 1;
  s.graph = theta.g1;
  s.counts = initial_edge_state(theta.edge);
  s.caps = max_changes(theta.g1);
  s.w = theta.activeness.w_init;
  s.dep = initial_dependence(theta.g1, theta.garch, long_run);
  s.x = x1;
  if (x1.size() > 0) s.log_lik = log_mvn_density(x1, s.dep.sigma);
  return s;
}

PathStep advance_step(const ModelParams& theta, const PathStep& prev, const PathStep* prev2, int a_requested,
                      int d_requested, double v_prev_centered, LongRunPartials& long_run, bool reset_correlations) {
  PathStep s;
  s.t = prev.t + 1;
  const auto [mu_a, mu_d] = step_means(prev.counts, v_prev_centered, theta.edge);
  s.w = step_activeness(prev.w, prev.dep.sigma2, theta.activeness);
  auto ev = evolve_network_clamped(prev.graph, a_requested, d_requested, s.w);
  s.graph = std::move(ev.graph);
  s.counts = {mu_a, mu_d, ev.a, ev.d, s.t};
  s.a_requested = a_requested;
  s.d_requested = d_requested;
  s.caps = {ev.a_max, ev.d_max};

  std::vector<ReturnObservation> window{{&prev.x, &prev.dep.sigma}};
  if (prev2) window.push_back({&prev2->x, &prev2->dep.sigma});
  s.dep = evolve_dependence(prev.dep, s.graph, window, theta.garch, theta.dcc, long_run, reset_correlations);
  s.log_count_prob = truncated_poisson_logpmf(ev.a, mu_a, ev.a_max) + truncated_poisson_logpmf(ev.d, mu_d, ev.d_max);
  return s;
}

LatentPath reconstruct_path(const ModelParams& theta, const ReturnMatrix& data, std::span<const double> vol_index,
                            const LatentPath* reuse, int from_t) {
  const int T = static_cast<int>(data.rows());
  if (T < 1) throw DataError("reconstruct_path: empty data");
  if (static_cast<int>(vol_index.size()) != T) throw DataError("reconstruct_path: volatility index length mismatch");
  if (data.cols() != theta.n()) throw DataError("reconstruct_path: data width does not match node count");
  if (theta.horizon() != T) throw DataError("reconstruct_path: count sequences do not match data length");

  LatentPath path;
  path.v_bar = mean_of(vol_index);
  path.steps.reserve(T);
  int start = 1;
  if (reuse && from_t > 1 && reuse->horizon() == T) {
    start = std::min(from_t, T + 1);
    path.steps.assign(reuse->steps.begin(), reuse->steps.begin() + (start - 1));
  }

  LongRunPartials long_run(theta.dcc.r_bar);
  for (int t = start; t <= T; ++t) {
    try {
      const Vector x = data.row(t - 1).transpose();
      PathStep s;
      if (t == 1) {
        s = initial_step(theta, x, long_run);
      } else {
        const PathStep& prev = *path.steps[t - 2];
        const PathStep* prev2 = t >= 3 ? path.steps[t - 3].get() : nullptr;
        s = advance_step(theta, prev, prev2, theta.adds[t - 1], theta.dels[t - 1], vol_index[t - 2] - path.v_bar,
                         long_run);
        s.x = x;
        s.log_lik = log_mvn_density(x, s.dep.sigma);
      }
      path.steps.push_back(std::make_shared<const PathStep>(std::move(s)));
    } catch (const NumericError& e) {
      if (e.time_index() >= 0) throw;
      throw NumericError(e.what(), t);
    } catch (const StructuralError& e) {
      throw StructuralError(std::string(e.what()) + " (t=" + std::to_string(t) + ")");
    }
  }
  return path;
}

double log_likelihood(const LatentPath& path) {
  double s = 0.0;
  for (const auto& step : path.steps) s += step->log_lik;
  return s;
}

double log_prior(const ModelParams& theta) {
  const int n = theta.n();
  if (n < 1) return kNegInf;
  const auto& e = theta.edge;
  if (!finite_all(std::vector<double>{e.mu_bar_a, e.mu_bar_d, e.alpha1, e.beta1, e.alpha2, e.beta2, e.gamma1,
                                      e.gamma2, theta.activeness.beta_es, theta.dcc.a_c, theta.dcc.b_c}))
    return kNegInf;
  if (!(e.mu_bar_a > 0.0 && e.mu_bar_d > 0.0)) return kNegInf;
  if (!persistence_ok(e.alpha1, e.beta1) || !persistence_ok(e.alpha2, e.beta2)) return kNegInf;
  if (!(e.beta1 > 0.5 && e.beta2 > 0.5)) return kNegInf;

  const auto& act = theta.activeness;
  if (!(act.beta_es >= 0.0 && act.beta_es <= 1.0)) return kNegInf;
  if (static_cast<int>(act.w_init.size()) != n) return kNegInf;
  for (double w : act.w_init)
    if (!(w > 0.0 && w < 1.0)) return kNegInf;
  if (act.w_init[n - 1] != kReferenceActiveness) return kNegInf;

  if (static_cast<int>(theta.garch.size()) != n) return kNegInf;
  for (const auto& g : theta.garch)
    if (!persistence_ok(g.alpha, g.beta) || !(g.sigma_bar2 > 0.0) || !std::isfinite(g.sigma_bar2)) return kNegInf;

  if (!persistence_ok(theta.dcc.a_c, theta.dcc.b_c)) return kNegInf;
  const Matrix& R = theta.dcc.r_bar;
  if (R.rows() != n || R.cols() != n || !R.allFinite()) return kNegInf;
  for (int i = 0; i < n; ++i) {
    if (R(i, i) != 1.0) return kNegInf;
    for (int j = i + 1; j < n; ++j)
      if (R(i, j) != R(j, i) || !(std::abs(R(i, j)) < 1.0)) return kNegInf;
  }
  if (Eigen::LLT<Matrix>(R).info() != Eigen::Success) return kNegInf;

  if (theta.adds.size() != theta.dels.size()) return kNegInf;
  for (std::size_t t = 0; t < theta.adds.size(); ++t)
    if (theta.adds[t] < 0 || theta.dels[t] < 0) return kNegInf;
  return 0.0;
}

double log_posterior(const ModelParams& theta, const LatentPath& path) {
  const double lp = log_prior(theta);
  if (lp == kNegInf) return kNegInf;
  if (path.clamped()) return kNegInf;
  double s = lp;
  for (const auto& step : path.steps) s += step->log_lik + step->log_count_prob;
  return std::isfinite(s) ? s : kNegInf;
}

double log_posterior(const ModelParams& theta, const ReturnMatrix& data, std::span<const double> vol_index) {
  if (log_prior(theta) == kNegInf) return kNegInf;
  try {
    return log_posterior(theta, reconstruct_path(theta, data, vol_index));
  } catch (const NumericError&) {
    return kNegInf;
  }
}

}  // namespace dbnad
