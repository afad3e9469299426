#include "dbnad/bge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbnad/error.hpp"
#include "dbnad/graph_metrics.hpp"

namespace dbnad {
namespace {

double log_multigamma(int p, double a) {
  double s = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= p; ++j) s += std::lgamma(a + 0.5 * (1 - j));
  return s;
}

Matrix standardise(const Matrix& x) {
  Matrix z = x.rowwise() - x.colwise().mean();
  for (int j = 0; j < z.cols(); ++j) {
    const double sd = std::sqrt(z.col(j).squaredNorm() / std::max<double>(1.0, static_cast<double>(z.rows() - 1)));
    if (!(sd > 0.0)) throw NumericError("BGe: column " + std::to_string(j + 1) + " has zero variance");
    z.col(j) /= sd;
  }
  return z;
}

}  // namespace

BgeScorer::BgeScorer(const Matrix& window, BgeHyper hyper) {
  if (window.rows() < kBgeMinRows)
    throw DataError("BGe: window has " + std::to_string(window.rows()) + " rows, need at least " +
                    std::to_string(kBgeMinRows));
  n_ = static_cast<int>(window.cols());
  rows_ = static_cast<double>(window.rows());
  alpha_mu_ = hyper.alpha_mu;
  alpha_w_ = hyper.alpha_w > 0.0 ? hyper.alpha_w : n_ + 2.0;
  if (!(alpha_w_ > n_ - 1)) throw ConfigError("BGe: alpha_w must exceed n - 1");

  const Matrix z = standardise(window);
  const Vector mean = z.colwise().mean().transpose();
  const Matrix centred = z.rowwise() - mean.transpose();
  t_post_ = Matrix::Identity(n_, n_) + centred.transpose() * centred +
            (rows_ * alpha_mu_ / (rows_ + alpha_mu_)) * mean * mean.transpose();
  if (Eigen::LLT<Matrix>(t_post_).info() != Eigen::Success) throw NumericError("BGe: singular sufficient statistics");
}

double BgeScorer::log_marginal(std::vector<int> subset) const {
  const int l = static_cast<int>(subset.size());
  if (l == 0) return 0.0;
  std::sort(subset.begin(), subset.end());
  if (auto it = cache_.find(subset); it != cache_.end()) return it->second;

  Matrix sub(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) sub(a, b) = t_post_(subset[a], subset[b]);
  Eigen::LLT<Matrix> llt(sub);
  if (llt.info() != Eigen::Success) throw NumericError("BGe: singular sufficient statistics");
  double log_det = 0.0;
  for (int a = 0; a < l; ++a) log_det += 2.0 * std::log(llt.matrixLLT()(a, a));

  // Prior scale is the identity, so its log-determinant vanishes.
  const double prior_dof = alpha_w_ - n_ + l;
  const double v = -0.5 * l * rows_ * std::log(std::numbers::pi) + 0.5 * l * std::log(alpha_mu_ / (rows_ + alpha_mu_)) +
                   log_multigamma(l, 0.5 * (rows_ + prior_dof)) - log_multigamma(l, 0.5 * prior_dof) -
                   0.5 * (rows_ + prior_dof) * log_det;
  cache_.emplace(std::move(subset), v);
  return v;
}

double BgeScorer::local(int node, std::span<const int> parents) const {
  std::vector<int> family(parents.begin(), parents.end());
  const double without = log_marginal(family);
  family.push_back(node);
  return log_marginal(std::move(family)) - without;
}

double BgeScorer::score(const Dag& g) const {
  if (g.size() != n_) throw StructuralError("BGe: graph size does not match data width");
  double s = 0.0;
  for (int v = 0; v < n_; ++v) s += local(v, g.parents(v));
  return s;
}

double bge_score(const Matrix& window, const Dag& g, BgeHyper hyper) { return BgeScorer(window, hyper).score(g); }

Dag hill_climb(const BgeScorer& scorer, Dag g, const Dag* anchor, double lambda, int max_moves) {
  const int n = g.size();
  constexpr double kMinGain = 1e-9;
  auto local_with = [&](int node, int extra, int drop) {
    std::vector<int> pa = g.parents(node);
    if (drop >= 0) pa.erase(std::find(pa.begin(), pa.end(), drop));
    if (extra >= 0) pa.push_back(extra);
    return scorer.local(node, pa);
  };
  // Change in lambda * distance when cell (i, j) is flipped.
  auto penalty_flip = [&](int i, int j) {
    if (!anchor || lambda == 0.0) return 0.0;
    return lambda * (anchor->has_edge(i, j) == g.has_edge(i, j) ? 1.0 : -1.0);
  };

  for (int moves = 0; moves < max_moves; ++moves) {
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i) {
      for (int j = 0; j < n && !improved; ++j) {
        if (i == j) continue;
        if (g.has_edge(i, j)) {
          const double base_j = local_with(j, -1, -1);
          const double del = local_with(j, -1, i) - base_j - penalty_flip(i, j);
          if (del > kMinGain) {
            g.remove_edge(i, j);
            improved = true;
            break;
          }
          g.remove_edge(i, j);
          const bool can_reverse = g.can_add(j, i);
          double rev = 0.0;
          if (can_reverse)
            rev = local_with(j, -1, -1) - base_j + local_with(i, j, -1) - local_with(i, -1, -1) - penalty_flip(j, i);
          g.add_edge(i, j);
          if (can_reverse) rev -= penalty_flip(i, j);
          if (can_reverse && rev > kMinGain) {
            g.remove_edge(i, j);
            g.add_edge(j, i);
            improved = true;
          }
        } else if (!g.connected(i, j) && g.can_add(i, j)) {
          const double add = local_with(j, i, -1) - local_with(j, -1, -1) - penalty_flip(i, j);
          if (add > kMinGain) {
            g.add_edge(i, j);
            improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }
  return g;
}

InitialNetworks initialize_networks(const Matrix& data, int window, double lambda, int max_moves, BgeHyper hyper) {
  const int T = static_cast<int>(data.rows());
  const int n = static_cast<int>(data.cols());
  if (window < kBgeMinRows) throw ConfigError("initialize_networks: window must be at least " +
                                              std::to_string(kBgeMinRows));
  if (T < window) throw DataError("initialize_networks: series shorter than the window");

  InitialNetworks out;
  out.graphs.reserve(T);
  out.adds.assign(T, 0);
  out.dels.assign(T, 0);
  for (int t = 0; t < T; ++t) {
    const int start = std::clamp(t - window + 1, 0, T - window);
    const BgeScorer scorer(data.middleRows(start, window), hyper);
    if (t == 0) {
      out.graphs.push_back(hill_climb(scorer, Dag(n), nullptr, 0.0, max_moves));
      continue;
    }
    const Dag& prev = out.graphs.back();
    Dag g = hill_climb(scorer, prev, &prev, lambda, max_moves);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (g.has_edge(i, j) && !prev.has_edge(i, j)) ++out.adds[t];
        if (!g.has_edge(i, j) && prev.has_edge(i, j)) ++out.dels[t];
      }
    out.graphs.push_back(std::move(g));
  }
  return out;
}

}  // namespace dbnad
