#include "dbnad/edge_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dbnad/error.hpp"

namespace dbnad {
namespace {

double logit(double w) { return std::log(w / (1.0 - w)); }
double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_poisson_pmf(int k, double mu) { return k * std::log(mu) - mu - std::lgamma(k + 1.0); }

// log P(X >= k) for X ~ Poisson(mu), k >= 1.
double log_poisson_upper_tail(int k, double mu) {
  if (static_cast<double>(k) > mu) {
    // Terms decrease from x = k onward; sum them relative to the first.
    const double log_first = log_poisson_pmf(k, mu);
    double sum = 1.0, term = 1.0;
    for (int x = k + 1; x < k + 100000; ++x) {
      term *= mu / x;
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return log_first + std::log(sum);
  }
  // Lower sum is at most ~1/2 here, so 1 - cdf does not cancel badly.
  double max_log = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < k; ++x) max_log = std::max(max_log, log_poisson_pmf(x, mu));
  double s = 0.0;
  for (int x = 0; x < k; ++x) s += std::exp(log_poisson_pmf(x, mu) - max_log);
  const double cdf = std::exp(max_log + std::log(s));
  return std::log1p(-std::min(cdf, 1.0));
}

// Cross-pair order for both lists: pair activeness, then the more active
// endpoint, then indices.
struct PairKey {
  double w_pair;
  double w_max;
  int lo;
  int hi;
};

}  // namespace

EdgeChangeState initial_edge_state(const EdgeDynParams& p) { return {p.mu_bar_a, p.mu_bar_d, 0, 0, 1}; }

std::pair<double, double> step_means(const EdgeChangeState& prev, double v_prev_centered, const EdgeDynParams& p) {
  if (!(prev.mu_a > 0.0) || !(prev.mu_d > 0.0)) throw NumericError("step_means: non-positive previous mean", prev.t + 1);
  const double log_a = (1.0 - p.alpha1 - p.beta1) * std::log(p.mu_bar_a) + p.alpha1 * std::log(prev.mu_a) +
                       p.beta1 * prev.a + p.gamma1 * v_prev_centered;
  const double log_d = (1.0 - p.alpha2 - p.beta2) * std::log(p.mu_bar_d) + p.alpha2 * std::log(prev.mu_d) +
                       p.beta2 * prev.d + p.gamma2 * v_prev_centered;
  const double mu_a = std::exp(log_a);
  const double mu_d = std::exp(log_d);
  if (!std::isfinite(mu_a) || !std::isfinite(mu_d) || mu_a <= 0.0 || mu_d <= 0.0)
    throw NumericError("step_means: mean not finite (log mu^a=" + std::to_string(log_a) +
                           ", log mu^d=" + std::to_string(log_d) + ")",
                       prev.t + 1);
  return {mu_a, mu_d};
}

double truncated_poisson_logpmf(int k, double mu, int kmax) {
  if (k < 0 || k > kmax) throw std::invalid_argument("truncated_poisson_logpmf: k outside [0, kmax]");
  if (!(mu > 0.0)) throw std::invalid_argument("truncated_poisson_logpmf: mu must be positive");
  if (kmax == 0) return 0.0;
  if (k < kmax) return log_poisson_pmf(k, mu);
  return log_poisson_upper_tail(kmax, mu);
}

int sample_truncated_poisson(double mu, int kmax, Rng& rng) {
  if (kmax <= 0) return 0;
  // Draws beyond the cap are clamped anyway; avoid huge-mean sampling costs.
  if (mu > 1e3 * (kmax + 1)) return kmax;
  std::poisson_distribution<long long> dist(mu);
  return static_cast<int>(std::min<long long>(dist(rng), kmax));
}

std::vector<double> step_activeness(std::span<const double> w_prev, std::span<const double> sigma2_prev,
                                    const ActivenessParams& p) {
  const std::size_t n = w_prev.size();
  if (sigma2_prev.size() != n) throw std::invalid_argument("step_activeness: size mismatch");
  if (n == 0) return {};
  std::vector<double> w(n);
  const double ref = sigma2_prev[n - 1];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w_prev[i] > 0.0 && w_prev[i] < 1.0))
      throw std::invalid_argument("step_activeness: activeness must lie in (0,1)");
    const double x = (1.0 - p.beta_es) * logit(w_prev[i]) + p.beta_es * (sigma2_prev[i] - ref);
    w[i] = inv_logit(x);
    if (!(w[i] > 0.0 && w[i] < 1.0)) throw NumericError("step_activeness: activeness saturated at 0 or 1");
  }
  return w;
}

std::vector<ListEntry> build_deletion_list(const Dag& g, std::span<const double> w) {
  std::vector<ListEntry> list;
  for (const auto& e : g.edges())
    list.push_back({e, w[e.from], w[e.to], pair_activeness(w[e.from], w[e.to])});
  std::sort(list.begin(), list.end(), [](const ListEntry& x, const ListEntry& y) {
    if (x.w_pair != y.w_pair) return x.w_pair < y.w_pair;
    if (x.w_from != y.w_from) return x.w_from < y.w_from;
    if (x.edge.from != y.edge.from) return x.edge.from < y.edge.from;
    return x.edge.to < y.edge.to;
  });
  return list;
}

std::vector<ListEntry> build_addition_list(const Dag& g, std::span<const double> w, std::span<const Edge> forbidden) {
  const int n = g.size();
  auto is_forbidden = [&](int from, int to) {
    return std::find(forbidden.begin(), forbidden.end(), Edge{from, to}) != forbidden.end();
  };
  struct Row {
    PairKey key;
    int rank;  // 0 for the orientation listed first within the pair
    ListEntry entry;
  };
  std::vector<Row> rows;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.connected(i, j)) continue;
      const PairKey key{pair_activeness(w[i], w[j]), std::max(w[i], w[j]), i, j};
      // i -> j first when w_i > w_j; ties keep the smaller source first.
      const bool i_first = w[i] >= w[j];
      if (!is_forbidden(i, j)) rows.push_back({key, i_first ? 0 : 1, {{i, j}, w[i], w[j], key.w_pair}});
      if (!is_forbidden(j, i)) rows.push_back({key, i_first ? 1 : 0, {{j, i}, w[j], w[i], key.w_pair}});
    }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.key.w_pair != y.key.w_pair) return x.key.w_pair > y.key.w_pair;
    if (x.key.w_max != y.key.w_max) return x.key.w_max > y.key.w_max;
    if (x.key.lo != y.key.lo) return x.key.lo < y.key.lo;
    if (x.key.hi != y.key.hi) return x.key.hi < y.key.hi;
    return x.rank < y.rank;
  });
  std::vector<ListEntry> list;
  list.reserve(rows.size());
  for (const auto& r : rows) list.push_back(r.entry);
  return list;
}

int addition_cap(const Dag& after_delete, int deleted) { return max_changes(after_delete).a_max - deleted; }

Dag evolve_network(const Dag& g_prev, int a, int d, std::span<const double> w, EvolutionTrace* trace) {
  if (static_cast<int>(w.size()) != g_prev.size()) throw StructuralError("evolve_network: activeness size mismatch");
  if (a < 0 || d < 0) throw StructuralError("evolve_network: negative change count");
  if (d > g_prev.edge_count())
    throw StructuralError("evolve_network: d=" + std::to_string(d) + " exceeds edge count " +
                          std::to_string(g_prev.edge_count()));
  Dag g = g_prev;
  auto deletion_list = build_deletion_list(g_prev, w);
  std::vector<Edge> deleted;
  deleted.reserve(d);
  for (int k = 0; k < d; ++k) {
    g.remove_edge(deletion_list[k].edge.from, deletion_list[k].edge.to);
    deleted.push_back(deletion_list[k].edge);
  }
  const int cap = addition_cap(g, d);
  if (a > cap) throw StructuralError("evolve_network: a=" + std::to_string(a) + " exceeds cap " + std::to_string(cap));

  auto addition_list = build_addition_list(g, w, deleted);
  if (trace) {
    trace->deletion_list = deletion_list;
    trace->deleted = deleted;
    trace->addition_list = addition_list;
    trace->dag_checks.clear();
    trace->added.clear();
  }
  std::vector<bool> used(addition_list.size(), false);
  int added = 0;
  std::size_t pos = 0;
  while (added < a) {
    if (trace) {
      std::vector<bool> checks(addition_list.size(), false);
      for (std::size_t r = 0; r < addition_list.size(); ++r)
        checks[r] = !used[r] && g.can_add(addition_list[r].edge.from, addition_list[r].edge.to);
      trace->dag_checks.push_back(std::move(checks));
    }
    // Rows that fail the DAG check never become feasible again, so a single
    // forward pass suffices.
    while (pos < addition_list.size() && !g.can_add(addition_list[pos].edge.from, addition_list[pos].edge.to)) ++pos;
    if (pos == addition_list.size()) throw StructuralError("evolve_network: addition list exhausted");
    const Edge e = addition_list[pos].edge;
    g.add_edge(e.from, e.to);
    used[pos] = true;
    if (trace) trace->added.push_back(e);
    ++added;
    ++pos;
  }
  return g;
}

ClampedEvolution evolve_network_clamped(const Dag& g_prev, int a_requested, int d_requested,
                                        std::span<const double> w) {
  ClampedEvolution out;
  out.d_max = g_prev.edge_count();
  out.d = std::clamp(d_requested, 0, out.d_max);
  // Deleting d edges frees d pairs that are excluded again, so the addition
  // cap equals the number of unconnected pairs before the step.
  out.a_max = max_changes(g_prev).a_max;
  out.a = std::clamp(a_requested, 0, out.a_max);
  out.graph = evolve_network(g_prev, out.a, out.d, w);
  return out;
}

}  // namespace dbnad
