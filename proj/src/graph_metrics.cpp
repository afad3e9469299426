#include "dbnad/graph_metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "dbnad/error.hpp"

namespace dbnad {

int network_distance(const Dag& g1, const Dag& g2) {
  if (g1.size() != g2.size()) throw StructuralError("network_distance: graphs differ in node count");
  int diff = 0;
  for (int i = 0; i < g1.size(); ++i)
    for (int j = 0; j < g1.size(); ++j)
      if (g1.has_edge(i, j) != g2.has_edge(i, j)) ++diff;
  return diff;
}

NetworkStats network_stats(const Dag& dag) {
  const int n = dag.size();
  NetworkStats s;
  s.edge_count = dag.edge_count();
  if (n > 1) s.density = static_cast<double>(s.edge_count) / (static_cast<double>(n) * (n - 1));

  // closed / connected triples centred at each node
  double closed = 0.0, triples = 0.0;
  std::vector<int> nbrs;
  for (int v = 0; v < n; ++v) {
    nbrs.clear();
    for (int u = 0; u < n; ++u)
      if (u != v && dag.connected(u, v)) nbrs.push_back(u);
    const double k = static_cast<double>(nbrs.size());
    triples += k * (k - 1.0) / 2.0;
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (dag.connected(nbrs[a], nbrs[b])) closed += 1.0;
  }
  s.clustering = triples > 0.0 ? closed / triples : 0.0;
  return s;
}

AurocResult auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw StructuralError("auroc: no pairs");
  if (scores.size() != labels.size()) throw StructuralError("auroc: scores/labels size mismatch");
  const std::size_t m = scores.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<double> rank(m);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = mid;
    i = j + 1;
  }
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (labels[i]) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  const double neg = static_cast<double>(m) - pos;
  if (pos == 0.0 || neg == 0.0) return {0.5, true};
  return {(rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg), false};
}

AurocResult auroc(const Matrix& edge_scores, const Dag& truth) {
  const int n = truth.size();
  if (edge_scores.rows() != n || edge_scores.cols() != n) throw StructuralError("auroc: score matrix size mismatch");
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      s.push_back(edge_scores(i, j));
      y.push_back(truth.has_edge(i, j) ? 1 : 0);
    }
  return auroc(std::span<const double>(s), std::span<const int>(y));
}

}  // namespace dbnad
