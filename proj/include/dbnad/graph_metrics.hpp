#pragma once

#include <span>

#include "dbnad/dag.hpp"
#include "dbnad/types.hpp"

namespace dbnad {

/// Number of differing directed adjacency cells. Throws StructuralError on a
/// size mismatch.
int network_distance(const Dag& g1, const Dag& g2);

struct NetworkStats {
  double density = 0.0;     ///< edges / (n(n-1))
  double clustering = 0.0;  ///< global transitivity of the undirected skeleton
  int edge_count = 0;
};

NetworkStats network_stats(const Dag& dag);

struct AurocResult {
  double value = 0.5;
  bool degenerate = false;  ///< no positives or no negatives; value is 0.5
};

/// Area under the ROC curve with mid-rank handling of tied scores.
AurocResult auroc(std::span<const double> scores, std::span<const int> labels);

/// Ranks every ordered pair i != j by `edge_scores(i, j)` against membership
/// in `truth`.
AurocResult auroc(const Matrix& edge_scores, const Dag& truth);

}  // namespace dbnad
