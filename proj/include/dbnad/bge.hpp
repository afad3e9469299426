#pragma once

#include <map>
#include <span>
#include <vector>

#include "dbnad/dag.hpp"
#include "dbnad/types.hpp"

namespace dbnad {

/// Normal-Wishart hyperparameters of the BGe score. Prior mean 0 and prior
/// scale matrix I; `alpha_w <= 0` selects n + 2.
struct BgeHyper {
  double alpha_mu = 1.0;
  double alpha_w = 0.0;
};

/// Minimum number of rows a scoring window must have.
inline constexpr int kBgeMinRows = 10;

/// Decomposable BGe score of DAGs over a fixed data window, with memoised
/// local scores. Columns are standardised before scoring.
class BgeScorer {
 public:
  /// Throws DataError for fewer than kBgeMinRows rows and NumericError for
  /// singular sufficient statistics.
  explicit BgeScorer(const Matrix& window, BgeHyper hyper = {});

  int size() const { return n_; }
  /// log p(data_{node, parents}) - log p(data_parents).
  double local(int node, std::span<const int> parents) const;
  double score(const Dag& g) const;

 private:
  double log_marginal(std::vector<int> subset) const;

  int n_ = 0;
  double rows_ = 0.0;
  double alpha_mu_ = 1.0;
  double alpha_w_ = 0.0;
  Matrix t_post_;
  mutable std::map<std::vector<int>, double> cache_;
};

double bge_score(const Matrix& window, const Dag& g, BgeHyper hyper = {});

/// First-improvement hill climbing over single-edge additions, deletions and
/// reversals maximising score(g) - lambda * network_distance(g, anchor). With
/// no anchor the penalty is off.
Dag hill_climb(const BgeScorer& scorer, Dag start, const Dag* anchor, double lambda, int max_moves = 500);

struct InitialNetworks {
  std::vector<Dag> graphs;  ///< G_1..G_T
  std::vector<int> adds;    ///< length T, entry 0 unused
  std::vector<int> dels;
};

/// Moving-window initial network sequence. The window for day t covers days
/// t - window + 1 .. t, shifted forward to stay inside the series at the
/// start. Counts are the directed edge differences between successive graphs.
InitialNetworks initialize_networks(const Matrix& data, int window, double lambda, int max_moves = 500,
                                    BgeHyper hyper = {});

}  // namespace dbnad
