#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dbnad/dag.hpp"
#include "dbnad/rng.hpp"

namespace dbnad {

/// Conditional Poisson dynamics for the addition (a) and deletion (d) counts.
struct EdgeDynParams {
  double mu_bar_a = 0.1;
  double mu_bar_d = 0.1;
  double alpha1 = 0.0;  ///< persistence of log mu^a
  double beta1 = 0.6;   ///< loading of a_{t-1}
  double alpha2 = 0.0;
  double beta2 = 0.6;
  double gamma1 = 0.0;  ///< loading of the centred volatility index
  double gamma2 = 0.0;
};

/// Logit-EWMA activeness. The last node is the reference group and keeps
/// w = 0.5 at every step.
struct ActivenessParams {
  double beta_es = 0.5;
  std::vector<double> w_init;
};

struct EdgeChangeState {
  double mu_a = 1.0;
  double mu_d = 1.0;
  int a = 0;
  int d = 0;
  int t = 1;
};

/// State at t = 1: both means start at their long-run values.
EdgeChangeState initial_edge_state(const EdgeDynParams& p);

/// Means at t = prev.t + 1 given the centred exogenous value at prev.t.
/// Throws NumericError when a mean overflows.
std::pair<double, double> step_means(const EdgeChangeState& prev, double v_prev_centered, const EdgeDynParams& p);

/// Poisson log-pmf with all mass at or above `kmax` collapsed onto `kmax`.
/// Throws std::invalid_argument unless 0 <= k <= kmax.
double truncated_poisson_logpmf(int k, double mu, int kmax);

/// Poisson draw clamped at `kmax`.
int sample_truncated_poisson(double mu, int kmax, Rng& rng);

/// One logit-EWMA step driven by each node's variance relative to the last
/// node. Throws std::invalid_argument when a previous weight is 0 or 1.
std::vector<double> step_activeness(std::span<const double> w_prev, std::span<const double> sigma2_prev,
                                    const ActivenessParams& p);

inline double pair_activeness(double w_i, double w_j) { return w_i * w_j; }

struct ListEntry {
  Edge edge;
  double w_from = 0.0;
  double w_to = 0.0;
  double w_pair = 0.0;
};

/// Existing edges, ascending by pair activeness.
std::vector<ListEntry> build_deletion_list(const Dag& g, std::span<const double> w);

/// Both orientations of every unconnected pair, descending by pair activeness;
/// the orientation whose source is more active comes first. Directed edges in
/// `forbidden` (the ones deleted in the same step) are left out.
std::vector<ListEntry> build_addition_list(const Dag& g, std::span<const double> w, std::span<const Edge> forbidden);

/// Record of one evolution step, row for row.
struct EvolutionTrace {
  std::vector<ListEntry> deletion_list;
  std::vector<Edge> deleted;
  std::vector<ListEntry> addition_list;
  /// Before each addition: whether each addition-list row would still give a
  /// DAG (rows already added are reported false).
  std::vector<std::vector<bool>> dag_checks;
  std::vector<Edge> added;
};

/// Largest admissible addition count once `deleted` edges have been removed
/// from the graph, giving `after_delete`.
int addition_cap(const Dag& after_delete, int deleted);

/// Deletes the `d` least active edges, then walks the addition list adding the
/// first `a` edges that keep the graph acyclic. Throws StructuralError if `d`
/// exceeds the edge count or `a` exceeds addition_cap.
Dag evolve_network(const Dag& g_prev, int a, int d, std::span<const double> w, EvolutionTrace* trace = nullptr);

struct ClampedEvolution {
  Dag graph;
  int a = 0;  ///< applied counts after clamping
  int d = 0;
  int a_max = 0;
  int d_max = 0;
};

/// evolve_network with requested counts clamped at the step's caps.
ClampedEvolution evolve_network_clamped(const Dag& g_prev, int a_requested, int d_requested,
                                        std::span<const double> w);

}  // namespace dbnad
