#pragma once

#include <string>
#include <vector>

#include "dbnad/dag.hpp"
#include "dbnad/dependence.hpp"
#include "dbnad/edge_dynamics.hpp"

namespace dbnad {

/// Every static parameter of the model plus the initial network and the
/// addition/deletion count sequences.
///
/// `adds` and `dels` have length T; entry 0 (t = 1) is unused and kept at 0.
struct ModelParams {
  Dag g1;
  std::vector<int> adds;
  std::vector<int> dels;
  EdgeDynParams edge;
  ActivenessParams activeness;
  std::vector<GarchParams> garch;
  DccParams dcc;

  int n() const { return g1.size(); }
  int horizon() const { return static_cast<int>(adds.size()); }
};

/// Names of the continuous parameters in the order used by
/// flatten_continuous (1-based node labels).
std::vector<std::string> continuous_param_names(int n);

/// Continuous parameters as a flat vector: edge dynamics, beta_es, initial
/// activeness of nodes 1..n-1, GARCH (alpha, beta, sigma_bar2 per node), a_c,
/// b_c and the strict upper triangle of R_bar (row major).
std::vector<double> flatten_continuous(const ModelParams& theta);

/// Inverse of flatten_continuous. Structure and counts are taken from
/// `shape`.
ModelParams unflatten_continuous(const ModelParams& shape, const std::vector<double>& values);

/// Reference-group activeness of the last node.
inline constexpr double kReferenceActiveness = 0.5;

}  // namespace dbnad
