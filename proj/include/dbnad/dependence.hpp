#pragma once

#include <map>
#include <span>
#include <vector>

#include "dbnad/dag.hpp"
#include "dbnad/types.hpp"

namespace dbnad {

/// Per-stock GARCH(1,1) with long-run variance targeting.
struct GarchParams {
  double alpha = 0.05;
  double beta = 0.90;
  double sigma_bar2 = 1.0;
};

/// Dynamics of the DAG-indexed conditional correlations.
struct DccParams {
  static constexpr int kWindow = 2;  ///< days in the sample partial correlation

  double a_c = 0.05;
  double b_c = 0.90;
  Matrix r_bar;  ///< long-run correlation matrix, unit diagonal, PD
};

/// Partials are clamped into (-1 + kPartialFloor, 1 - kPartialFloor).
inline constexpr double kPartialFloor = 1e-8;

/// Conditional correlations of one node with its parents. Slot k holds
/// rho_{i, parents[k] | parents[0..k-1]}; parents are listed in topological
/// order.
struct NodePartials {
  std::vector<int> parents;
  std::vector<double> rho;
};

/// Dependence state at one time step.
struct CorrState {
  std::vector<double> sigma2;
  std::vector<int> ordering;
  std::vector<NodePartials> nodes;
  Matrix R;
  Matrix sigma;
};

/// One observation feeding the sample partial correlation: the return vector
/// of a past day and the model covariance of that day.
struct ReturnObservation {
  const Vector* x = nullptr;
  const Matrix* sigma = nullptr;
};

double garch_step(double x_prev, double sigma2_prev, const GarchParams& p);

/// Uncentred correlation of the regression residuals of i and j on `given`
/// over the window. Regression coefficients come from each day's model
/// covariance. A zero residual norm yields 0.
double sample_partial_corr(std::span<const ReturnObservation> window, int i, int j, std::span<const int> given);

/// (1 - a - b) rho_bar + a xi + b rho_prev, clamped into the open unit interval.
double dcc_step(double rho_prev, double xi, double rho_bar, const DccParams& p);

/// Parents of every node, each list sorted by position in `ordering`; the rho
/// vectors are left empty.
std::vector<NodePartials> partial_layout(const Dag& g, std::span<const int> ordering);

/// Full correlation matrix implied by the DAG partials. Non-parent
/// predecessors are conditionally uncorrelated with a node given its parents.
/// Throws StructuralError if `partials` do not match `g`, NumericError if an
/// intermediate partial leaves (-1,1) or the result is not PD.
Matrix assemble_correlation(const Dag& g, std::span<const int> ordering, std::span<const NodePartials> partials);

/// D^{1/2} R D^{1/2}.
Matrix assemble_covariance(std::span<const double> sigma2, const Matrix& R);

/// Memoised partial correlations of a fixed long-run correlation matrix.
class LongRunPartials {
 public:
  explicit LongRunPartials(Matrix r_bar);
  double get(int i, int j, std::span<const int> given);
  const Matrix& r_bar() const { return r_bar_; }

 private:
  Matrix r_bar_;
  std::map<std::vector<int>, double> cache_;
};

/// Dependence state at t = 1: long-run variances and long-run partials.
CorrState initial_dependence(const Dag& g1, std::span<const GarchParams> garch, LongRunPartials& long_run);

/// Advances the dependence state to time t under network `g_t`.
///
/// `window[0]` is (x_{t-1}, Sigma_{t-1}), `window[1]` is (x_{t-2},
/// Sigma_{t-2}) when available. Coordinates that existed at t-1 (same node,
/// parent and conditioning set) continue their DCC recursion; new ones start at
/// their long-run value. With `reset_to_long_run` every coordinate is set to
/// its long-run value instead.
CorrState evolve_dependence(const CorrState& prev, const Dag& g_t, std::span<const ReturnObservation> window,
                            std::span<const GarchParams> garch, const DccParams& dcc, LongRunPartials& long_run,
                            bool reset_to_long_run = false);

}  // namespace dbnad
