#include "dbnad/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dbnad/error.hpp"
#include "dbnad/partial_corr.hpp"

namespace dbnad {
namespace {

void check_open_unit(double v, const char* where) {
  if (!(v > -1.0 && v < 1.0)) throw NumericError(std::string(where) + ": partial correlation outside (-1,1)");
}

double clamp_partial(double v) { return std::clamp(v, -1.0 + kPartialFloor, 1.0 - kPartialFloor); }

// Value of the coordinate (node, parent | given) at the previous step, if the
// same coordinate (conditioning set compared as a set) existed.
const double* find_previous(const CorrState& prev, int node, int parent, std::span<const int> given) {
  if (node >= static_cast<int>(prev.nodes.size())) return nullptr;
  const auto& np = prev.nodes[node];
  for (std::size_t k = 0; k < np.parents.size(); ++k) {
    if (np.parents[k] != parent || k != given.size()) continue;
    std::vector<int> a(np.parents.begin(), np.parents.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<int> b(given.begin(), given.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return &np.rho[k];
  }
  return nullptr;
}

}  // namespace

double garch_step(double x_prev, double sigma2_prev, const GarchParams& p) {
  return (1.0 - p.alpha - p.beta) * p.sigma_bar2 + p.alpha * x_prev * x_prev + p.beta * sigma2_prev;
}

double sample_partial_corr(std::span<const ReturnObservation> window, int i, int j, std::span<const int> given) {
  const int k = static_cast<int>(given.size());
  double sij = 0.0, sii = 0.0, sjj = 0.0;
  for (const auto& obs : window) {
    const Vector& x = *obs.x;
    double ri = x(i), rj = x(j);
    if (k > 0) {
      const Matrix& S = *obs.sigma;
      Matrix szz(k, k);
      Matrix szij(k, 2);
      Vector z(k);
      for (int a = 0; a < k; ++a) {
        z(a) = x(given[a]);
        szij(a, 0) = S(given[a], i);
        szij(a, 1) = S(given[a], j);
        for (int b = 0; b < k; ++b) szz(a, b) = S(given[a], given[b]);
      }
      Eigen::LLT<Matrix> llt(szz);
      if (llt.info() != Eigen::Success) throw NumericError("sample_partial_corr: conditioning covariance not PD");
      const Matrix beta = llt.solve(szij);
      ri -= beta.col(0).dot(z);
      rj -= beta.col(1).dot(z);
    }
    sij += ri * rj;
    sii += ri * ri;
    sjj += rj * rj;
  }
  const double denom = std::sqrt(sii * sjj);
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(sij / denom, -1.0, 1.0);
}

double dcc_step(double rho_prev, double xi, double rho_bar, const DccParams& p) {
  return clamp_partial((1.0 - p.a_c - p.b_c) * rho_bar + p.a_c * xi + p.b_c * rho_prev);
}

std::vector<NodePartials> partial_layout(const Dag& g, std::span<const int> ordering) {
  const int n = g.size();
  std::vector<int> pos(n);
  for (int k = 0; k < n; ++k) pos[ordering[k]] = k;
  std::vector<NodePartials> out(n);
  for (int v = 0; v < n; ++v) {
    out[v].parents = g.parents(v);
    std::sort(out[v].parents.begin(), out[v].parents.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  }
  return out;
}

Matrix assemble_correlation(const Dag& g, std::span<const int> ordering, std::span<const NodePartials> partials) {
  const int n = g.size();
  if (static_cast<int>(ordering.size()) != n || static_cast<int>(partials.size()) != n)
    throw StructuralError("assemble_correlation: size mismatch");
  std::vector<int> pos(n, -1);
  for (int k = 0; k < n; ++k) pos[ordering[k]] = k;

  Matrix R = Matrix::Identity(n, n);
  for (int idx = 0; idx < n; ++idx) {
    const int i = ordering[idx];
    const auto& P = partials[i].parents;
    const auto& c = partials[i].rho;
    const int m = static_cast<int>(P.size());
    if (static_cast<int>(c.size()) != m || m != static_cast<int>(g.parents(i).size()))
      throw StructuralError("assemble_correlation: partials do not match parents of node " + std::to_string(i + 1));
    for (int k = 0; k < m; ++k) {
      if (!g.has_edge(P[k], i) || (k > 0 && pos[P[k - 1]] > pos[P[k]]))
        throw StructuralError("assemble_correlation: parent slots of node " + std::to_string(i + 1) +
                              " are not its parents in topological order");
      check_open_unit(c[k], "assemble_correlation");
    }

    // Q[l](a, b) = rho_{P[a] P[b] | P[0..l-1]} for a, b >= l.
    std::vector<Matrix> Q(std::max(m, 1));
    if (m > 0) {
      Q[0].resize(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) Q[0](a, b) = R(P[a], P[b]);
      for (int l = 1; l < m; ++l) {
        Q[l] = Q[l - 1];
        for (int a = l; a < m; ++a)
          for (int b = a + 1; b < m; ++b) {
            const double v = recursion_add(Q[l - 1](a, b), Q[l - 1](a, l - 1), Q[l - 1](b, l - 1));
            check_open_unit(v, "assemble_correlation");
            Q[l](a, b) = Q[l](b, a) = v;
          }
      }
    }

    for (int k = 0; k < m; ++k) {
      double v = c[k];
      for (int l = k - 1; l >= 0; --l) v = recursion_drop(v, c[l], Q[l](k, l));
      check_open_unit(v, "assemble_correlation");
      R(i, P[k]) = R(P[k], i) = v;
    }

    // Non-parent predecessors: partial given all parents is zero.
    std::vector<double> q(m);
    for (int jdx = 0; jdx < idx; ++jdx) {
      const int j = ordering[jdx];
      if (g.has_edge(j, i)) continue;
      if (m == 0) {
        R(i, j) = R(j, i) = 0.0;
        continue;
      }
      // qs[l] = rho_{j P[l] | P[0..l-1]}
      std::vector<double> qs(m);
      for (int a = 0; a < m; ++a) q[a] = R(j, P[a]);
      qs[0] = q[0];
      for (int l = 1; l < m; ++l) {
        for (int a = m - 1; a >= l; --a) q[a] = recursion_add(q[a], q[l - 1], Q[l - 1](a, l - 1));
        check_open_unit(q[l], "assemble_correlation");
        qs[l] = q[l];
      }
      double v = 0.0;
      for (int l = m - 1; l >= 0; --l) v = recursion_drop(v, c[l], qs[l]);
      check_open_unit(v, "assemble_correlation");
      R(i, j) = R(j, i) = v;
    }
  }
  Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) throw NumericError("assemble_correlation: result not positive definite");
  return R;
}

Matrix assemble_covariance(std::span<const double> sigma2, const Matrix& R) {
  const int n = static_cast<int>(sigma2.size());
  if (R.rows() != n || R.cols() != n) throw StructuralError("assemble_covariance: size mismatch");
  Vector sd(n);
  for (int i = 0; i < n; ++i) {
    if (!(sigma2[i] > 0.0)) throw NumericError("assemble_covariance: non-positive variance");
    sd(i) = std::sqrt(sigma2[i]);
  }
  return sd.asDiagonal() * R * sd.asDiagonal();
}

LongRunPartials::LongRunPartials(Matrix r_bar) : r_bar_(std::move(r_bar)) {}

double LongRunPartials::get(int i, int j, std::span<const int> given) {
  std::vector<int> key{std::min(i, j), std::max(i, j)};
  key.insert(key.end(), given.begin(), given.end());
  std::sort(key.begin() + 2, key.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  // Evaluated in canonical order so the value never depends on who asked first.
  const double v = long_run_partial(r_bar_, key[0], key[1], std::span<const int>(key).subspan(2));
  cache_.emplace(std::move(key), v);
  return v;
}

CorrState initial_dependence(const Dag& g1, std::span<const GarchParams> garch, LongRunPartials& long_run) {
  const int n = g1.size();
  CorrState s;
  s.sigma2.resize(n);
  for (int i = 0; i < n; ++i) s.sigma2[i] = garch[i].sigma_bar2;
  s.ordering = topological_order(g1, s.sigma2);
  s.nodes = partial_layout(g1, s.ordering);
  for (int i = 0; i < n; ++i) {
    auto& np = s.nodes[i];
    np.rho.resize(np.parents.size());
    for (std::size_t k = 0; k < np.parents.size(); ++k)
      np.rho[k] = clamp_partial(long_run.get(i, np.parents[k], std::span<const int>(np.parents.data(), k)));
  }
  s.R = assemble_correlation(g1, s.ordering, s.nodes);
  s.sigma = assemble_covariance(s.sigma2, s.R);
  return s;
}

CorrState evolve_dependence(const CorrState& prev, const Dag& g_t, std::span<const ReturnObservation> window,
                            std::span<const GarchParams> garch, const DccParams& dcc, LongRunPartials& long_run,
                            bool reset_to_long_run) {
  const int n = g_t.size();
  if (window.empty()) throw StructuralError("evolve_dependence: previous return required");
  CorrState s;
  s.sigma2.resize(n);
  const Vector& x_prev = *window[0].x;
  for (int i = 0; i < n; ++i) s.sigma2[i] = garch_step(x_prev(i), prev.sigma2[i], garch[i]);
  s.ordering = topological_order(g_t, s.sigma2);
  s.nodes = partial_layout(g_t, s.ordering);
  const bool have_window = static_cast<int>(window.size()) >= DccParams::kWindow;
  const auto sample_window = window.first(std::min<std::size_t>(window.size(), DccParams::kWindow));
  for (int i = 0; i < n; ++i) {
    auto& np = s.nodes[i];
    np.rho.resize(np.parents.size());
    for (std::size_t k = 0; k < np.parents.size(); ++k) {
      const std::span<const int> given(np.parents.data(), k);
      const double rho_bar = long_run.get(i, np.parents[k], given);
      if (reset_to_long_run) {
        np.rho[k] = clamp_partial(rho_bar);
        continue;
      }
      const double* carried = find_previous(prev, i, np.parents[k], given);
      const double rho_prev = carried ? *carried : rho_bar;
      const double xi = have_window ? sample_partial_corr(sample_window, i, np.parents[k], given) : rho_bar;
      np.rho[k] = dcc_step(rho_prev, xi, rho_bar, dcc);
    }
  }
  s.R = assemble_correlation(g_t, s.ordering, s.nodes);
  s.sigma = assemble_covariance(s.sigma2, s.R);
  return s;
}

}  // namespace dbnad
