// Acceptance checks. Each criterion prints one line:
//   criterion <k>: PASS|FAIL <details> (<seconds>s)
// Usage: acceptance [--criterion k]. The exit status is non-zero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "dbnad/backtest.hpp"
#include "dbnad/edge_dynamics.hpp"
#include "dbnad/graph_metrics.hpp"
#include "dbnad/io.hpp"
#include "dbnad/partial_corr.hpp"
#include "dbnad/proposals.hpp"
#include "dbnad/ram.hpp"
#include "dbnad/sampler.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dbnad;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Worked example: deletion of 1->3, additions 3->5 then 2->5, both lists row
// for row.
Outcome worked_example() {
  const std::vector<Edge> e{{0, 2}, {1, 2}, {2, 3}, {3, 4}};
  const Dag g = Dag::from_edges(5, e);
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4, 0.5};
  EvolutionTrace tr;
  const Dag out = evolve_network(g, 2, 1, w, &tr);

  const std::vector<Edge> del_rows{{0, 2}, {1, 2}, {2, 3}, {3, 4}};
  const std::vector<double> del_w{0.03, 0.06, 0.12, 0.2};
  const std::vector<Edge> add_rows{{4, 2}, {2, 4}, {4, 1}, {1, 4}, {3, 1}, {1, 3}, {4, 0},
                                   {0, 4}, {3, 0}, {0, 3}, {2, 0}, {1, 0}, {0, 1}};
  const std::vector<double> add_w{0.15, 0.15, 0.1, 0.1, 0.08, 0.08, 0.05, 0.05, 0.04, 0.04, 0.03, 0.02, 0.02};
  int bad = 0;
  if (tr.deletion_list.size() != del_rows.size()) ++bad;
  for (std::size_t k = 0; k < std::min(del_rows.size(), tr.deletion_list.size()); ++k)
    bad += !(tr.deletion_list[k].edge == del_rows[k]) || std::abs(tr.deletion_list[k].w_pair - del_w[k]) > 1e-12;
  if (tr.addition_list.size() != add_rows.size()) ++bad;
  for (std::size_t k = 0; k < std::min(add_rows.size(), tr.addition_list.size()); ++k)
    bad += !(tr.addition_list[k].edge == add_rows[k]) || std::abs(tr.addition_list[k].w_pair - add_w[k]) > 1e-12;
  const bool moves = tr.deleted == std::vector<Edge>{{0, 2}} && tr.added == std::vector<Edge>{{2, 4}, {1, 4}};
  const std::vector<Edge> final_edges{{1, 2}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  const bool result = out.edges() == final_edges;
  return {bad == 0 && moves && result, std::to_string(bad) + " mismatched list rows, moves " +
                                           (moves ? "match" : "differ") + ", result " + (result ? "matches" : "differs")};
}

Outcome recursion_vs_precision() {
  Rng rng(101);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + rep % 5;
    const Matrix R = oracle::random_correlation(n, rng);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const int k = uniform_int(rng, 0, n - 2);
    const std::vector<int> given(idx.begin() + 2, idx.begin() + 2 + k);
    const double a = partial_corr_recursive(R, idx[0], idx[1], given);
    const double b = long_run_partial(R, idx[0], idx[1], given);
    worst = std::max(worst, std::abs(a - b));
  }
  return {worst < 1e-10, fmt("max |diff| %.3g over 1000 matrices", worst)};
}

Outcome assembly_vs_sem() {
  Rng rng(202);
  double worst = 0.0;
  int not_pd = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 6;
    const Dag g = oracle::random_dag(n, 0.3 + 0.6 * uniform01(rng), rng);
    std::vector<double> vol(n);
    for (auto& v : vol) v = uniform01(rng);
    const auto ordering = topological_order(g, vol);
    auto partials = partial_layout(g, ordering);
    for (auto& np : partials) {
      np.rho.resize(np.parents.size());
      for (auto& c : np.rho) c = -0.9 + 1.8 * uniform01(rng);
    }
    const Matrix R = assemble_correlation(g, ordering, partials);
    const Matrix O = oracle::sem_correlation(g, ordering, partials);
    worst = std::max(worst, (R - O).cwiseAbs().maxCoeff());
    not_pd += Eigen::LLT<Matrix>(R).info() != Eigen::Success;
  }
  return {worst < 1e-8 && not_pd == 0, fmt("max |diff| %.3g over 200 DAGs, ", worst) + std::to_string(not_pd) +
                                           " not positive definite"};
}

Outcome truncated_poisson_mass() {
  Rng rng(303);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double mu = std::exp(-3.0 + 7.0 * uniform01(rng));
    const int kmax = uniform_int(rng, 0, 60);
    double s = 0.0;
    for (int k = 0; k <= kmax; ++k) s += std::exp(truncated_poisson_logpmf(k, mu, kmax));
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return {worst <= 1e-12, fmt("max |sum - 1| %.3g", worst)};
}

// Kernel probabilities are multiples of 1/6; ratios are compared as exact
// fractions.
Outcome randomwalk_table() {
  int bad = 0;
  std::string table;
  for (int from = 0; from <= 3; ++from)
    for (int to = 0; to <= 3; ++to) {
      const long fwd = std::lround(6.0 * randomwalk_kernel_prob(from, to));
      const long bwd = std::lround(6.0 * randomwalk_kernel_prob(to, from));
      if (fwd == 0) continue;
      // Expected q(to -> from) / q(from -> to) as num/den.
      long num = 1, den = 1;
      if (from == 1 && to == 0) num = 3, den = 2;
      if (from == 0 && to == 1) num = 2, den = 3;
      bad += bwd * den != fwd * num;
      bad += std::abs(randomwalk_element_ratio(from, to) - static_cast<double>(num) / den) > 1e-15;
      table += " " + std::to_string(from) + "->" + std::to_string(to) + "=" + std::to_string(bwd) + "/" +
               std::to_string(fwd);
    }
  return {bad == 0, "ratios" + table};
}

Outcome cyclic_identity() {
  Rng rng(404);
  int bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<int> b(uniform_int(rng, 2, 10));
    for (auto& x : b) x = uniform_int(rng, 0, 20);
    auto c = b;
    rotate_right(c);
    rotate_left(c);
    bad += c != b;
    auto d = b;
    rotate_left(d);
    rotate_right(d);
    bad += d != b;
  }
  std::vector<int> adds(40), dels(40);
  for (int k = 1; k < 40; ++k) adds[k] = uniform_int(rng, 0, 5), dels[k] = uniform_int(rng, 0, 5);
  int nonunit = 0;
  for (int rep = 0; rep < 1000; ++rep) nonunit += cyclic_move(adds, dels, rng).log_ratio != 0.0;
  return {bad == 0 && nonunit == 0,
          std::to_string(bad) + " identity failures, " + std::to_string(nonunit) + " non-unit ratios"};
}

Outcome ram_standard_normal() {
  Rng rng(505);
  RamAdapter ram(3, 0.1);
  const auto target = [](const Vector& x) { return -0.5 * x.squaredNorm(); };
  const RamRun run = run_ram(target, Vector::Zero(3), 60000, ram, rng);
  long acc = 0;
  for (int m = 10000; m < 60000; ++m) acc += run.accepted[m];
  const double rate = static_cast<double>(acc) / 50000.0;
  const bool ok = std::abs(rate - kTargetAcceptance) <= 0.05 && run.max_condition < 100.0;
  return {ok, fmt("acceptance %.4f", rate) + fmt(", max condition number %.3g", run.max_condition)};
}

Outcome pxmh_recovery() {
  const int n = 3, T = 2000;
  Matrix truth(3, 3);
  truth << 1.0, 0.5, 0.3, 0.5, 1.0, -0.2, 0.3, -0.2, 1.0;
  Rng rng(606);
  ReturnMatrix x(T, n);
  for (int t = 0; t < T; ++t) x.row(t) = sample_mvn(truth, rng).transpose();
  const std::vector<double> vol(T, 20.0);

  ModelParams init;
  init.g1 = Dag(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) init.g1.add_edge(i, j);
  init.adds.assign(T, 0);
  init.dels.assign(T, 0);
  init.activeness.w_init.assign(n, kReferenceActiveness);
  init.garch.assign(n, GarchParams{0.0, 0.0, 1.0});
  init.dcc.a_c = 0.0;
  init.dcc.b_c = 0.0;
  init.dcc.r_bar = Matrix::Identity(n, n);

  SamplerConfig cfg;
  cfg.iterations = 3000;
  cfg.burn_in = 1000;
  cfg.thin = 4;
  cfg.update_structure = cfg.update_counts = false;
  cfg.ram_blocks.fill(false);
  cfg.seed = 607;
  int bad_diag = 0;
  const ChainResult res = run_chain(cfg, x, vol, init, [&](const ChainSample& s) {
    const ModelParams p = unflatten_continuous(init, s.theta);
    bad_diag += !p.dcc.r_bar.diagonal().isOnes(0.0);
    const LatentPath path = reconstruct_path(p, x, vol);
    bad_diag += !path.back().dep.R.diagonal().isOnes(0.0);
  });
  const Matrix& est = res.fitted.theta.dcc.r_bar;
  const double err = (est - truth).cwiseAbs().maxCoeff();
  std::ostringstream d;
  d << "max posterior-mean error " << fmt("%.4f", err) << ", " << res.samples.size() << " samples, " << bad_diag
    << " non-unit diagonals, PX-MH acceptance " << fmt("%.3f", res.moves.at("rbar_pxmh").rate());
  return {err <= 0.08 && bad_diag == 0 && !res.samples.empty(), d.str()};
}

Outcome recovery_study() {
  const SimulationConfig sc;
  const int reps = 5, n = 5, T = 100;
  const auto names = continuous_param_names(n);
  const auto index_of = [&](const std::string& nm) {
    return static_cast<int>(std::find(names.begin(), names.end(), nm) - names.begin());
  };
  const int i_ac = index_of("a_c"), i_bc = index_of("b_c"), i_bes = index_of("beta_es");
  int covered_ac = 0, covered_bc = 0, covered_bes = 0;
  double auc_sum = 0.0;
  std::ostringstream d;
  for (int r = 0; r < reps; ++r) {
    Rng rng(derive_seed(909, r));
    const ModelParams truth = random_truth(n, sc.edge_prob, sc.edge, sc.beta_es, sc.a_c, sc.b_c, rng);
    const auto vol = simulate_ar1(T, sc.vol, rng);
    const SimulatedDataset ds = simulate_dataset(truth, T, vol, rng);
    SamplerConfig cfg;
    cfg.iterations = 20000;
    cfg.thin = 10;
    cfg.seed = derive_seed(910, r);
    const ChainResult res = fit(cfg, ds.returns, ds.vol_index);
    const auto summary = summarize(names, res.samples);
    const auto covers = [&](int i, double v) { return summary[i].lower <= v && v <= summary[i].upper; };
    covered_ac += covers(i_ac, sc.a_c);
    covered_bc += covers(i_bc, sc.b_c);
    covered_bes += covers(i_bes, sc.beta_es);
    const double auc = auroc(res.edge_freq.back(), ds.truth.back().graph).value;
    auc_sum += auc;
    d << " [rep " << r << fmt(": a_c %.3f", summary[i_ac].lower) << fmt("..%.3f", summary[i_ac].upper)
      << fmt(", b_c %.3f", summary[i_bc].lower) << fmt("..%.3f", summary[i_bc].upper)
      << fmt(", beta_es %.3f", summary[i_bes].lower) << fmt("..%.3f", summary[i_bes].upper)
      << fmt(", auroc %.3f]", auc);
  }
  const double mean_auc = auc_sum / reps;
  const bool ok = covered_ac >= 3 && covered_bc >= 3 && covered_bes >= 3 && mean_auc >= 0.6;
  std::ostringstream head;
  head << "coverage a_c " << covered_ac << "/5, b_c " << covered_bc << "/5, beta_es " << covered_bes << "/5, "
       << fmt("mean AUROC %.3f;", mean_auc) << d.str();
  return {ok, head.str()};
}

Outcome prefix_property() {
  const auto ds = fixture::dataset(5, 120, 1001);
  const LatentPath base = reconstruct_path(ds.theta, ds.returns, ds.vol_index);
  Rng rng(1002);
  int bad = 0, trials = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const int tau = uniform_int(rng, 2, 120);
    ModelParams changed = ds.theta;
    int& a = changed.adds[tau - 1];
    a = a > 0 && uniform01(rng) < 0.5 ? a - 1 : a + 1;
    const LatentPath cached = reconstruct_path(changed, ds.returns, ds.vol_index, &base, tau);
    const LatentPath fresh = reconstruct_path(changed, ds.returns, ds.vol_index);
    for (int t = 1; t < tau; ++t) {
      ++trials;
      bad += cached.at(t).log_lik != base.at(t).log_lik || fresh.at(t).log_lik != base.at(t).log_lik;
    }
    for (int t = tau; t <= 120; ++t) bad += cached.at(t).log_lik != fresh.at(t).log_lik;
  }
  return {bad == 0, std::to_string(bad) + " differing terms over " + std::to_string(trials) + " prefix steps"};
}

Outcome backtest_smoke() {
  const int n = 4, T = 600;
  const SimulationConfig sc;
  Rng rng(1101);
  const ModelParams truth = random_truth(n, sc.edge_prob, sc.edge, sc.beta_es, sc.a_c, sc.b_c, rng);
  const auto vol = simulate_ar1(T, sc.vol, rng);
  const SimulatedDataset ds = simulate_dataset(truth, T, vol, rng);

  SamplerConfig sampler;
  sampler.iterations = 300;
  sampler.thin = 5;
  BacktestConfig bc;
  bc.window = 250;
  bc.refit_every = 25;
  bc.seed = 1102;

  const auto run_all = [&]() {
    ModelForecaster mf(sampler, 100);
    const ForecastSeries fs = compute_forecasts(mf, ds.returns, ds.vol_index, bc);
    std::vector<BacktestLedger> out;
    out.push_back(apply_strategy(fs, ds.returns, Strategy::AlwaysInvest, RiskConfig{}, bc.start_value));
    for (auto kind : {IndicatorKind::Density, IndicatorKind::Clustering, IndicatorKind::VaR})
      for (double alpha : {0.025, 0.01})
        out.push_back(apply_strategy(fs, ds.returns, Strategy::IndicatorFilter, RiskConfig{kind, alpha, 20},
                                     bc.start_value));
    return out;
  };
  const auto first = run_all();
  const auto second = run_all();

  int failures = 0, mismatches = 0, bad_weights = 0, short_ledgers = 0;
  for (std::size_t k = 0; k < first.size(); ++k) {
    failures += !first[k].failure.empty();
    short_ledgers += static_cast<int>(first[k].rows.size()) != T - bc.window;
    if (first[k].rows.size() != second[k].rows.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t r = 0; r < first[k].rows.size(); ++r) {
      const auto& a = first[k].rows[r];
      const auto& b = second[k].rows[r];
      mismatches += a.value != b.value || a.invested != b.invested || a.weights != b.weights;
      bad_weights += std::abs(a.weights.sum() - 1.0) > 1e-12;
    }
  }
  std::ostringstream d;
  d << first.size() << " ledgers, " << failures << " failed, " << short_ledgers << " incomplete, " << mismatches
    << " rerun mismatches, " << bad_weights << " weight sums off; final values:";
  for (const auto& l : first) d << fmt(" %.1f", l.rows.empty() ? 0.0 : l.rows.back().value);
  return {failures == 0 && short_ledgers == 0 && mismatches == 0 && bad_weights == 0, d.str()};
}

Outcome mv_weights() {
  Rng rng(1201);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rep % 9;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = standard_normal(rng);
    const Matrix s = a * a.transpose() + 0.1 * Matrix::Identity(n, n);
    const Vector w = min_variance_weights(s);
    const Vector g = s * w;
    const double scale = g.cwiseAbs().maxCoeff();
    worst = std::max(worst, (g.array() - g.mean()).abs().maxCoeff() / scale);
  }
  return {worst <= 1e-10, fmt("max relative deviation of Sigma w from a constant vector %.3g", worst)};
}

const std::vector<std::function<Outcome()>> kCriteria{
    worked_example, recursion_vs_precision, assembly_vs_sem, truncated_poisson_mass, randomwalk_table,
    cyclic_identity, ram_standard_normal, pxmh_recovery, recovery_study, prefix_property, backtest_smoke,
    mv_weights};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion k]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", kCriteria.size());
    return 2;
  }
  int failed = 0;
  for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) {
    if (only != 0 && k != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s %s (%.1fs)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
