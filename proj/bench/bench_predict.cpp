// Serial vs OpenMP Monte Carlo prediction on a small fitted chain.
//
//   bench_predict [paths] [horizon] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "dbnad/io.hpp"
#include "dbnad/predict.hpp"
#include "dbnad/simulate.hpp"

using namespace dbnad;

namespace {

template <class F>
double best_seconds(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const PredictionBundle& a, const PredictionBundle& b) {
  if (a.path_ids != b.path_ids || a.paths.size() != b.paths.size()) return false;
  for (std::size_t l = 0; l < a.paths.size(); ++l)
    for (std::size_t h = 0; h < a.paths[l].size(); ++h)
      if (a.paths[l][h].returns != b.paths[l][h].returns || !(a.paths[l][h].graph == b.paths[l][h].graph))
        return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int paths = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int horizon = argc > 2 ? std::atoi(argv[2]) : 20;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  const SimulationConfig sc;
  Rng rng(7);
  const ModelParams truth = random_truth(8, sc.edge_prob, sc.edge, sc.beta_es, sc.a_c, sc.b_c, rng);
  const auto vol = simulate_ar1(200, sc.vol, rng);
  const SimulatedDataset ds = simulate_dataset(truth, 200, vol, rng);
  SamplerConfig cfg;
  cfg.iterations = 20;
  cfg.thin = 5;
  const ChainResult fitted = fit(cfg, ds.returns, ds.vol_index);

  PredictConfig pc;
  pc.paths = paths;
  pc.horizon = horizon;
  pc.seed = 11;

  PredictionBundle serial, parallel;
  const double ts = best_seconds(repeats, [&] { serial = predict_paths_serial(fitted.fitted, pc); });
  const double tp = best_seconds(repeats, [&] { parallel = predict_paths(fitted.fitted, pc); });

  std::printf("paths=%d horizon=%d threads=%d\n", paths, horizon, omp_get_max_threads());
  std::printf("serial   %.4fs\n", ts);
  std::printf("parallel %.4fs (speedup %.2fx)\n", tp, ts / tp);
  const bool identical = same(serial, parallel);
  std::printf("outputs %s\n", identical ? "identical" : "DIFFER");
  return identical ? 0 : 1;
}
