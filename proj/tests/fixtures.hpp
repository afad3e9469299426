#pragma once

#include "dbnad/io.hpp"
#include "dbnad/simulate.hpp"

namespace fixture {

/// Dataset drawn from a random ground truth with the default simulation
/// parameters.
inline dbnad::SimulatedDataset dataset(int n, int T, std::uint64_t seed, bool zero_counts = false) {
  const dbnad::SimulationConfig sc;
  dbnad::Rng rng(seed);
  const auto theta = dbnad::random_truth(n, sc.edge_prob, sc.edge, sc.beta_es, sc.a_c, sc.b_c, rng);
  const auto vol = dbnad::simulate_ar1(T, sc.vol, rng);
  return dbnad::simulate_dataset(theta, T, vol, rng, zero_counts);
}

}  // namespace fixture
