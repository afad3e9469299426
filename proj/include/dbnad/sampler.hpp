#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dbnad/posterior.hpp"
#include "dbnad/ram.hpp"

namespace dbnad {

inline constexpr int kRamBlocks = 8;

enum class Transform { Identity, Log, Logit };

/// One RAM block: indices into flatten_continuous and the transform applied to
/// each before the random walk.
struct RamBlock {
  std::string name;
  std::vector<int> indices;
  Transform transform = Transform::Identity;
};

/// The eight blocks, in sweep order: DCC (a_c, b_c), count intercepts, count
/// slopes, volatility loadings, beta_es, GARCH slopes, GARCH long-run
/// variances, initial activeness of nodes 1..n-1.
std::vector<RamBlock> ram_block_layout(int n);

double to_transformed(double x, Transform t);
double from_transformed(double y, Transform t);
/// log |d x / d y| at the original-scale value x.
double log_jacobian(double x, Transform t);

struct SamplerConfig {
  int iterations = 2000;
  int burn_in = -1;  ///< negative: half of the iterations
  int thin = 10;
  double target_accept = kTargetAcceptance;
  int max_block = 10;
  int max_structure_steps = 5;
  int init_window = 30;
  double init_lambda = -1.0;  ///< negative: 0.15 n
  int init_max_moves = 500;
  double ram_initial_scale = 0.1;
  int count_moves_per_sweep = 1;
  bool update_structure = true;
  bool update_counts = true;
  bool update_rbar = true;
  std::array<bool, kRamBlocks> ram_blocks{true, true, true, true, true, true, true, true};
  std::uint64_t seed = 1;

  int effective_burn_in() const { return burn_in < 0 ? iterations / 2 : burn_in; }
  double effective_lambda(int n) const { return init_lambda < 0.0 ? 0.15 * n : init_lambda; }
};

/// One retained sweep.
struct ChainSample {
  int iteration = 0;
  std::vector<double> theta;  ///< flatten_continuous order
  std::vector<int> adds;
  std::vector<int> dels;
  std::vector<Edge> g1;
  std::uint64_t terminal_hash = 0;  ///< hash of G_T
  double log_posterior = 0.0;
};

/// Everything prediction needs from a fitted chain.
struct FittedModel {
  ModelParams theta;  ///< posterior-mean continuous parameters; MAP structure and counts
  Dag g_T;            ///< MAP terminal network
  int a_T = 0;
  int d_T = 0;
  Matrix sigma_T;  ///< MAP terminal covariance
  double mu_a_T = 1.0;  ///< posterior means of the terminal state
  double mu_d_T = 1.0;
  std::vector<double> w_T;
  std::vector<double> sigma2_T;
  Vector x_T;
  double v_bar = 0.0;
  double v_last = 0.0;
  int horizon = 0;
};

struct MoveStats {
  long proposed = 0;
  long accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
};

struct ChainResult {
  ModelParams initial;
  std::vector<ChainSample> samples;
  /// Inclusion frequency of each directed edge at t (index t - 1) over the
  /// retained samples; the initial path when nothing was retained.
  std::vector<Matrix> edge_freq;
  std::vector<double> log_post_trace;  ///< one entry per sweep
  std::map<std::string, MoveStats> moves;
  FittedModel fitted;
  double final_wishart_dof = 0.0;
};

using SampleSink = std::function<void(const ChainSample&)>;

/// Starting point for a chain: moving-window BGe networks and their counts,
/// moment-based GARCH variances and correlation, neutral dynamics. Counts are
/// replaced by the values the reconstruction actually applies, so the
/// starting posterior is finite.
ModelParams initial_params(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index);

/// Runs the chain from `init`. Each sweep performs, in order: a multi-step
/// proposal on G_1, count_moves_per_sweep random-walk and cyclic moves on the
/// count sequences, a PX-MH update of R_bar and the eight RAM blocks.
/// Deterministic for a given seed.
ChainResult run_chain(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index,
                      const ModelParams& init, const SampleSink& sink = {});

/// initial_params followed by run_chain.
ChainResult fit(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index,
                const SampleSink& sink = {});

}  // namespace dbnad
