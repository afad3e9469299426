#include "dbnad/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "dbnad/bge.hpp"
#include "dbnad/error.hpp"
#include "dbnad/proposals.hpp"
#include "dbnad/wishart.hpp"

namespace dbnad {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Evaluated {
  LatentPath path;
  double log_post = kNegInf;
};

// Reconstructs and scores; numerical and structural failures count as zero
// posterior density.
Evaluated evaluate(const ModelParams& theta, const ReturnMatrix& data, std::span<const double> vol,
                   const LatentPath* reuse = nullptr, int from_t = 1) {
  Evaluated e;
  if (log_prior(theta) == kNegInf) return e;
  try {
    e.path = reconstruct_path(theta, data, vol, reuse, from_t);
    e.log_post = log_posterior(theta, e.path);
  } catch (const NumericError&) {
    e.log_post = kNegInf;
  } catch (const StructuralError&) {
    e.log_post = kNegInf;
  }
  return e;
}

bool mh_accept(double log_alpha, Rng& rng) {
  const double u = uniform01(rng);
  return std::isfinite(log_alpha) ? std::log(u) < log_alpha : log_alpha > 0.0;
}

class Chain {
 public:
  Chain(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol, ModelParams init)
      : cfg_(cfg), data_(data), vol_(vol), theta_(std::move(init)), rng_(cfg.seed),
        pxmh_(theta_.dcc.r_bar, std::max<double>(theta_.n() + 3, static_cast<double>(data.rows())),
              cfg.target_accept) {
    Evaluated e = evaluate(theta_, data_, vol_);
    if (e.log_post == kNegInf) throw NumericError("run_chain: initial state has zero posterior density");
    path_ = std::move(e.path);
    log_post_ = e.log_post;
    blocks_ = ram_block_layout(theta_.n());
    for (const auto& b : blocks_)
      ram_.emplace_back(static_cast<int>(b.indices.size()), cfg.ram_initial_scale, cfg.target_accept);
  }

  void sweep() {
    if (cfg_.update_structure) structure_move();
    if (cfg_.update_counts && theta_.horizon() >= 2) {
      for (int k = 0; k < cfg_.count_moves_per_sweep; ++k) {
        count_move(false);
        if (theta_.horizon() >= 3) count_move(true);
      }
    }
    if (cfg_.update_rbar && theta_.n() >= 2) rbar_move();
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (cfg_.ram_blocks[b] && !blocks_[b].indices.empty()) ram_move(b);
  }

  const ModelParams& theta() const { return theta_; }
  const LatentPath& path() const { return path_; }
  double log_post() const { return log_post_; }
  std::map<std::string, MoveStats>& stats() { return stats_; }
  double dof() const { return pxmh_.dof(); }

 private:
  void record(const char* name, bool accepted) {
    auto& s = stats_[name];
    ++s.proposed;
    if (accepted) ++s.accepted;
  }

  void structure_move() {
    const auto prop = multistep_structure_proposal(theta_.g1, rng_, cfg_.max_structure_steps);
    ModelParams cand = theta_;
    cand.g1 = prop.graph;
    Evaluated e = evaluate(cand, data_, vol_);
    const bool ok = mh_accept(e.log_post - log_post_ + prop.log_ratio, rng_) && e.log_post != kNegInf;
    if (ok) commit(std::move(cand), std::move(e));
    record("structure", ok);
  }

  void count_move(bool cyclic) {
    const auto prop = cyclic ? cyclic_move(theta_.adds, theta_.dels, rng_, cfg_.max_block)
                             : randomwalk_move(theta_.adds, theta_.dels, rng_, cfg_.max_block);
    bool ok = false;
    if (std::isfinite(prop.log_ratio)) {
      ModelParams cand = theta_;
      cand.adds = prop.adds;
      cand.dels = prop.dels;
      Evaluated e = evaluate(cand, data_, vol_, &path_, prop.tau);
      ok = e.log_post != kNegInf && mh_accept(e.log_post - log_post_ + prop.log_ratio, rng_);
      if (ok) commit(std::move(cand), std::move(e));
    }
    record(cyclic ? "counts_cyclic" : "counts_randomwalk", ok);
  }

  void rbar_move() {
    std::optional<Evaluated> last;
    ModelParams cand = theta_;
    auto target = [&](const Matrix& r) {
      cand.dcc.r_bar = r;
      last = evaluate(cand, data_, vol_);
      return last->log_post;
    };
    double current = log_post_;
    pxmh_.reset(theta_.dcc.r_bar);
    const auto step = pxmh_.step(target, current, rng_);
    if (step.accepted) commit(std::move(cand), std::move(*last));
    record("rbar_pxmh", step.accepted);
  }

  void ram_move(std::size_t b) {
    const auto& block = blocks_[b];
    const int dim = static_cast<int>(block.indices.size());
    std::vector<double> flat = flatten_continuous(theta_);
    Vector y(dim);
    double log_jac = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double x = flat[block.indices[k]];
      y(k) = to_transformed(x, block.transform);
      log_jac += log_jacobian(x, block.transform);
    }
    Vector u;
    const Vector y_new = ram_[b].propose(y, rng_, u);
    double log_jac_new = 0.0;
    bool finite = true;
    for (int k = 0; k < dim; ++k) {
      const double x = from_transformed(y_new(k), block.transform);
      finite = finite && std::isfinite(x);
      flat[block.indices[k]] = x;
      log_jac_new += log_jacobian(x, block.transform);
    }
    double alpha = 0.0;
    bool ok = false;
    if (finite && std::isfinite(log_jac_new)) {
      ModelParams cand = unflatten_continuous(theta_, flat);
      Evaluated e = evaluate(cand, data_, vol_);
      if (e.log_post != kNegInf) {
        const double log_alpha = e.log_post + log_jac_new - log_post_ - log_jac;
        alpha = std::min(1.0, std::exp(log_alpha));
        ok = uniform01(rng_) < alpha;
        if (ok) commit(std::move(cand), std::move(e));
      } else {
        uniform01(rng_);
      }
    } else {
      uniform01(rng_);
    }
    ram_[b].adapt(u, alpha);
    record(block.name.c_str(), ok);
  }

  void commit(ModelParams cand, Evaluated e) {
    theta_ = std::move(cand);
    path_ = std::move(e.path);
    log_post_ = e.log_post;
  }

  const SamplerConfig& cfg_;
  const ReturnMatrix& data_;
  std::span<const double> vol_;
  ModelParams theta_;
  LatentPath path_;
  double log_post_ = kNegInf;
  Rng rng_;
  PxmhSampler pxmh_;
  std::vector<RamBlock> blocks_;
  std::vector<RamAdapter> ram_;
  std::map<std::string, MoveStats> stats_;
};

Matrix adjacency(const Dag& g) {
  Matrix a = Matrix::Zero(g.size(), g.size());
  for (const auto& e : g.edges()) a(e.from, e.to) = 1.0;
  return a;
}

}  // namespace

std::vector<RamBlock> ram_block_layout(int n) {
  const int w0 = 9;
  const int g0 = w0 + std::max(0, n - 1);
  const int dcc0 = g0 + 3 * n;
  std::vector<RamBlock> blocks(kRamBlocks);
  blocks[0] = {"ram_dcc", {dcc0, dcc0 + 1}, Transform::Logit};
  blocks[1] = {"ram_intercepts", {0, 1}, Transform::Log};
  blocks[2] = {"ram_slopes", {2, 3, 4, 5}, Transform::Logit};
  blocks[3] = {"ram_volatility_loadings", {6, 7}, Transform::Identity};
  blocks[4] = {"ram_activeness_smoothing", {8}, Transform::Logit};
  blocks[5] = {"ram_garch_slopes", {}, Transform::Logit};
  blocks[6] = {"ram_garch_variances", {}, Transform::Log};
  blocks[7] = {"ram_initial_activeness", {}, Transform::Logit};
  for (int i = 0; i < n; ++i) {
    blocks[5].indices.push_back(g0 + 3 * i);
    blocks[5].indices.push_back(g0 + 3 * i + 1);
    blocks[6].indices.push_back(g0 + 3 * i + 2);
  }
  for (int i = 0; i + 1 < n; ++i) blocks[7].indices.push_back(w0 + i);
  return blocks;
}

double to_transformed(double x, Transform t) {
  switch (t) {
    case Transform::Log:
      return std::log(x);
    case Transform::Logit:
      return std::log(x / (1.0 - x));
    case Transform::Identity:
      break;
  }
  return x;
}

double from_transformed(double y, Transform t) {
  switch (t) {
    case Transform::Log:
      return std::exp(y);
    case Transform::Logit:
      return 1.0 / (1.0 + std::exp(-y));
    case Transform::Identity:
      break;
  }
  return y;
}

double log_jacobian(double x, Transform t) {
  switch (t) {
    case Transform::Log:
      return std::log(x);
    case Transform::Logit:
      return std::log(x) + std::log1p(-x);
    case Transform::Identity:
      break;
  }
  return 0.0;
}

ModelParams initial_params(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index) {
  const int T = static_cast<int>(data.rows());
  const int n = static_cast<int>(data.cols());
  if (T < kBgeMinRows) throw DataError("initial_params: need at least " + std::to_string(kBgeMinRows) + " days");
  const auto nets = initialize_networks(data, std::min(cfg.init_window, T), cfg.effective_lambda(n),
                                        cfg.init_max_moves);

  ModelParams theta;
  theta.g1 = nets.graphs.front();
  theta.adds = nets.adds;
  theta.dels = nets.dels;
  double mean_a = 0.0, mean_d = 0.0;
  for (int t = 1; t < T; ++t) {
    mean_a += nets.adds[t];
    mean_d += nets.dels[t];
  }
  if (T > 1) {
    mean_a /= T - 1;
    mean_d /= T - 1;
  }
  theta.edge = {std::max(0.05, mean_a), std::max(0.05, mean_d), 0.1, 0.6, 0.1, 0.6, 0.0, 0.0};
  theta.activeness.beta_es = 0.5;
  theta.activeness.w_init.assign(n, kReferenceActiveness);

  const Matrix second = data.transpose() * data / static_cast<double>(T);
  theta.garch.resize(n);
  for (int i = 0; i < n; ++i) theta.garch[i] = {0.05, 0.90, std::max(second(i, i), 1e-12)};
  Matrix r = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      r(i, j) = r(j, i) = 0.9 * second(i, j) / std::sqrt(second(i, i) * second(j, j));
  theta.dcc.a_c = 0.05;
  theta.dcc.b_c = 0.90;
  theta.dcc.r_bar = r;

  try {
    const LatentPath path = reconstruct_path(theta, data, vol_index);
    for (int t = 2; t <= T; ++t) {
      theta.adds[t - 1] = path.at(t).counts.a;
      theta.dels[t - 1] = path.at(t).counts.d;
    }
  } catch (const Error&) {
    std::fill(theta.adds.begin(), theta.adds.end(), 0);
    std::fill(theta.dels.begin(), theta.dels.end(), 0);
  }
  return theta;
}

ChainResult run_chain(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index,
                      const ModelParams& init, const SampleSink& sink) {
  if (cfg.iterations < 0 || cfg.thin < 1) throw ConfigError("run_chain: iterations must be >= 0 and thin >= 1");
  const int T = static_cast<int>(data.rows());
  const int n = static_cast<int>(data.cols());
  Chain chain(cfg, data, vol_index, init);

  ChainResult res;
  res.initial = init;
  res.edge_freq.assign(T, Matrix::Zero(n, n));
  std::vector<double> mean_theta;
  double mu_a = 0.0, mu_d = 0.0;
  Vector w_sum = Vector::Zero(n), s2_sum = Vector::Zero(n);
  double best = kNegInf;
  ModelParams map_theta = chain.theta();
  std::shared_ptr<const PathStep> map_terminal = chain.path().steps.back();

  const int burn = cfg.effective_burn_in();
  for (int it = 1; it <= cfg.iterations; ++it) {
    chain.sweep();
    res.log_post_trace.push_back(chain.log_post());
    if (it <= burn) continue;
    if (chain.log_post() > best) {
      best = chain.log_post();
      map_theta = chain.theta();
      map_terminal = chain.path().steps.back();
    }
    if ((it - burn) % cfg.thin != 0) continue;

    const auto& th = chain.theta();
    const auto& path = chain.path();
    ChainSample s{it, flatten_continuous(th), th.adds, th.dels, th.g1.edges(), path.back().graph.hash(),
                  chain.log_post()};
    if (mean_theta.empty()) mean_theta.assign(s.theta.size(), 0.0);
    for (std::size_t k = 0; k < s.theta.size(); ++k) mean_theta[k] += s.theta[k];
    for (int t = 1; t <= T; ++t)
      for (const auto& e : path.at(t).graph.edges()) res.edge_freq[t - 1](e.from, e.to) += 1.0;
    const auto& last = path.back();
    mu_a += last.counts.mu_a;
    mu_d += last.counts.mu_d;
    w_sum += Eigen::Map<const Vector>(last.w.data(), n);
    s2_sum += Eigen::Map<const Vector>(last.dep.sigma2.data(), n);
    if (sink) sink(s);
    res.samples.push_back(std::move(s));
  }

  const auto& final_path = chain.path();
  FittedModel& f = res.fitted;
  f.horizon = T;
  f.v_bar = final_path.v_bar;
  f.v_last = vol_index.empty() ? 0.0 : vol_index.back();
  f.x_T = data.row(T - 1).transpose();
  const double kept = static_cast<double>(res.samples.size());
  if (kept > 0) {
    for (auto& v : mean_theta) v /= kept;
    f.theta = unflatten_continuous(map_theta, mean_theta);
    f.mu_a_T = mu_a / kept;
    f.mu_d_T = mu_d / kept;
    const Vector w = w_sum / kept, s2 = s2_sum / kept;
    f.w_T.assign(w.data(), w.data() + n);
    f.sigma2_T.assign(s2.data(), s2.data() + n);
    for (auto& m : res.edge_freq) m /= kept;
  } else {
    map_theta = chain.theta();
    map_terminal = final_path.steps.back();
    f.theta = map_theta;
    f.mu_a_T = map_terminal->counts.mu_a;
    f.mu_d_T = map_terminal->counts.mu_d;
    f.w_T = map_terminal->w;
    f.sigma2_T = map_terminal->dep.sigma2;
    for (int t = 1; t <= T; ++t) res.edge_freq[t - 1] = adjacency(final_path.at(t).graph);
  }
  f.g_T = map_terminal->graph;
  f.a_T = map_terminal->counts.a;
  f.d_T = map_terminal->counts.d;
  f.sigma_T = map_terminal->dep.sigma;
  res.moves = chain.stats();
  res.final_wishart_dof = chain.dof();
  return res;
}

ChainResult fit(const SamplerConfig& cfg, const ReturnMatrix& data, std::span<const double> vol_index,
                const SampleSink& sink) {
  return run_chain(cfg, data, vol_index, initial_params(cfg, data, vol_index), sink);
}

}  // namespace dbnad
