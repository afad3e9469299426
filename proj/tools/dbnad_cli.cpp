// Command-line front end: simulate, fit, predict, backtest, report.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 data error, 1 anything else.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dbnad/backtest.hpp"
#include "dbnad/error.hpp"
#include "dbnad/io.hpp"
#include "dbnad/predict.hpp"
#include "dbnad/simulate.hpp"

namespace fs = std::filesystem;
using namespace dbnad;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> replications;
  std::optional<int> threads;
  std::string returns;
  std::string vol;
  std::string archive;
  std::string external_sigma;
};

RunConfig effective_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.replications) cfg.replications = *o.replications;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.returns.empty()) cfg.returns_path = o.returns;
  if (!o.vol.empty()) cfg.vol_path = o.vol;
  if (!o.external_sigma.empty()) cfg.external_sigma_path = o.external_sigma;
  validate(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

fs::path replication_dir(const RunConfig& cfg, int rep) {
  fs::path dir = cfg.output_dir;
  if (cfg.replications > 1) dir /= "rep_" + std::to_string(rep + 1);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

struct Inputs {
  DatedTable returns;
  std::vector<double> vol;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.returns_path.empty()) throw ConfigError("no returns file (run.returns or --returns)");
  if (cfg.vol_path.empty()) throw ConfigError("no volatility index file (run.vol_index or --vol)");
  Inputs in;
  in.returns = read_dated_csv(cfg.returns_path);
  const DatedTable v = read_dated_csv(cfg.vol_path);
  if (v.values.cols() != 1) throw DataError(cfg.vol_path + ": expected exactly one value column");
  if (v.dates != in.returns.dates) throw DataError(cfg.vol_path + ": dates do not match " + cfg.returns_path);
  in.vol.assign(v.values.data(), v.values.data() + v.values.rows());
  return in;
}

SamplerConfig seeded(SamplerConfig s, std::uint64_t seed) {
  s.seed = seed;
  return s;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto& sc = cfg.simulate;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    const ModelParams truth = random_truth(sc.n, sc.edge_prob, sc.edge, sc.beta_es, sc.a_c, sc.b_c, rng);
    const auto vol = simulate_ar1(sc.T, sc.vol, rng);
    const SimulatedDataset ds = simulate_dataset(truth, sc.T, vol, rng);
    const fs::path dir = replication_dir(cfg, rep);
    const std::string prov = provenance_line(cfg) + ",replication=" + std::to_string(rep + 1);

    DatedTable r{synthetic_dates(sc.T), {}, ds.returns};
    for (int i = 0; i < sc.n; ++i) r.symbols.push_back("S" + std::to_string(i + 1));
    auto ro = open_out(dir / "returns.csv");
    write_dated_csv(ro, r, prov);
    DatedTable v{r.dates, {"vol_index"}, Eigen::Map<const Vector>(ds.vol_index.data(), sc.T)};
    auto vo = open_out(dir / "vol_index.csv");
    write_dated_csv(vo, v, prov);
    auto to = open_out(dir / "truth.json");
    to << nlohmann::json{{"theta", to_json(ds.theta)}, {"path", to_json(ds.truth)}}.dump(1) << '\n';
    std::printf("simulated %d days of %d series into %s\n", sc.T, sc.n, dir.string().c_str());
  }
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const int T = static_cast<int>(in.returns.values.rows());
  const int n = static_cast<int>(in.returns.values.cols());
  for (int rep = 0; rep < cfg.replications; ++rep) {
    const fs::path dir = replication_dir(cfg, rep);
    RunConfig rc = cfg;
    rc.sampler = seeded(cfg.sampler, derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    ChainResult res;
    {
      ArchiveWriter w((dir / "chain.jsonl").string(), rc, n, T);
      res = fit(rc.sampler, in.returns.values, in.vol, [&](const ChainSample& s) { w.write_sample(s); });
      w.write_fitted(res);
    }
    const std::string prov = provenance_line(rc);
    auto fo = open_out(dir / "edge_freq.csv");
    write_edge_freq_csv(fo, res.edge_freq, prov);
    auto so = open_out(dir / "summary.csv");
    so << prov << "\nparameter,mean,lower,upper\n";
    for (const auto& p : summarize(continuous_param_names(n), res.samples))
      so << p.name << ',' << p.mean << ',' << p.lower << ',' << p.upper << '\n';
    auto mo = open_out(dir / "moves.csv");
    mo << prov << "\nmove,proposed,accepted,rate\n";
    for (const auto& [name, st] : res.moves)
      mo << name << ',' << st.proposed << ',' << st.accepted << ',' << st.rate() << '\n';
    std::printf("fit %d sweeps, %zu samples kept, output in %s\n", rc.sampler.iterations, res.samples.size(),
                dir.string().c_str());
  }
  return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& archive_path) {
  const fs::path dir = cfg.output_dir;
  const std::string path = archive_path.empty() ? (dir / "chain.jsonl").string() : archive_path;
  const Archive a = read_archive(path);
  if (!a.fitted) throw DataError(path + ": archive has no fitted record");
  PredictConfig pc = cfg.predict;
  pc.seed = cfg.seed;
  const PredictionBundle b = predict_paths(*a.fitted, pc);
  fs::create_directories(dir);
  const std::string prov = provenance_line(cfg);
  auto po = open_out(dir / "paths.csv");
  write_bundle_csv(po, b, prov);
  auto ro = open_out(dir / "risk.csv");
  ro << prov << "\nh,density,clustering,var_" << cfg.risk.alpha << '\n';
  for (int h = 1; h <= b.horizon; ++h) {
    const RiskIndicators ri = risk_indicators(b, cfg.risk.alpha, h);
    ro << h << ',' << ri.nd_bar << ',' << ri.cc_bar << ',' << ri.var_alpha << '\n';
  }
  std::printf("predicted %zu of %d paths over %d days into %s\n", b.paths.size(), b.requested_paths, b.horizon,
              dir.string().c_str());
  return 0;
}

std::vector<Matrix> load_external_sigma(const std::string& path, const DatedTable& returns) {
  const DatedTable t = read_dated_csv(path);
  const int n = static_cast<int>(returns.values.cols());
  if (t.values.cols() != n * (n + 1) / 2)
    throw DataError(path + ": expected " + std::to_string(n * (n + 1) / 2) + " lower-triangle columns");
  if (t.dates != returns.dates) throw DataError(path + ": dates do not match the returns");
  std::vector<Matrix> out;
  for (Eigen::Index r = 0; r < t.values.rows(); ++r) {
    Matrix s(n, n);
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = t.values(r, c++);
    out.push_back(s);
  }
  return out;
}

int cmd_backtest(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  BacktestConfig bc = cfg.backtest;
  bc.seed = cfg.seed;
  std::unique_ptr<Forecaster> f;
  if (!cfg.external_sigma_path.empty())
    f = std::make_unique<ExternalForecaster>(load_external_sigma(cfg.external_sigma_path, in.returns));
  else
    f = std::make_unique<ModelForecaster>(cfg.sampler, cfg.predict.paths);
  const BacktestLedger ledger = run_backtest(*f, in.returns.values, in.vol, bc, cfg.strategy, cfg.risk);
  fs::create_directories(cfg.output_dir);
  auto lo = open_out(fs::path(cfg.output_dir) / "ledger.csv");
  write_ledger_csv(lo, ledger, in.returns.dates, provenance_line(cfg));
  if (!ledger.failure.empty()) {
    std::fprintf(stderr, "backtest stopped early: %s\n", ledger.failure.c_str());
    return 3;
  }
  std::printf("backtest over %zu days, final value %.4f\n", ledger.rows.size(),
              ledger.rows.empty() ? bc.start_value : ledger.rows.back().value);
  return 0;
}

int cmd_report(const RunConfig& cfg, const std::string& archive_path) {
  const std::string path =
      archive_path.empty() ? (fs::path(cfg.output_dir) / "chain.jsonl").string() : archive_path;
  const Archive a = read_archive(path);
  std::printf("archive %s\n", path.c_str());
  std::printf("config_hash %s seed %s n %d T %d samples %zu\n", a.header.at("config_hash").get<std::string>().c_str(),
              a.header.at("seed").dump().c_str(), a.header.at("n").get<int>(), a.header.at("T").get<int>(),
              a.samples.size());
  std::printf("%-28s %12s %12s %12s\n", "parameter", "mean", "2.5%", "97.5%");
  for (const auto& p : summarize(a.param_names, a.samples))
    std::printf("%-28s %12.5f %12.5f %12.5f\n", p.name.c_str(), p.mean, p.lower, p.upper);
  if (a.fitted) {
    const auto st = network_stats(a.fitted->g_T);
    std::printf("terminal network: %d edges, density %.4f, clustering %.4f\n", a.fitted->g_T.edge_count(),
                st.density, st.clustering);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic Bayesian networks with addition/deletion edge dynamics"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--replications", o.replications, "independent replications (simulate, fit)");
  app.add_option("--threads", o.threads, "OpenMP threads (0 keeps the default)");

  auto* sim = app.add_subcommand("simulate", "generate synthetic returns, volatility index and ground truth");
  auto* fitc = app.add_subcommand("fit", "run the MCMC sampler and archive the chain");
  auto* pred = app.add_subcommand("predict", "Monte Carlo forecasts from an archived chain");
  auto* bt = app.add_subcommand("backtest", "rolling-window portfolio backtest");
  auto* rep = app.add_subcommand("report", "posterior summary of an archived chain");
  for (auto* sc : {fitc, bt}) {
    sc->add_option("--returns", o.returns, "dated CSV of returns");
    sc->add_option("--vol", o.vol, "dated CSV of the volatility index");
  }
  bt->add_option("--external-sigma", o.external_sigma, "dated CSV of external covariance forecasts");
  for (auto* sc : {pred, rep}) sc->add_option("--archive", o.archive, "chain archive (default <out>/chain.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = effective_config(o);
    if (*sim) return cmd_simulate(cfg);
    if (*fitc) return cmd_fit(cfg);
    if (*pred) return cmd_predict(cfg, o.archive);
    if (*bt) return cmd_backtest(cfg);
    if (*rep) return cmd_report(cfg, o.archive);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 4;
  } catch (const StructuralError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
