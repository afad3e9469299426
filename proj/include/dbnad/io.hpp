#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dbnad/backtest.hpp"
#include "dbnad/sampler.hpp"
#include "dbnad/simulate.hpp"
#include "json.hpp"

namespace dbnad {

/// A dated numeric table: first column ISO dates, then one column per symbol.
struct DatedTable {
  std::vector<std::string> dates;
  std::vector<std::string> symbols;
  Matrix values;  ///< rows follow dates
};

/// Parses the CSV form. Lines starting with '#' are provenance comments and
/// skipped. Ragged rows, non-numeric or missing cells, malformed, duplicate
/// or decreasing dates raise DataError naming the line (and column).
DatedTable read_dated_csv(std::istream& in, const std::string& source = "<input>");
DatedTable read_dated_csv(const std::string& path);
void write_dated_csv(std::ostream& out, const DatedTable& table, const std::string& provenance);

/// Synthetic business-day style labels 2000-01-01 + k days, for generated data.
std::vector<std::string> synthetic_dates(int count);

struct SimulationConfig {
  int n = 5;
  int T = 250;
  double edge_prob = 0.4;
  EdgeDynParams edge{0.1, 0.1, 0.0215, 0.9141, 0.0215, 0.9141, 0.1266, -0.1372};
  double beta_es = 0.4055;
  double a_c = 0.0603;
  double b_c = 0.877;
  Ar1Config vol;
};

/// Everything a CLI run needs. Read from an INI file with sections [run],
/// [sampler], [predict], [backtest] and [simulate].
struct RunConfig {
  std::uint64_t seed = 1;
  std::string returns_path;
  std::string vol_path;
  std::string external_sigma_path;
  std::string output_dir = "out";
  int replications = 1;
  int threads = 0;  ///< 0 keeps the OpenMP default
  SamplerConfig sampler;
  PredictConfig predict;
  BacktestConfig backtest;
  Strategy strategy = Strategy::AlwaysInvest;
  RiskConfig risk;
  SimulationConfig simulate;

  /// Effective settings as sorted "section.key=value" lines.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

/// Throws ConfigError for unknown keys, malformed values or values outside
/// their domain.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);

inline constexpr int kArchiveSchema = 1;

/// Line-delimited JSON archive of a chain: a header record, one record per
/// retained sample and a closing record with the fitted model.
class ArchiveWriter {
 public:
  ArchiveWriter(const std::string& path, const RunConfig& cfg, int n, int T);
  void write_sample(const ChainSample& s);
  void write_fitted(const ChainResult& result);

 private:
  void emit(const nlohmann::json& record);
  std::ofstream out_;
};

struct Archive {
  nlohmann::json header;
  std::vector<ChainSample> samples;
  std::optional<FittedModel> fitted;
  std::vector<std::string> param_names;
};

/// Throws DataError on malformed records or a schema version mismatch.
Archive read_archive(const std::string& path);

nlohmann::json to_json(const ModelParams& theta);
ModelParams model_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FittedModel& f);
FittedModel fitted_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LatentPath& path);

/// CSV writers. Each file starts with a "# config_hash=...,seed=..." line.
std::string provenance_line(const RunConfig& cfg);
void write_bundle_csv(std::ostream& out, const PredictionBundle& b, const std::string& provenance);
void write_ledger_csv(std::ostream& out, const BacktestLedger& ledger, const std::vector<std::string>& dates,
                      const std::string& provenance);
void write_edge_freq_csv(std::ostream& out, const std::vector<Matrix>& freq, const std::string& provenance);

/// Posterior summary row: mean and 2.5% / 97.5% sample quantiles.
struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
std::vector<ParamSummary> summarize(const std::vector<std::string>& names, const std::vector<ChainSample>& samples);

}  // namespace dbnad
