#include "dbnad/io.hpp"

#include <algorithm>
#include <boost/date_time/gregorian/gregorian.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "dbnad/bge.hpp"
#include "dbnad/error.hpp"

namespace dbnad {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && p == e && std::isfinite(v);
}

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  try {
    boost::gregorian::from_simple_string(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Registry of configuration keys shared by the parser and canonical().
struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
T parse_value(const std::string& key, const std::string& raw);

template <>
int parse_value<int>(const std::string& key, const std::string& raw) {
  int v = 0;
  auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || p != raw.data() + raw.size()) throw ConfigError(key + ": expected an integer, got '" + raw + "'");
  return v;
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& key, const std::string& raw) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || p != raw.data() + raw.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
  return v;
}

template <>
double parse_value<double>(const std::string& key, const std::string& raw) {
  double v = 0.0;
  if (!parse_double(raw, v)) throw ConfigError(key + ": expected a number, got '" + raw + "'");
  return v;
}

template <>
bool parse_value<bool>(const std::string& key, const std::string& raw) {
  if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
  if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + raw + "'");
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string& raw) {
  return raw;
}

std::string show(int v) { return std::to_string(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(double v) { return fmt_double(v); }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(const std::string& v) { return v; }

template <class T>
Field field(std::string key, T RunConfig::*member) {
  return {key, [member, key](RunConfig& c, const std::string& raw) { c.*member = parse_value<T>(key, raw); },
          [member](const RunConfig& c) { return show(c.*member); }};
}

template <class S, class T>
Field nested(std::string key, S RunConfig::*outer, T S::*inner) {
  return {key,
          [outer, inner, key](RunConfig& c, const std::string& raw) { (c.*outer).*inner = parse_value<T>(key, raw); },
          [outer, inner](const RunConfig& c) { return show((c.*outer).*inner); }};
}

Field edge_field(std::string key, double EdgeDynParams::*inner) {
  return {key, [inner, key](RunConfig& c, const std::string& raw) { c.simulate.edge.*inner = parse_value<double>(key, raw); },
          [inner](const RunConfig& c) { return show(c.simulate.edge.*inner); }};
}

Field vol_field(std::string key, double Ar1Config::*inner) {
  return {key, [inner, key](RunConfig& c, const std::string& raw) { c.simulate.vol.*inner = parse_value<double>(key, raw); },
          [inner](const RunConfig& c) { return show(c.simulate.vol.*inner); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v{
        field("run.seed", &RunConfig::seed),
        field("run.returns", &RunConfig::returns_path),
        field("run.vol_index", &RunConfig::vol_path),
        field("run.external_sigma", &RunConfig::external_sigma_path),
        field("run.out", &RunConfig::output_dir),
        field("run.replications", &RunConfig::replications),
        field("run.threads", &RunConfig::threads),
        nested("sampler.iterations", &RunConfig::sampler, &SamplerConfig::iterations),
        nested("sampler.burn_in", &RunConfig::sampler, &SamplerConfig::burn_in),
        nested("sampler.thin", &RunConfig::sampler, &SamplerConfig::thin),
        nested("sampler.max_block", &RunConfig::sampler, &SamplerConfig::max_block),
        nested("sampler.max_structure_steps", &RunConfig::sampler, &SamplerConfig::max_structure_steps),
        nested("sampler.init_window", &RunConfig::sampler, &SamplerConfig::init_window),
        nested("sampler.init_lambda", &RunConfig::sampler, &SamplerConfig::init_lambda),
        nested("sampler.init_max_moves", &RunConfig::sampler, &SamplerConfig::init_max_moves),
        nested("sampler.ram_initial_scale", &RunConfig::sampler, &SamplerConfig::ram_initial_scale),
        nested("sampler.count_moves_per_sweep", &RunConfig::sampler, &SamplerConfig::count_moves_per_sweep),
        nested("sampler.update_structure", &RunConfig::sampler, &SamplerConfig::update_structure),
        nested("sampler.update_counts", &RunConfig::sampler, &SamplerConfig::update_counts),
        nested("sampler.update_rbar", &RunConfig::sampler, &SamplerConfig::update_rbar),
        {"sampler.ram_blocks",
         [](RunConfig& c, const std::string& raw) {
           if (raw.size() != kRamBlocks || raw.find_first_not_of("01") != std::string::npos)
             throw ConfigError("sampler.ram_blocks: expected " + std::to_string(kRamBlocks) + " characters of 0/1");
           for (int b = 0; b < kRamBlocks; ++b) c.sampler.ram_blocks[b] = raw[b] == '1';
         },
         [](const RunConfig& c) {
           std::string s;
           for (bool b : c.sampler.ram_blocks) s += b ? '1' : '0';
           return s;
         }},
        nested("predict.horizon", &RunConfig::predict, &PredictConfig::horizon),
        nested("predict.paths", &RunConfig::predict, &PredictConfig::paths),
        nested("predict.freeze_network", &RunConfig::predict, &PredictConfig::freeze_network),
        nested("backtest.window", &RunConfig::backtest, &BacktestConfig::window),
        nested("backtest.refit_every", &RunConfig::backtest, &BacktestConfig::refit_every),
        nested("backtest.start_value", &RunConfig::backtest, &BacktestConfig::start_value),
        {"backtest.strategy",
         [](RunConfig& c, const std::string& raw) {
           const int s = parse_value<int>("backtest.strategy", raw);
           if (s != 1 && s != 2) throw ConfigError("backtest.strategy: expected 1 or 2");
           c.strategy = static_cast<Strategy>(s);
         },
         [](const RunConfig& c) { return std::to_string(static_cast<int>(c.strategy)); }},
        {"backtest.indicator", [](RunConfig& c, const std::string& raw) { c.risk.kind = parse_indicator(raw); },
         [](const RunConfig& c) { return to_string(c.risk.kind); }},
        nested("backtest.alpha", &RunConfig::risk, &RiskConfig::alpha),
        nested("backtest.lookback", &RunConfig::risk, &RiskConfig::lookback),
        nested("simulate.n", &RunConfig::simulate, &SimulationConfig::n),
        nested("simulate.T", &RunConfig::simulate, &SimulationConfig::T),
        nested("simulate.edge_prob", &RunConfig::simulate, &SimulationConfig::edge_prob),
        edge_field("simulate.mu_bar_a", &EdgeDynParams::mu_bar_a),
        edge_field("simulate.mu_bar_d", &EdgeDynParams::mu_bar_d),
        edge_field("simulate.alpha1", &EdgeDynParams::alpha1),
        edge_field("simulate.beta1", &EdgeDynParams::beta1),
        edge_field("simulate.alpha2", &EdgeDynParams::alpha2),
        edge_field("simulate.beta2", &EdgeDynParams::beta2),
        edge_field("simulate.gamma1", &EdgeDynParams::gamma1),
        edge_field("simulate.gamma2", &EdgeDynParams::gamma2),
        nested("simulate.beta_es", &RunConfig::simulate, &SimulationConfig::beta_es),
        nested("simulate.a_c", &RunConfig::simulate, &SimulationConfig::a_c),
        nested("simulate.b_c", &RunConfig::simulate, &SimulationConfig::b_c),
        vol_field("simulate.vol_mean", &Ar1Config::mean),
        vol_field("simulate.vol_phi", &Ar1Config::phi),
        vol_field("simulate.vol_sd", &Ar1Config::sd),
    };
    std::sort(v.begin(), v.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
    return v;
  }();
  return f;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Matrix matrix_from(const json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(j[i].size()) != c) throw DataError("archive: ragged matrix");
    for (int k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json edges_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (const auto& e : edges) a.push_back({e.from + 1, e.to + 1});
  return a;
}

std::vector<Edge> edges_from(const json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) out.push_back({e.at(0).get<int>() - 1, e.at(1).get<int>() - 1});
  return out;
}

json sample_json(const ChainSample& s) {
  return {{"type", "sample"},   {"iteration", s.iteration},         {"theta", s.theta},
          {"adds", s.adds},     {"dels", s.dels},                   {"g1", edges_json(s.g1)},
          {"terminal_hash", s.terminal_hash}, {"log_posterior", s.log_posterior}};
}

}  // namespace

DatedTable read_dated_csv(std::istream& in, const std::string& source) {
  DatedTable t;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (!have_header) {
      if (cells.size() < 2) throw DataError(where + ": header needs a date column and at least one symbol");
      t.symbols.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != t.symbols.size() + 1)
      throw DataError(where + ": expected " + std::to_string(t.symbols.size() + 1) + " cells, found " +
                      std::to_string(cells.size()));
    if (!is_iso_date(cells[0])) throw DataError(where + ": '" + cells[0] + "' is not an ISO date (YYYY-MM-DD)");
    if (!t.dates.empty()) {
      if (cells[0] == t.dates.back()) throw DataError(where + ": duplicate date " + cells[0]);
      if (cells[0] < t.dates.back())
        throw DataError(where + ": date " + cells[0] + " is earlier than the previous row " + t.dates.back());
    }
    std::vector<double> r(t.symbols.size());
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (cells[k].empty()) throw DataError(where + ": missing value in column " + t.symbols[k - 1]);
      if (!parse_double(cells[k], r[k - 1]))
        throw DataError(where + ": non-numeric value '" + cells[k] + "' in column " + t.symbols[k - 1]);
    }
    t.dates.push_back(cells[0]);
    rows.push_back(std::move(r));
  }
  if (!have_header) throw DataError(source + ": empty file");
  if (rows.empty()) throw DataError(source + ": no data rows");
  t.values.resize(static_cast<int>(rows.size()), static_cast<int>(t.symbols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) t.values(i, j) = rows[i][j];
  return t;
}

DatedTable read_dated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_dated_csv(in, path);
}

void write_dated_csv(std::ostream& out, const DatedTable& t, const std::string& provenance) {
  if (!provenance.empty()) out << provenance << '\n';
  out << "date";
  for (const auto& s : t.symbols) out << ',' << s;
  out << '\n';
  for (int i = 0; i < t.values.rows(); ++i) {
    out << t.dates[i];
    for (int j = 0; j < t.values.cols(); ++j) out << ',' << fmt_double(t.values(i, j));
    out << '\n';
  }
}

std::vector<std::string> synthetic_dates(int count) {
  std::vector<std::string> out;
  out.reserve(count);
  const boost::gregorian::date first(2000, 1, 1);
  for (int k = 0; k < count; ++k)
    out.push_back(boost::gregorian::to_iso_extended_string(first + boost::gregorian::days(k)));
  return out;
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& f : fields()) s += f.key + "=" + f.get(*this) + "\n";
  return s;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

std::string RunConfig::hash_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig cfg;
  const auto& reg = fields();
  for (const auto& [section, keys] : tree) {
    if (keys.empty()) throw ConfigError("config entry '" + section + "' must be inside a section");
    for (const auto& [key, value] : keys) {
      const std::string full = section + "." + key;
      auto it = std::find_if(reg.begin(), reg.end(), [&](const Field& f) { return f.key == full; });
      if (it == reg.end()) throw ConfigError("unknown config key '" + full + "'");
      it->set(cfg, trim(value.get_value<std::string>()));
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in);
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.replications >= 1, "run.replications must be >= 1");
  require(c.threads >= 0, "run.threads must be >= 0");
  const auto& s = c.sampler;
  require(s.iterations >= 0, "sampler.iterations must be >= 0");
  require(s.thin >= 1, "sampler.thin must be >= 1");
  require(s.burn_in <= s.iterations, "sampler.burn_in exceeds sampler.iterations");
  require(s.max_block >= 2, "sampler.max_block must be >= 2");
  require(s.max_structure_steps >= 1, "sampler.max_structure_steps must be >= 1");
  require(s.init_window >= kBgeMinRows, "sampler.init_window must be >= " + std::to_string(kBgeMinRows));
  require(s.ram_initial_scale > 0.0, "sampler.ram_initial_scale must be positive");
  require(s.count_moves_per_sweep >= 0, "sampler.count_moves_per_sweep must be >= 0");
  require(c.predict.horizon >= 1 && c.predict.paths >= 1, "predict.horizon and predict.paths must be >= 1");
  require(c.backtest.window >= kBgeMinRows, "backtest.window too small");
  require(c.backtest.refit_every >= 1, "backtest.refit_every must be >= 1");
  require(c.backtest.start_value > 0.0, "backtest.start_value must be positive");
  require(c.risk.alpha > 0.0 && c.risk.alpha < 0.5, "backtest.alpha must lie in (0, 0.5)");
  require(c.risk.lookback >= 1, "backtest.lookback must be >= 1");
  require(c.simulate.n >= 2 && c.simulate.T >= 2, "simulate.n and simulate.T must be >= 2");
  require(c.simulate.edge_prob >= 0.0 && c.simulate.edge_prob <= 1.0, "simulate.edge_prob must lie in [0, 1]");
}

ArchiveWriter::ArchiveWriter(const std::string& path, const RunConfig& cfg, int n, int T) : out_(path) {
  if (!out_) throw DataError("cannot write archive " + path);
  emit({{"type", "header"},
        {"schema", kArchiveSchema},
        {"config_hash", cfg.hash_hex()},
        {"seed", cfg.seed},
        {"n", n},
        {"T", T},
        {"param_names", continuous_param_names(n)}});
}

void ArchiveWriter::emit(const json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
}

void ArchiveWriter::write_sample(const ChainSample& s) { emit(sample_json(s)); }

void ArchiveWriter::write_fitted(const ChainResult& r) {
  json moves = json::object();
  for (const auto& [name, st] : r.moves) moves[name] = {{"proposed", st.proposed}, {"accepted", st.accepted}};
  emit({{"type", "fitted"},
        {"fitted", to_json(r.fitted)},
        {"initial", to_json(r.initial)},
        {"moves", moves},
        {"wishart_dof", r.final_wishart_dof},
        {"log_post_trace", r.log_post_trace}});
}

Archive read_archive(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open archive " + path);
  Archive a;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed record (" + e.what() + ")");
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (line_no == 1 && type != "header") throw DataError(where + ": archive must start with a header record");
      if (type == "header") {
        if (j.at("schema").get<int>() != kArchiveSchema)
          throw DataError(where + ": archive schema " + std::to_string(j.at("schema").get<int>()) +
                          " does not match supported schema " + std::to_string(kArchiveSchema));
        a.header = j;
        a.param_names = j.at("param_names").get<std::vector<std::string>>();
      } else if (type == "sample") {
        ChainSample s;
        s.iteration = j.at("iteration").get<int>();
        s.theta = j.at("theta").get<std::vector<double>>();
        s.adds = j.at("adds").get<std::vector<int>>();
        s.dels = j.at("dels").get<std::vector<int>>();
        s.g1 = edges_from(j.at("g1"));
        s.terminal_hash = j.at("terminal_hash").get<std::uint64_t>();
        s.log_posterior = j.at("log_posterior").get<double>();
        if (s.theta.size() != a.param_names.size()) throw DataError(where + ": parameter vector length mismatch");
        a.samples.push_back(std::move(s));
      } else if (type == "fitted") {
        a.fitted = fitted_from_json(j.at("fitted"));
      } else {
        throw DataError(where + ": unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed record (" + e.what() + ")");
    }
  }
  if (a.header.is_null()) throw DataError(path + ": empty archive");
  return a;
}

json to_json(const ModelParams& theta) {
  return {{"n", theta.n()},
          {"g1", edges_json(theta.g1.edges())},
          {"adds", theta.adds},
          {"dels", theta.dels},
          {"continuous", flatten_continuous(theta)}};
}

ModelParams model_params_from_json(const json& j) {
  ModelParams shape;
  const int n = j.at("n").get<int>();
  const auto edges = edges_from(j.at("g1"));
  shape.g1 = Dag::from_edges(n, edges);
  shape.adds = j.at("adds").get<std::vector<int>>();
  shape.dels = j.at("dels").get<std::vector<int>>();
  return unflatten_continuous(shape, j.at("continuous").get<std::vector<double>>());
}

json to_json(const FittedModel& f) {
  return {{"theta", to_json(f.theta)},
          {"g_T", edges_json(f.g_T.edges())},
          {"a_T", f.a_T},
          {"d_T", f.d_T},
          {"sigma_T", matrix_json(f.sigma_T)},
          {"mu_a_T", f.mu_a_T},
          {"mu_d_T", f.mu_d_T},
          {"w_T", f.w_T},
          {"sigma2_T", f.sigma2_T},
          {"x_T", std::vector<double>(f.x_T.data(), f.x_T.data() + f.x_T.size())},
          {"v_bar", f.v_bar},
          {"v_last", f.v_last},
          {"horizon", f.horizon}};
}

FittedModel fitted_from_json(const json& j) {
  FittedModel f;
  f.theta = model_params_from_json(j.at("theta"));
  const int n = f.theta.n();
  f.g_T = Dag::from_edges(n, edges_from(j.at("g_T")));
  f.a_T = j.at("a_T").get<int>();
  f.d_T = j.at("d_T").get<int>();
  f.sigma_T = matrix_from(j.at("sigma_T"));
  f.mu_a_T = j.at("mu_a_T").get<double>();
  f.mu_d_T = j.at("mu_d_T").get<double>();
  f.w_T = j.at("w_T").get<std::vector<double>>();
  f.sigma2_T = j.at("sigma2_T").get<std::vector<double>>();
  const auto x = j.at("x_T").get<std::vector<double>>();
  f.x_T = Eigen::Map<const Vector>(x.data(), static_cast<int>(x.size()));
  f.v_bar = j.at("v_bar").get<double>();
  f.v_last = j.at("v_last").get<double>();
  f.horizon = j.at("horizon").get<int>();
  if (f.sigma_T.rows() != n || static_cast<int>(f.w_T.size()) != n || static_cast<int>(f.sigma2_T.size()) != n ||
      f.x_T.size() != n)
    throw DataError("fitted model: inconsistent dimensions");
  return f;
}

json to_json(const LatentPath& path) {
  json steps = json::array();
  for (const auto& s : path.steps) {
    steps.push_back({{"t", s->t},
                     {"edges", edges_json(s->graph.edges())},
                     {"a", s->counts.a},
                     {"d", s->counts.d},
                     {"mu_a", s->counts.mu_a},
                     {"mu_d", s->counts.mu_d},
                     {"w", s->w},
                     {"sigma2", s->dep.sigma2}});
  }
  return {{"v_bar", path.v_bar}, {"steps", steps}};
}

std::string provenance_line(const RunConfig& cfg) {
  return "# config_hash=" + cfg.hash_hex() + ",seed=" + std::to_string(cfg.seed);
}

void write_bundle_csv(std::ostream& out, const PredictionBundle& b, const std::string& provenance) {
  if (!provenance.empty()) out << provenance << '\n';
  if (b.paths.empty()) return;
  const int n = static_cast<int>(b.paths[0][0].sigma.rows());
  out << "path,h,density,clustering";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out << ",sigma_" << i + 1 << '_' << j + 1;
  for (int i = 0; i < n; ++i) out << ",r_" << i + 1;
  out << '\n';
  for (std::size_t l = 0; l < b.paths.size(); ++l) {
    for (std::size_t h = 0; h < b.paths[l].size(); ++h) {
      const auto& s = b.paths[l][h];
      out << b.path_ids[l] + 1 << ',' << h + 1 << ',' << fmt_double(s.stats.density) << ','
          << fmt_double(s.stats.clustering);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) out << ',' << fmt_double(s.sigma(i, j));
      for (int i = 0; i < n; ++i) out << ',' << fmt_double(s.returns(i));
      out << '\n';
    }
  }
}

void write_ledger_csv(std::ostream& out, const BacktestLedger& ledger, const std::vector<std::string>& dates,
                      const std::string& provenance) {
  if (!provenance.empty()) out << provenance << '\n';
  const int n = ledger.rows.empty() ? 0 : static_cast<int>(ledger.rows[0].weights.size());
  out << "date,invested,indicator,threshold";
  for (int i = 0; i < n; ++i) out << ",w_" << i + 1;
  out << ",daily_return,value\n";
  for (const auto& r : ledger.rows) {
    out << (r.day < static_cast<int>(dates.size()) ? dates[r.day] : std::to_string(r.day + 1)) << ','
        << (r.invested ? 1 : 0) << ',' << fmt_double(r.indicator) << ','
        << (std::isnan(r.threshold) ? std::string("NA") : fmt_double(r.threshold));
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(r.weights(i));
    out << ',' << fmt_double(r.daily_return) << ',' << fmt_double(r.value) << '\n';
  }
}

void write_edge_freq_csv(std::ostream& out, const std::vector<Matrix>& freq, const std::string& provenance) {
  if (!provenance.empty()) out << provenance << '\n';
  out << "t,from,to,frequency\n";
  for (std::size_t t = 0; t < freq.size(); ++t)
    for (int i = 0; i < freq[t].rows(); ++i)
      for (int j = 0; j < freq[t].cols(); ++j)
        if (i != j) out << t + 1 << ',' << i + 1 << ',' << j + 1 << ',' << fmt_double(freq[t](i, j)) << '\n';
}

std::vector<ParamSummary> summarize(const std::vector<std::string>& names, const std::vector<ChainSample>& samples) {
  std::vector<ParamSummary> out;
  if (samples.empty()) return out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.theta.at(k));
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    out.push_back({names[k], mean, quantile(v, 0.025), quantile(v, 0.975)});
  }
  return out;
}

}  // namespace dbnad
