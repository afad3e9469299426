#include "dbnad/backtest.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "dbnad/error.hpp"

namespace dbnad {

IndicatorKind parse_indicator(const std::string& s) {
  if (s == "density" || s == "nd") return IndicatorKind::Density;
  if (s == "clustering" || s == "cc") return IndicatorKind::Clustering;
  if (s == "var") return IndicatorKind::VaR;
  throw ConfigError("unknown indicator kind '" + s + "' (expected density, clustering or var)");
}

std::string to_string(IndicatorKind k) {
  switch (k) {
    case IndicatorKind::Density:
      return "density";
    case IndicatorKind::Clustering:
      return "clustering";
    case IndicatorKind::VaR:
      break;
  }
  return "var";
}

double DayForecast::indicator(const RiskConfig& risk) const {
  switch (risk.kind) {
    case IndicatorKind::Density:
    case IndicatorKind::Clustering:
      if (!has_network) throw ConfigError("network indicators need a network forecast");
      return risk.kind == IndicatorKind::Density ? density : clustering;
    case IndicatorKind::VaR:
      break;
  }
  if (!path_returns.empty()) return -quantile(path_returns, risk.alpha);
  const Vector w = min_variance_weights(sigma_hat);
  const double sd = std::sqrt(w.dot(sigma_hat * w));
  return -boost::math::quantile(boost::math::normal(), risk.alpha) * sd;
}

ModelForecaster::ModelForecaster(SamplerConfig sampler, int paths) : sampler_(std::move(sampler)), paths_(paths) {}

std::vector<DayForecast> ModelForecaster::forecast(const ReturnMatrix& window, std::span<const double> vol_window,
                                                   int first_day, int horizon, std::uint64_t seed) {
  SamplerConfig cfg = sampler_;
  cfg.seed = derive_seed(seed, 0);
  const ChainResult chain = fit(cfg, window, vol_window);
  PredictConfig pc;
  pc.horizon = horizon;
  pc.paths = paths_;
  pc.seed = derive_seed(seed, 1);
  const PredictionBundle bundle = predict_paths(chain.fitted, pc);
  std::vector<DayForecast> out;
  for (int h = 1; h <= horizon; ++h) {
    DayForecast f;
    f.day = first_day + h - 1;
    f.sigma_hat = bundle.sigma_hat[h - 1];
    f.density = bundle.mean_density[h - 1];
    f.clustering = bundle.mean_clustering[h - 1];
    f.path_returns = path_portfolio_returns(bundle, h);
    out.push_back(std::move(f));
  }
  return out;
}

ExternalForecaster::ExternalForecaster(std::vector<Matrix> sigma_by_day) : sigma_(std::move(sigma_by_day)) {}

std::vector<DayForecast> ExternalForecaster::forecast(const ReturnMatrix&, std::span<const double>, int first_day,
                                                      int horizon, std::uint64_t) {
  std::vector<DayForecast> out;
  for (int h = 0; h < horizon; ++h) {
    const int day = first_day + h;
    if (day >= static_cast<int>(sigma_.size()) || sigma_[day].size() == 0)
      throw DataError("external forecasts missing for day " + std::to_string(day + 1));
    DayForecast f;
    f.day = day;
    f.sigma_hat = sigma_[day];
    f.has_network = false;
    out.push_back(std::move(f));
  }
  return out;
}

ForecastSeries compute_forecasts(Forecaster& forecaster, const ReturnMatrix& returns,
                                 std::span<const double> vol_index, const BacktestConfig& cfg) {
  const int total = static_cast<int>(returns.rows());
  if (cfg.window < 1 || cfg.refit_every < 1) throw ConfigError("backtest: window and refit interval must be positive");
  if (total <= cfg.window) throw DataError("backtest: series must be longer than one fitting window");
  if (static_cast<int>(vol_index.size()) != total) throw DataError("backtest: volatility index length mismatch");

  ForecastSeries series;
  for (int first = cfg.window, k = 0; first < total; first += cfg.refit_every, ++k) {
    const int days = std::min(cfg.refit_every, total - first);
    RefitRecord rec{first - cfg.window, first, first, days};
    const ReturnMatrix window = returns.middleRows(rec.window_start, cfg.window);
    std::vector<DayForecast> f;
    try {
      f = forecaster.forecast(window, vol_index.subspan(rec.window_start, cfg.window), first, days,
                              derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    } catch (const Error& e) {
      series.failure = "window " + std::to_string(k + 1) + " (rows " + std::to_string(rec.window_start + 1) + "-" +
                       std::to_string(rec.window_end) + "): " + e.what();
      break;
    }
    if (static_cast<int>(f.size()) != days) throw DataError("backtest: forecaster returned the wrong number of days");
    series.refits.push_back(rec);
    for (auto& d : f) series.days.push_back(std::move(d));
  }
  return series;
}

BacktestLedger apply_strategy(const ForecastSeries& forecasts, const ReturnMatrix& returns, Strategy strategy,
                              const RiskConfig& risk, double start_value) {
  if (!(risk.alpha > 0.0 && risk.alpha < 0.5)) throw ConfigError("risk alpha must lie in (0, 0.5)");
  if (risk.lookback < 1) throw ConfigError("indicator lookback must be positive");
  BacktestLedger ledger;
  ledger.strategy = strategy;
  ledger.risk = risk;
  ledger.refits = forecasts.refits;
  ledger.failure = forecasts.failure;
  double log_value = std::log(start_value);
  std::vector<double> history;
  for (const auto& f : forecasts.days) {
    LedgerRow row;
    row.day = f.day;
    row.weights = min_variance_weights(f.sigma_hat);
    row.threshold = std::numeric_limits<double>::quiet_NaN();
    if (strategy == Strategy::AlwaysInvest) {
      row.invested = true;
    } else {
      row.indicator = f.indicator(risk);
      const int m = risk.lookback;
      if (static_cast<int>(history.size()) < m) {
        row.invested = true;
      } else {
        double s = 0.0;
        for (std::size_t k = history.size() - m; k < history.size(); ++k) s += history[k];
        row.threshold = s / m;
        row.invested = row.indicator < row.threshold;
      }
      history.push_back(row.indicator);
    }
    if (row.invested) row.daily_return = row.weights.dot(returns.row(f.day).transpose());
    log_value += row.daily_return;
    row.value = std::exp(log_value);
    ledger.rows.push_back(std::move(row));
  }
  return ledger;
}

BacktestLedger run_backtest(Forecaster& forecaster, const ReturnMatrix& returns, std::span<const double> vol_index,
                            const BacktestConfig& cfg, Strategy strategy, const RiskConfig& risk) {
  return apply_strategy(compute_forecasts(forecaster, returns, vol_index, cfg), returns, strategy, risk,
                        cfg.start_value);
}

}  // namespace dbnad
