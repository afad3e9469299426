#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dbnad/predict.hpp"

namespace dbnad {

enum class IndicatorKind { Density, Clustering, VaR };
enum class Strategy { AlwaysInvest = 1, IndicatorFilter = 2 };

IndicatorKind parse_indicator(const std::string& s);
std::string to_string(IndicatorKind k);

struct RiskConfig {
  IndicatorKind kind = IndicatorKind::VaR;
  double alpha = 0.025;
  int lookback = 20;  ///< M
};

/// Forecast for one trading day.
struct DayForecast {
  int day = 0;  ///< row index into the return matrix
  Matrix sigma_hat;
  double density = 0.0;
  double clustering = 0.0;
  /// Per-path portfolio returns for the Monte Carlo VaR; empty when the
  /// forecaster only supplies a covariance.
  std::vector<double> path_returns;
  bool has_network = true;

  /// Indicator value for the risk configuration. Without path returns the
  /// VaR is Gaussian: -z_alpha sqrt(w^T Sigma w) for the MV weights w.
  double indicator(const RiskConfig& risk) const;
};

/// Produces forecasts for `horizon` days after a fitting window.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  /// `window` holds the fitting rows; `first_day` is the row index of the
  /// first forecast day; `seed` is specific to this window.
  virtual std::vector<DayForecast> forecast(const ReturnMatrix& window, std::span<const double> vol_window,
                                            int first_day, int horizon, std::uint64_t seed) = 0;
};

/// Fits the model on the window and forecasts with Monte Carlo paths.
class ModelForecaster : public Forecaster {
 public:
  ModelForecaster(SamplerConfig sampler, int paths);
  std::vector<DayForecast> forecast(const ReturnMatrix& window, std::span<const double> vol_window, int first_day,
                                    int horizon, std::uint64_t seed) override;

 private:
  SamplerConfig sampler_;
  int paths_;
};

/// Replays externally produced covariance forecasts, one per row of the
/// return matrix (rows before the first forecast day are ignored).
class ExternalForecaster : public Forecaster {
 public:
  explicit ExternalForecaster(std::vector<Matrix> sigma_by_day);
  std::vector<DayForecast> forecast(const ReturnMatrix& window, std::span<const double> vol_window, int first_day,
                                    int horizon, std::uint64_t seed) override;

 private:
  std::vector<Matrix> sigma_;
};

struct BacktestConfig {
  int window = 250;
  int refit_every = 20;
  std::uint64_t seed = 1;
  double start_value = 1000.0;
};

struct RefitRecord {
  int window_start = 0;  ///< first fitting row
  int window_end = 0;    ///< one past the last fitting row
  int first_day = 0;
  int days = 0;
};

/// Forecasts for every day after the first window, refitting every
/// refit_every days on the most recent `window` rows. Forecasts for a period
/// only see rows strictly before its first day.
struct ForecastSeries {
  std::vector<DayForecast> days;
  std::vector<RefitRecord> refits;
  /// Non-empty when a window failed; the series stops before that window.
  std::string failure;
};

ForecastSeries compute_forecasts(Forecaster& forecaster, const ReturnMatrix& returns,
                                 std::span<const double> vol_index, const BacktestConfig& cfg);

struct LedgerRow {
  int day = 0;
  bool invested = false;
  double indicator = 0.0;
  double threshold = 0.0;  ///< NaN during the warm-up and for strategy 1
  Vector weights;
  double daily_return = 0.0;
  double value = 0.0;
};

struct BacktestLedger {
  Strategy strategy = Strategy::AlwaysInvest;
  RiskConfig risk;
  std::vector<LedgerRow> rows;
  std::vector<RefitRecord> refits;
  std::string failure;  ///< copied from the forecast series
};

/// Strategy 1 invests every day with the MV weights of Sigma_hat. Strategy 2
/// invests only when the day's indicator is strictly below the mean of the
/// previous M days' indicators, and always during the first M days. Values
/// compound in log space; abstained days earn 0.
BacktestLedger apply_strategy(const ForecastSeries& forecasts, const ReturnMatrix& returns, Strategy strategy,
                              const RiskConfig& risk, double start_value = 1000.0);

BacktestLedger run_backtest(Forecaster& forecaster, const ReturnMatrix& returns, std::span<const double> vol_index,
                            const BacktestConfig& cfg, Strategy strategy, const RiskConfig& risk);

}  // namespace dbnad
