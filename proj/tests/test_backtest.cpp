#include <cmath>

#include "dbnad/backtest.hpp"
#include "doctest.h"

using namespace dbnad;

namespace {

ForecastSeries constant_series(int n, int first, int days, double density) {
  ForecastSeries s;
  for (int d = 0; d < days; ++d) {
    DayForecast f;
    f.day = first + d;
    f.sigma_hat = Matrix::Identity(n, n);
    f.density = density;
    f.clustering = density;
    s.days.push_back(f);
  }
  return s;
}

}  // namespace

TEST_SUITE("backtest") {
  TEST_CASE("a constant indicator never invests after the warm-up") {
    const auto s = constant_series(2, 5, 30, 0.3);
    const Matrix returns = Matrix::Constant(35, 2, 0.01);
    RiskConfig risk{IndicatorKind::Density, 0.025, 10};
    const auto ledger = apply_strategy(s, returns, Strategy::IndicatorFilter, risk);
    REQUIRE(ledger.rows.size() == 30);
    for (int k = 0; k < 10; ++k) CHECK(ledger.rows[k].invested);
    for (int k = 10; k < 30; ++k) CHECK_FALSE(ledger.rows[k].invested);
    CHECK(ledger.rows.back().value == doctest::Approx(1000.0 * std::exp(10 * 0.01)));
  }

  TEST_CASE("strategy 1 compounds minimum-variance log-returns") {
    ForecastSeries s = constant_series(2, 0, 2, 0.0);
    s.days[0].sigma_hat(1, 1) = 4.0;
    Matrix returns(2, 2);
    returns << 0.01, 0.06, -0.02, 0.0;
    const auto ledger = apply_strategy(s, returns, Strategy::AlwaysInvest, RiskConfig{});
    REQUIRE(ledger.rows.size() == 2);
    CHECK(ledger.rows[0].daily_return == doctest::Approx(0.8 * 0.01 + 0.2 * 0.06));
    CHECK(ledger.rows[1].daily_return == doctest::Approx(-0.01));
    CHECK(ledger.rows[1].value == doctest::Approx(1000.0 * std::exp(0.02 - 0.01)));
    CHECK(std::isnan(ledger.rows[0].threshold));
    for (const auto& r : ledger.rows) CHECK(std::abs(r.weights.sum() - 1.0) < 1e-12);
  }

  TEST_CASE("a single asset gets full weight") {
    const auto s = constant_series(1, 0, 3, 0.0);
    const Matrix returns = Matrix::Constant(3, 1, 0.005);
    const auto ledger = apply_strategy(s, returns, Strategy::AlwaysInvest, RiskConfig{});
    for (const auto& r : ledger.rows) CHECK(r.weights(0) == 1.0);
  }

  TEST_CASE("Gaussian VaR without paths") {
    DayForecast f;
    f.sigma_hat = Matrix::Identity(2, 2) * 0.0004;
    f.has_network = false;
    RiskConfig risk{IndicatorKind::VaR, 0.025, 5};
    // MV weights (1/2, 1/2), portfolio sd sqrt(0.0002).
    CHECK(f.indicator(risk) == doctest::Approx(1.959963984540054 * std::sqrt(0.0002)).epsilon(1e-10));
    risk.kind = IndicatorKind::Density;
    CHECK_THROWS(f.indicator(risk));
  }

  TEST_CASE("external forecaster drives a backtest") {
    const int T = 40;
    Matrix returns(T, 2);
    for (int t = 0; t < T; ++t) {
      returns(t, 0) = 0.001 * ((t % 3) - 1);
      returns(t, 1) = 0.002 * ((t % 5) - 2);
    }
    std::vector<Matrix> sig(T, Matrix::Identity(2, 2) * 1e-4);
    ExternalForecaster ext(sig);
    BacktestConfig cfg;
    cfg.window = 10;
    cfg.refit_every = 7;
    const std::vector<double> vol(T, 20.0);
    const auto ledger = run_backtest(ext, returns, vol, cfg, Strategy::IndicatorFilter,
                                     RiskConfig{IndicatorKind::VaR, 0.01, 5});
    CHECK(ledger.failure.empty());
    CHECK(ledger.rows.size() == 30);
    CHECK(ledger.rows.front().day == 10);
    CHECK(ledger.refits.size() == 5);
  }

  TEST_CASE("indicator names") {
    CHECK(parse_indicator("density") == IndicatorKind::Density);
    CHECK(parse_indicator("clustering") == IndicatorKind::Clustering);
    CHECK(parse_indicator("var") == IndicatorKind::VaR);
    CHECK_THROWS(parse_indicator("beta"));
    CHECK(to_string(IndicatorKind::Clustering) == "clustering");
  }
}
