#include "flexbid/fixture.hpp"

#include <cmath>

namespace flexbid::fixture {

namespace {

constexpr double kPi = 3.14159265358979323846;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

RunConfig fixture_config() {
  RunConfig cfg = RunConfig::defaults();
  cfg.total_flexibility_mw = 10.0;
  cfg.tau_min_mwh = -1000.0;
  cfg.tau_max_mwh = 1000.0;
  cfg.tau_initial_mwh = 0.0;
  cfg.first_day_hours = 24;
  cfg.lookahead_hours = 48;
  cfg.src_grid_pos = PriceLevelGrid::parse("0:250:25");
  cfg.src_grid_neg = PriceLevelGrid::parse("0:250:25");
  cfg.sre_grid_pos = PriceLevelGrid::parse("25:500:25");
  cfg.sre_grid_neg = PriceLevelGrid::parse("-100:100:25");
  cfg.forecast_source = ForecastSource::file;
  return cfg;
}

ingest::ValidatedDataset generate(const FixtureSpec& spec, const RunConfig& cfg) {
  std::mt19937 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int horizon_days = cfg.lookahead_hours / 24;
  const int truth_days = spec.days;
  const int regime_start = truth_days / 2;

  // Truth process for day-ahead prices.
  std::vector<double> truth(static_cast<std::size_t>(truth_days) * 24);
  double level_walk = 0.0;
  for (int d = 0; d < truth_days; ++d) {
    level_walk = 0.92 * level_walk + 4.0 * gauss(rng);
    const bool high_regime = d >= regime_start;
    double base = spec.da_base + (high_regime ? spec.regime_level_shift : 0.0);
    double noise_scale = spec.da_noise * (high_regime ? spec.regime_noise_factor : 1.0);
    int dow = (spec.start + d).serial() % 7;
    double weekly = spec.da_weekly_amplitude * std::sin(2.0 * kPi * dow / 7.0);
    for (int h = 0; h < 24; ++h) {
      double daily =
          spec.da_daily_amplitude * std::sin(2.0 * kPi * (h - 15.0) / 24.0);
      truth[static_cast<std::size_t>(d) * 24 + h] =
          round2(base + level_walk + weekly + daily + noise_scale * gauss(rng));
    }
  }

  ingest::DatasetBuilder builder(cfg);
  for (int d = 0; d < truth_days; ++d) {
    for (int h = 0; h < 24; ++h) {
      builder.add_realized(spec.start + d, h, truth[static_cast<std::size_t>(d) * 24 + h]);
    }
  }

  // Forecasts: perturbed truth, noisier further out.
  for (int d = spec.first_forecast_origin_offset; d + horizon_days <= truth_days; ++d) {
    std::vector<double> fc(cfg.lookahead_hours);
    for (int h = 0; h < cfg.lookahead_hours; ++h) {
      double widen = 1.0 + 0.25 * (h / 24.0);
      fc[h] = round2(truth[static_cast<std::size_t>(d) * 24 + h] +
                     spec.forecast_noise * widen * gauss(rng));
    }
    builder.add_forecast(spec.start + d, std::move(fc));
  }

  // SRC marginal prices: block-shaped base plus auto-correlated noise;
  // occasionally negative after the price-cap removal.
  std::array<std::array<double, ProductBlock::kCount>, 2> walk{};
  for (int d = 0; d < truth_days; ++d) {
    const bool high_regime = d >= regime_start;
    for (Direction dir : kDirections) {
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        auto& w = walk[index_of(dir)][k - 1];
        w = 0.85 * w + 12.0 * gauss(rng);
        double base = 35.0 + 14.0 * k + (dir == Direction::neg ? -10.0 : 0.0) +
                      (high_regime ? 45.0 : 0.0);
        double marginal = base + w;
        if (unit(rng) < 0.01) marginal = -std::abs(marginal) * 0.2;
        builder.add_src_marginal(spec.start + d, k, dir, round2(marginal));
      }
    }
  }

  // Merit curves: fixed tier ladders with slowly moving tier volumes.
  for (int d = 0; d < truth_days; ++d) {
    for (Direction dir : kDirections) {
      const auto& grid = cfg.sre_grid(dir);
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        ingest::MeritCurve curve;
        double cum = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
          cum += 15.0 + 35.0 * unit(rng);
          curve.points.push_back(ingest::MeritPoint{grid.at(i), round2(cum)});
        }
        builder.add_merit(spec.start + d, k, dir, std::move(curve));
      }
    }
  }

  // Activation: bursty nonnegative demand, busier in the high regime.
  const int samples = 86400 / spec.activation_step_seconds;
  for (int d = 0; d < truth_days; ++d) {
    const bool high_regime = d >= regime_start;
    for (Direction dir : kDirections) {
      ingest::ActivationSeries series;
      series.step_seconds = spec.activation_step_seconds;
      series.activated_mw.resize(samples);
      double state = 0.0;
      for (int s = 0; s < samples; ++s) {
        if (unit(rng) < 0.08) state = 40.0 + 120.0 * unit(rng);
        state *= 0.82;
        double burst = high_regime ? 1.6 : 1.0;
        series.activated_mw[s] = round2(std::max(0.0, burst * state - 2.0));
      }
      builder.add_activation(spec.start + d, dir, std::move(series));
    }
  }

  return builder.finish();
}

RunConfig perfect_foresight_config() {
  RunConfig cfg = fixture_config();
  cfg.lookahead_hours = 24;  // expected day-ahead profit equals the first day
  return cfg;
}

ingest::ValidatedDataset generate_perfect_foresight(Date start, int days) {
  RunConfig cfg = perfect_foresight_config();
  ingest::DatasetBuilder builder(cfg);

  // Deterministic daily price shape, identical forecast.
  for (int d = 0; d < days; ++d) {
    for (int h = 0; h < 24; ++h) {
      double p = 70.0 + 30.0 * std::sin(2.0 * kPi * (h - 15.0) / 24.0) + 2.0 * (d % 5);
      builder.add_realized(start + d, h, round2(p));
    }
  }
  for (int d = 32; d < days; ++d) {
    std::vector<double> fc(24);
    for (int h = 0; h < 24; ++h) {
      double p = 70.0 + 30.0 * std::sin(2.0 * kPi * (h - 15.0) / 24.0) + 2.0 * (d % 5);
      fc[h] = round2(p);
    }
    builder.add_forecast(start + d, std::move(fc));
  }

  // Constant marginals make the acceptance probabilities degenerate.
  for (int d = 0; d < days; ++d) {
    for (Direction dir : kDirections) {
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        builder.add_src_marginal(start + d, k, dir, 100.0);
      }
    }
  }

  // One merit curve and one activation pattern, repeated every day, so the
  // seven-day average duration equals each day's realized duration.
  for (int d = 0; d < days; ++d) {
    for (Direction dir : kDirections) {
      const auto& grid = (dir == Direction::pos)
                             ? cfg.sre_grid_pos
                             : cfg.sre_grid_neg;
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        ingest::MeritCurve curve;
        for (int i = 0; i < grid.size(); ++i) {
          curve.points.push_back(ingest::MeritPoint{grid.at(i), 30.0 * (i + 1)});
        }
        builder.add_merit(start + d, k, dir, std::move(curve));
      }
      ingest::ActivationSeries series;
      series.step_seconds = 900;
      series.activated_mw.assign(96, 0.0);
      // 80 MW during the first 1.5h of every block; the first two merit
      // tiers (30 and 60 MW) are activated, deeper tiers are not.
      for (int k = 0; k < ProductBlock::kCount; ++k) {
        for (int s = 0; s < 6; ++s) series.activated_mw[16 * k + s] = 80.0;
      }
      builder.add_activation(start + d, dir, std::move(series));
    }
  }

  return builder.finish();
}

}  // namespace flexbid::fixture
