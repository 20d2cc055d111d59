// Deterministic synthetic dataset generator for demos and tests: realized
// day-ahead prices with a volatility regime shift, SRC marginals, merit
// curves, activation series, and file-based forecasts. The same seed always
// produces the identical dataset.

#pragma once

#include <random>

#include "flexbid/config.hpp"
#include "flexbid/data_ingest.hpp"

namespace flexbid::fixture {

struct FixtureSpec {
  Date start = Date::from_ymd(2021, 4, 1);
  int days = 103;  // leading history + evaluation window + forecast tail
  unsigned seed = 2021;
  int activation_step_seconds = 900;

  // Day-ahead price process.
  double da_base = 60.0;
  double da_daily_amplitude = 22.0;
  double da_weekly_amplitude = 8.0;
  double da_noise = 6.0;
  double regime_level_shift = 90.0;  // added to the second half
  double regime_noise_factor = 3.0;  // noise multiplier in the second half
  double forecast_noise = 4.0;

  int first_forecast_origin_offset = 35;  // first day that gets a forecast
};

// Run configuration matching the fixture: 48h look-ahead, +-1000 MWh battery
// bounds, compact price grids.
RunConfig fixture_config();

ingest::ValidatedDataset generate(const FixtureSpec& spec, const RunConfig& cfg);

// Consistency fixture: the forecast equals the realized prices, marginal
// prices are constant (degenerate acceptance probabilities), and activation
// and merit curves repeat every day so realized durations equal their
// calibrated expectations. Look-ahead equals the first day.
RunConfig perfect_foresight_config();
ingest::ValidatedDataset generate_perfect_foresight(Date start, int days);

}  // namespace flexbid::fixture
