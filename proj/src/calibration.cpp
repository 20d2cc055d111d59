#include "flexbid/calibration.hpp"

#include <cmath>

namespace flexbid::calib {

double empirical_cdf(std::span<const double> marginals, double threshold,
                     int window_days) {
  if (static_cast<int>(marginals.size()) != window_days) {
    throw HistoryError("empirical cdf needs exactly " + std::to_string(window_days) +
                       " marginal prices, got " + std::to_string(marginals.size()));
  }
  int below = 0;
  for (double pi : marginals) {
    if (pi < threshold) ++below;  // strict: a tie counts as rejection
  }
  return static_cast<double>(below) / window_days;
}

std::vector<double> src_probabilities(std::span<const double> marginals,
                                      const PriceLevelGrid& grid,
                                      int window_days) {
  grid.validate("src");
  const int n = grid.size();
  // Integer counts keep the probabilities an exact partition of the window.
  std::vector<int> below(n);
  if (static_cast<int>(marginals.size()) != window_days) {
    throw HistoryError("src probabilities need exactly " + std::to_string(window_days) +
                       " marginal prices, got " + std::to_string(marginals.size()));
  }
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (double pi : marginals) {
      if (pi < grid.at(i)) ++c;
    }
    below[i] = c;
  }
  std::vector<double> q(n + 1);
  q[0] = static_cast<double>(below[0]) / window_days;
  for (int i = 1; i < n; ++i) {
    q[i] = static_cast<double>(below[i] - below[i - 1]) / window_days;
  }
  q[n] = static_cast<double>(window_days - below[n - 1]) / window_days;
  return q;
}

double activation_duration(std::span<const double> block_mw, int step_seconds,
                           const ingest::MeritCurve& merit, double price) {
  const int expected = ProductBlock::kHours * 3600 / step_seconds;
  if (static_cast<int>(block_mw.size()) < expected) {
    throw GapError("activation series covers " + std::to_string(block_mw.size()) +
                   " samples, the 4h block needs " + std::to_string(expected));
  }
  const double threshold = merit.volume_at(price);
  long long active = 0;
  for (int i = 0; i < expected; ++i) {
    if (block_mw[i] >= threshold) ++active;
  }
  return static_cast<double>(active) * step_seconds / 3600.0;
}

double expected_activation(std::span<const double> daily_durations,
                           int window_days) {
  if (static_cast<int>(daily_durations.size()) != window_days) {
    throw HistoryError("expected activation needs exactly " +
                       std::to_string(window_days) + " daily durations, got " +
                       std::to_string(daily_durations.size()));
  }
  double sum = 0.0;
  for (double v : daily_durations) sum += v;
  return sum / window_days;
}

CalibratedDay calibrate_day(const ingest::ValidatedDataset& ds, Date date,
                            const RunConfig& cfg) {
  CalibratedDay out;
  out.date = date;
  out.src.grids = {cfg.src_grid_pos, cfg.src_grid_neg};
  out.sre.grids = {cfg.sre_grid_pos, cfg.sre_grid_neg};

  // SRC: trailing marginals over {d - w - 1, ..., d - 2}.
  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    for (Direction dir : kDirections) {
      std::vector<double> marginals;
      marginals.reserve(cfg.src_window_days);
      for (int back = cfg.src_window_days + 1; back >= 2; --back) {
        marginals.push_back(ds.src_marginal(date - back, k, dir));
      }
      out.src.q[k - 1][index_of(dir)] =
          src_probabilities(marginals, cfg.src_grid(dir), cfg.src_window_days);
    }
  }

  // SRE: per level, average the activation duration over the trailing days,
  // each day evaluated against its own merit curve.
  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    for (Direction dir : kDirections) {
      const auto& grid = cfg.sre_grid(dir);
      std::vector<std::vector<double>> daily(grid.size());
      for (int back = cfg.sre_window_days + 1; back >= 2; --back) {
        Date day = date - back;
        const auto& series = ds.activation(day, dir);
        const auto& merit = ds.merit(day, k, dir);
        auto block = series.block_samples(k);
        for (int i = 0; i < grid.size(); ++i) {
          daily[i].push_back(
              activation_duration(block, series.step_seconds, merit, grid.at(i)));
        }
      }
      auto& alpha = out.sre.alpha[k - 1][index_of(dir)];
      alpha.resize(grid.size());
      for (int i = 0; i < grid.size(); ++i) {
        alpha[i] = expected_activation(daily[i], cfg.sre_window_days);
      }
    }
  }

  // Forecast for the decision day.
  if (cfg.forecast_source == ForecastSource::naive) {
    out.da_forecast = ingest::naive_forecast(ds, date, cfg.lookahead_hours);
  } else {
    out.da_forecast = ds.forecast(date);
  }
  if (static_cast<int>(out.da_forecast.size()) != cfg.lookahead_hours) {
    throw GapError("forecast for " + date.to_string() + " has wrong horizon");
  }
  return out;
}

}  // namespace flexbid::calib
