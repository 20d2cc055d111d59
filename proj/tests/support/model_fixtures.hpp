// Random calibrated-day fixtures for the model-level property tests: small
// grids, a 48h look-ahead, probabilities derived from random marginals (so
// they partition one exactly) and random duration curves in [0, 4].

#pragma once

#include <random>

#include "flexbid/calibration.hpp"
#include "flexbid/config.hpp"

namespace flexbid::testing {

inline RunConfig small_model_config() {
  RunConfig cfg = RunConfig::defaults();
  cfg.total_flexibility_mw = 10.0;
  cfg.tau_min_mwh = -300.0;
  cfg.tau_max_mwh = 300.0;
  cfg.tau_initial_mwh = 0.0;
  cfg.lookahead_hours = 48;
  cfg.src_grid_pos = PriceLevelGrid::parse("0:200:50");    // 5 levels
  cfg.src_grid_neg = PriceLevelGrid::parse("0:200:50");
  cfg.sre_grid_pos = PriceLevelGrid::parse("50:250:50");   // 5 levels
  cfg.sre_grid_neg = PriceLevelGrid::parse("-50:150:50");  // 5 levels
  return cfg;
}

inline calib::CalibratedDay random_calibrated_day(std::mt19937& rng,
                                                  const RunConfig& cfg) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  calib::CalibratedDay cal;
  cal.date = Date::from_ymd(2021, 9, 1);
  cal.src.grids = {cfg.src_grid_pos, cfg.src_grid_neg};
  cal.sre.grids = {cfg.sre_grid_pos, cfg.sre_grid_neg};

  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    for (Direction dir : kDirections) {
      // Marginal prices scattered over the grid range, sometimes low
      // (nothing awarded) or high (everything awarded).
      std::vector<double> marginals(cfg.src_window_days);
      double base = 30.0 + 200.0 * unit(rng);
      for (auto& m : marginals) m = base + 90.0 * gauss(rng);
      cal.src.q[k - 1][index_of(dir)] =
          calib::src_probabilities(marginals, cfg.src_grid(dir), cfg.src_window_days);

      // Nonincreasing durations in [0, 4].
      const auto& grid = cfg.sre_grid(dir);
      std::vector<double> alpha(grid.size());
      double level = 4.0 * unit(rng);
      for (int i = 0; i < grid.size(); ++i) {
        alpha[i] = level;
        level *= 0.3 + 0.7 * unit(rng);
      }
      cal.sre.alpha[k - 1][index_of(dir)] = alpha;
    }
  }

  cal.da_forecast.resize(cfg.lookahead_hours);
  double walk = 0.0;
  for (int t = 0; t < cfg.lookahead_hours; ++t) {
    walk = 0.9 * walk + 6.0 * gauss(rng);
    cal.da_forecast[t] = 60.0 + walk + 25.0 * std::sin(2.0 * 3.14159265358979 *
                                                       ((t % 24) - 15.0) / 24.0);
  }
  return cal;
}

}  // namespace flexbid::testing
