// Run configuration: battery and flexibility parameters, horizon lengths,
// bid price grids, policies, and calibration window lengths. Parsed from a
// plain key = value text file.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flexbid/common.hpp"

namespace flexbid {

struct PriceLevelGrid {
  std::vector<double> levels;  // strictly increasing

  int size() const { return static_cast<int>(levels.size()); }
  double at(int i) const { return levels[i]; }
  void validate(const std::string& label) const;

  // "a:b:step" (inclusive endpoints) or a comma-separated list.
  static PriceLevelGrid parse(const std::string& text);
};

struct SplitPolicy {
  bool free = true;
  double da_mw = 0.0;    // fixed allocation to day-ahead
  double afrr_mw = 0.0;  // fixed allocation to the balancing markets

  static SplitPolicy make_free() { return SplitPolicy{}; }
  static SplitPolicy fixed(double da, double afrr) {
    return SplitPolicy{false, da, afrr};
  }
};

struct PenaltyPolicy {
  bool free = false;
  double coefficient = 0.0;  // c_p when not free

  static PenaltyPolicy make_free() { return PenaltyPolicy{true, 0.0}; }
  static PenaltyPolicy fixed(double c) { return PenaltyPolicy{false, c}; }
};

enum class ForecastSource { file, naive };

struct RunConfig {
  double total_flexibility_mw = 10.0;  // m

  double tau_min_mwh = -500.0;
  double tau_max_mwh = 500.0;
  double tau_initial_mwh = 0.0;

  int first_day_hours = 24;    // T
  int lookahead_hours = 336;   // T*

  PriceLevelGrid src_grid_pos;
  PriceLevelGrid src_grid_neg;
  PriceLevelGrid sre_grid_pos;
  PriceLevelGrid sre_grid_neg;

  PenaltyPolicy penalty_policy = PenaltyPolicy::fixed(0.0);
  SplitPolicy split_policy = SplitPolicy::make_free();

  int src_window_days = 30;
  int sre_window_days = 7;

  ForecastSource forecast_source = ForecastSource::file;

  // Free-penalty selection.
  std::vector<double> penalty_ladder;
  int cluster_count = 4;
  unsigned cluster_seed = 7;
  int cluster_refit_window_days = 90;
  double default_free_penalty = 15.0;
  int feature_window_days = 30;

  const PriceLevelGrid& src_grid(Direction d) const {
    return d == Direction::pos ? src_grid_pos : src_grid_neg;
  }
  const PriceLevelGrid& sre_grid(Direction d) const {
    return d == Direction::pos ? sre_grid_pos : sre_grid_neg;
  }

  // Throws ConfigError on violated invariants (tau ordering, T <= T*,
  // T* a multiple of 24, grids increasing, m >= 0, ...).
  void validate() const;

  static RunConfig defaults();
  static RunConfig parse(std::istream& in);
  static RunConfig from_file(const std::string& path);
  void write(std::ostream& out) const;
};

}  // namespace flexbid
