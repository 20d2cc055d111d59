// Turns historical records into per-day model inputs: SRC acceptance
// probabilities from the trailing empirical distribution of marginal prices,
// and SRE expected activation durations from trailing activation data.
//
// Calibration windows end the day before the decision day: the SRC window
// for day d is {d-31, ..., d-2} (30 days) and the SRE window {d-8, ..., d-2}
// (7 days), since day d-1 is not fully observed when bids for d are placed.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "flexbid/common.hpp"
#include "flexbid/config.hpp"
#include "flexbid/data_ingest.hpp"

namespace flexbid::calib {

// Acceptance probabilities per (block, direction): q[i] is the probability
// that exactly the first i price levels are awarded, i = 0..N.
struct SrcScenarioSet {
  std::array<PriceLevelGrid, 2> grids;  // by direction index
  std::array<std::array<std::vector<double>, 2>, ProductBlock::kCount> q;

  const std::vector<double>& probabilities(int block, Direction dir) const {
    return q[block - 1][index_of(dir)];
  }
};

// Expected activation durations per (block, direction): alpha[i] in hours
// within the 4h block for price level i.
struct SreActivationSet {
  std::array<PriceLevelGrid, 2> grids;
  std::array<std::array<std::vector<double>, 2>, ProductBlock::kCount> alpha;

  const std::vector<double>& durations(int block, Direction dir) const {
    return alpha[block - 1][index_of(dir)];
  }
};

struct CalibratedDay {
  Date date;
  SrcScenarioSet src;
  SreActivationSet sre;
  std::vector<double> da_forecast;  // lookahead_hours values from date 00:00
};

// Empirical distribution of marginal prices over one calibration window:
// share of observed marginals strictly below the threshold.
double empirical_cdf(std::span<const double> marginals, double threshold,
                     int window_days = 30);

// q_0 = F(p_1), q_i = F(p_{i+1}) - F(p_i), q_N = 1 - F(p_N).
std::vector<double> src_probabilities(std::span<const double> marginals,
                                      const PriceLevelGrid& grid,
                                      int window_days = 30);

// Activation duration L(p): time within the 4h block during which demand
// reaches the merit-order position of a bid at the given price, in hours.
double activation_duration(std::span<const double> block_mw, int step_seconds,
                           const ingest::MeritCurve& merit, double price);

// Seven-day mean of daily activation durations.
double expected_activation(std::span<const double> daily_durations,
                           int window_days = 7);

CalibratedDay calibrate_day(const ingest::ValidatedDataset& ds, Date date,
                            const RunConfig& cfg);

}  // namespace flexbid::calib
