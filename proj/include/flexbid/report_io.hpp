// JSON and CSV serialization for the CLI outputs: per-day calibration
// documents, bid plans with expected trajectories, and backtest reports.

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "flexbid/backtest.hpp"
#include "flexbid/calibration.hpp"
#include "flexbid/cross_market.hpp"

namespace flexbid::io {

nlohmann::ordered_json calibration_json(const calib::CalibratedDay& cal);
nlohmann::ordered_json plan_json(const model::BidPlan& plan);
nlohmann::ordered_json trajectory_json(const model::ExpectedTrajectory& traj);
nlohmann::ordered_json decision_json(const model::DayDecision& decision);
nlohmann::ordered_json report_json(const backtest::BacktestReport& report);

void write_cumulative_profit_csv(const backtest::BacktestReport& report,
                                 std::ostream& out);
void write_battery_level_csv(const backtest::BacktestReport& report,
                             std::ostream& out);
void write_split_by_block_csv(const backtest::BacktestReport& report,
                              std::ostream& out);

}  // namespace flexbid::io
