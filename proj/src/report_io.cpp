#include "flexbid/report_io.hpp"

#include <ostream>

namespace flexbid::io {

using nlohmann::ordered_json;

namespace {

ordered_json grid_block_json(const std::array<PriceLevelGrid, 2>& grids,
                             const std::array<std::array<std::vector<double>, 2>,
                                              ProductBlock::kCount>& values) {
  ordered_json out;
  for (Direction dir : kDirections) {
    ordered_json side;
    side["levels"] = grids[index_of(dir)].levels;
    ordered_json rows = ordered_json::array();
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      rows.push_back(values[k - 1][index_of(dir)]);
    }
    side["blocks"] = rows;
    out[std::string(to_string(dir))] = side;
  }
  return out;
}

}  // namespace

ordered_json calibration_json(const calib::CalibratedDay& cal) {
  ordered_json out;
  out["date"] = cal.date.to_string();
  out["src"] = grid_block_json(cal.src.grids, cal.src.q);
  out["sre"] = grid_block_json(cal.sre.grids, cal.sre.alpha);
  out["da_forecast"] = cal.da_forecast;
  return out;
}

ordered_json plan_json(const model::BidPlan& plan) {
  ordered_json out;
  out["date"] = plan.date.to_string();
  out["split"] = {{"da_mw", plan.split_da_mw}, {"afrr_mw", plan.split_afrr_mw}};
  out["penalty_coefficient"] = plan.penalty_coefficient;
  ordered_json src = ordered_json::array();
  for (const auto& bid : plan.src) {
    src.push_back({{"block", bid.block},
                   {"direction", std::string(to_string(bid.direction))},
                   {"level", bid.level},
                   {"price_eur_mw", bid.price},
                   {"volume_mw", bid.volume_mw}});
  }
  out["src_bids"] = src;
  ordered_json sre = ordered_json::array();
  for (const auto& bid : plan.sre) {
    sre.push_back({{"block", bid.block},
                   {"direction", std::string(to_string(bid.direction))},
                   {"level", bid.level},
                   {"price_eur_mwh", bid.price},
                   {"volume_mw", bid.volume_mw}});
  }
  out["sre_bids"] = sre;
  out["da_mw"] = plan.da_mw;
  return out;
}

ordered_json trajectory_json(const model::ExpectedTrajectory& traj) {
  ordered_json out;
  out["tau_mwh"] = traj.tau;
  out["profit"] = {{"src", traj.f_src},
                   {"sre", traj.f_sre},
                   {"da", traj.f_da},
                   {"penalty", traj.f_pt},
                   {"gross", traj.gross()},
                   {"objective", traj.objective()}};
  return out;
}

ordered_json decision_json(const model::DayDecision& decision) {
  ordered_json out;
  out["plan"] = plan_json(decision.plan);
  out["expected"] = trajectory_json(decision.expected);
  return out;
}

ordered_json report_json(const backtest::BacktestReport& report) {
  ordered_json out;
  out["strategy"] = report.strategy;
  out["from"] = report.from.to_string();
  out["to"] = report.to.to_string();
  out["total_profit_eur"] = report.total_profit();
  ordered_json days = ordered_json::array();
  for (const auto& day : report.days) {
    ordered_json d;
    d["date"] = day.date.to_string();
    ordered_json realized, expected;
    for (auto m : backtest::kMarkets) {
      realized[std::string(backtest::to_string(m))] = day.settlement.realized(m);
      expected[std::string(backtest::to_string(m))] = day.settlement.expected(m);
    }
    d["realized_eur"] = realized;
    d["expected_eur"] = expected;
    d["total_realized_eur"] = day.settlement.total_realized();
    d["battery_delta_mwh"] = day.settlement.battery_delta_mwh;
    d["battery_level_mwh"] = day.battery_level_after;
    d["penalty_coefficient"] = day.penalty_coefficient;
    d["plan"] = plan_json(day.plan);
    d["expected_trajectory"] = trajectory_json(day.expected);
    days.push_back(std::move(d));
  }
  out["days"] = days;
  out["cumulative_profit_eur"] = report.cumulative_profit;
  ordered_json split = ordered_json::array();
  for (int k = 0; k < ProductBlock::kCount; ++k) {
    split.push_back({{"block", k + 1},
                     {"mean_da_mw", report.mean_da_mw_by_block[k]},
                     {"mean_afrr_mw", report.mean_afrr_mw_by_block[k]}});
  }
  out["mean_split_by_block"] = split;
  return out;
}

void write_cumulative_profit_csv(const backtest::BacktestReport& report,
                                 std::ostream& out) {
  out << "date,cumulative_profit_eur\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.days.size(); ++i) {
    out << report.days[i].date.to_string() << "," << report.cumulative_profit[i]
        << "\n";
  }
}

void write_battery_level_csv(const backtest::BacktestReport& report,
                             std::ostream& out) {
  out << "date,battery_level_mwh\n";
  out.precision(17);
  for (const auto& day : report.days) {
    out << day.date.to_string() << "," << day.battery_level_after << "\n";
  }
}

void write_split_by_block_csv(const backtest::BacktestReport& report,
                              std::ostream& out) {
  out << "block,mean_da_mw,mean_afrr_mw\n";
  out.precision(17);
  for (int k = 0; k < ProductBlock::kCount; ++k) {
    out << (k + 1) << "," << report.mean_da_mw_by_block[k] << ","
        << report.mean_afrr_mw_by_block[k] << "\n";
  }
}

}  // namespace flexbid::io
