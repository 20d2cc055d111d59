// Rolling-horizon backtest: each day calibrate, build, solve, extract the
// first-day bids, settle them against realized data, and carry the realized
// battery state into the next day. Pay-as-bid settlement throughout.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "flexbid/calibration.hpp"
#include "flexbid/common.hpp"
#include "flexbid/config.hpp"
#include "flexbid/cross_market.hpp"
#include "flexbid/data_ingest.hpp"
#include "flexbid/strategy.hpp"

namespace flexbid::backtest {

enum class Market { src_pos = 0, src_neg, sre_pos, sre_neg, da };
inline constexpr std::array<Market, 5> kMarkets{Market::src_pos, Market::src_neg,
                                                Market::sre_pos, Market::sre_neg,
                                                Market::da};
std::string_view to_string(Market m);

struct BatteryState {
  double level_mwh = 0.0;
  Date date;
};

struct SettlementResult {
  std::array<double, 5> realized_eur{};  // indexed by Market
  std::array<double, 5> expected_eur{};
  double battery_delta_mwh = 0.0;

  double realized(Market m) const { return realized_eur[static_cast<int>(m)]; }
  double expected(Market m) const { return expected_eur[static_cast<int>(m)]; }
  double error(Market m) const { return expected(m) - realized(m); }
  double total_realized() const;
  double total_expected() const;
};

struct SrcSettlement {
  double pos_eur = 0.0;
  double neg_eur = 0.0;
};

struct SreSettlement {
  double pos_eur = 0.0;
  double neg_eur = 0.0;
  double delta_mwh = 0.0;  // battery level change from activations
};

struct DaSettlement {
  double eur = 0.0;
  double delta_mwh = 0.0;
};

// Pay-as-bid capacity settlement: a bid is awarded iff its price does not
// exceed the realized marginal; awarded bids earn price * volume.
SrcSettlement settle_src(const model::BidPlan& plan,
                         const ingest::ValidatedDataset& ds);

// Reserve energy settlement: each bid is placed at its price tier of the
// realized merit curve; revenue is price * volume * realized activation
// duration. Positive direction discharges the battery, negative charges it.
SreSettlement settle_sre(const model::BidPlan& plan,
                         const ingest::ValidatedDataset& ds);

// Uniform-price day-ahead settlement of the first-day hourly schedule.
DaSettlement settle_da(const model::BidPlan& plan,
                       const ingest::ValidatedDataset& ds);

// Expected per-market profits of a plan under the calibration that produced
// it (the settlement counterpart of the LP objective terms; the DA entry is
// the unscaled first-day expectation).
std::array<double, 5> expected_by_market(const model::BidPlan& plan,
                                         const calib::CalibratedDay& cal);

struct DailyRecord {
  Date date;
  SettlementResult settlement;
  double battery_level_after = 0.0;
  double penalty_coefficient = 0.0;
  model::BidPlan plan;
  model::ExpectedTrajectory expected;
};

struct BacktestReport {
  std::string strategy;
  Date from, to;
  std::vector<DailyRecord> days;
  std::vector<double> cumulative_profit;  // one entry per day
  std::array<double, ProductBlock::kCount> mean_da_mw_by_block{};
  std::array<double, ProductBlock::kCount> mean_afrr_mw_by_block{};

  double total_profit() const {
    return cumulative_profit.empty() ? 0.0 : cumulative_profit.back();
  }
};

BacktestReport run_backtest(const ingest::ValidatedDataset& ds,
                            const strategy::StrategySpec& spec,
                            const RunConfig& cfg, Date from, Date to);

}  // namespace flexbid::backtest
