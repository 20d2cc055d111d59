#include "flexbid/backtest.hpp"

#include <algorithm>
#include <cmath>

namespace flexbid::backtest {

std::string_view to_string(Market m) {
  switch (m) {
    case Market::src_pos: return "src_pos";
    case Market::src_neg: return "src_neg";
    case Market::sre_pos: return "sre_pos";
    case Market::sre_neg: return "sre_neg";
    case Market::da: return "da";
  }
  return "unknown";
}

double SettlementResult::total_realized() const {
  double s = 0.0;
  for (double v : realized_eur) s += v;
  return s;
}

double SettlementResult::total_expected() const {
  double s = 0.0;
  for (double v : expected_eur) s += v;
  return s;
}

SrcSettlement settle_src(const model::BidPlan& plan,
                         const ingest::ValidatedDataset& ds) {
  SrcSettlement out;
  for (const auto& bid : plan.src) {
    double marginal = ds.src_marginal(plan.date, bid.block, bid.direction);
    if (bid.price <= marginal) {  // ties are awarded
      double eur = bid.price * bid.volume_mw;
      (bid.direction == Direction::pos ? out.pos_eur : out.neg_eur) += eur;
    }
  }
  return out;
}

SreSettlement settle_sre(const model::BidPlan& plan,
                         const ingest::ValidatedDataset& ds) {
  SreSettlement out;
  for (const auto& bid : plan.sre) {
    const auto& series = ds.activation(plan.date, bid.direction);
    const auto& merit = ds.merit(plan.date, bid.block, bid.direction);
    double hours = calib::activation_duration(series.block_samples(bid.block),
                                              series.step_seconds, merit, bid.price);
    double eur = bid.price * bid.volume_mw * hours;
    double energy = bid.volume_mw * hours;
    if (bid.direction == Direction::pos) {
      out.pos_eur += eur;
      out.delta_mwh -= energy;  // activation discharges
    } else {
      out.neg_eur += eur;
      out.delta_mwh += energy;  // activation charges
    }
  }
  return out;
}

DaSettlement settle_da(const model::BidPlan& plan,
                       const ingest::ValidatedDataset& ds) {
  DaSettlement out;
  for (int t = 0; t < static_cast<int>(plan.da_mw.size()); ++t) {
    double mw = plan.da_mw[t];
    if (mw == 0.0) continue;
    double price = ds.realized_price(plan.date, t);
    out.eur += price * mw;
    out.delta_mwh -= mw;  // selling discharges
  }
  return out;
}

std::array<double, 5> expected_by_market(const model::BidPlan& plan,
                                         const calib::CalibratedDay& cal) {
  std::array<double, 5> out{};
  for (const auto& bid : plan.src) {
    const auto& q = cal.src.probabilities(bid.block, bid.direction);
    double awarded = 0.0;  // probability that this level is within the award
    for (std::size_t i = bid.level + 1; i < q.size(); ++i) awarded += q[i];
    double eur = bid.price * bid.volume_mw * awarded;
    out[static_cast<int>(bid.direction == Direction::pos ? Market::src_pos
                                                         : Market::src_neg)] += eur;
  }
  for (const auto& bid : plan.sre) {
    double alpha = cal.sre.durations(bid.block, bid.direction)[bid.level];
    double eur = bid.price * bid.volume_mw * alpha;
    out[static_cast<int>(bid.direction == Direction::pos ? Market::sre_pos
                                                         : Market::sre_neg)] += eur;
  }
  for (int t = 0; t < static_cast<int>(plan.da_mw.size()); ++t) {
    out[static_cast<int>(Market::da)] += cal.da_forecast[t] * plan.da_mw[t];
  }
  return out;
}

BacktestReport run_backtest(const ingest::ValidatedDataset& ds,
                            const strategy::StrategySpec& spec,
                            const RunConfig& cfg, Date from, Date to) {
  cfg.validate();
  if (to < from) throw ConfigError("backtest range is empty");

  BacktestReport report;
  report.strategy = spec.name;
  report.from = from;
  report.to = to;

  strategy::PenaltySelector selector(cfg.penalty_ladder, cfg.default_free_penalty,
                                     cfg.cluster_count, cfg.cluster_seed);
  int last_fit_month = -1;

  BatteryState battery{cfg.tau_initial_mwh, from};
  double cumulative = 0.0;
  std::array<double, ProductBlock::kCount> da_split_sum{};
  std::array<double, ProductBlock::kCount> afrr_split_sum{};

  for (Date day = from; day <= to; ++day) {
    auto stage = [&](const char* what, const std::exception& e) -> Error {
      return Error("backtest " + spec.name + " failed on " + day.to_string() +
                   " during " + what + ": " + e.what());
    };

    // Penalty coefficient for the day.
    double c_p = 0.0;
    try {
      if (spec.penalty.free) {
        int month_key = day.year() * 12 + day.month();
        if (month_key != last_fit_month) {
          // Monthly refit on the trailing window of feature days, each of
          // which needs its own trailing history.
          std::vector<strategy::MarketFeatures> window;
          for (int back = cfg.cluster_refit_window_days; back >= 1; --back) {
            Date feature_day = day - back;
            try {
              window.push_back(
                  strategy::compute_features(ds, feature_day, cfg.feature_window_days));
            } catch (const HistoryError&) {
              continue;  // day predates the dataset
            } catch (const GapError&) {
              continue;
            }
          }
          selector.fit(window);
          last_fit_month = month_key;
        }
        c_p = selector.select(
            strategy::compute_features(ds, day, cfg.feature_window_days));
      } else {
        c_p = spec.penalty.coefficient;
      }
    } catch (const Error& e) {
      throw stage("penalty selection", e);
    }

    calib::CalibratedDay cal;
    try {
      cal = calib::calibrate_day(ds, day, cfg);
    } catch (const Error& e) {
      throw stage("calibration", e);
    }

    model::CrossMarketLP problem;
    lp::LpSolution sol;
    model::DayDecision decision;
    try {
      RunConfig day_cfg = cfg;
      day_cfg.tau_initial_mwh = battery.level_mwh;
      problem = model::build_lp(cal, day_cfg, spec.split, c_p);
      sol = lp::solve(problem.lp);
      if (sol.status != lp::SolveStatus::optimal) {
        throw Error("daily problem is " + std::string(lp::to_string(sol.status)));
      }
      decision = model::extract_bid_plan(problem, sol, cal);
    } catch (const Error& e) {
      throw stage("optimization", e);
    }

    DailyRecord rec;
    rec.date = day;
    rec.penalty_coefficient = c_p;
    rec.plan = decision.plan;
    rec.expected = decision.expected;
    try {
      auto src = settle_src(decision.plan, ds);
      auto sre = settle_sre(decision.plan, ds);
      auto da = settle_da(decision.plan, ds);
      rec.settlement.realized_eur = {src.pos_eur, src.neg_eur, sre.pos_eur,
                                     sre.neg_eur, da.eur};
      rec.settlement.expected_eur = expected_by_market(decision.plan, cal);
      rec.settlement.battery_delta_mwh = sre.delta_mwh + da.delta_mwh;
    } catch (const Error& e) {
      throw stage("settlement", e);
    }

    battery.level_mwh += rec.settlement.battery_delta_mwh;
    battery.date = day;
    rec.battery_level_after = battery.level_mwh;
    cumulative += rec.settlement.total_realized();
    report.cumulative_profit.push_back(cumulative);

    // Per-block allocation for the split report: balancing side is the
    // larger of the offered SRC/SRE block totals, day-ahead side the peak
    // absolute hourly volume inside the block.
    std::array<std::array<double, ProductBlock::kCount>, 2> src_total{};
    std::array<std::array<double, ProductBlock::kCount>, 2> sre_total{};
    for (const auto& bid : rec.plan.src) {
      src_total[index_of(bid.direction)][bid.block - 1] += bid.volume_mw;
    }
    for (const auto& bid : rec.plan.sre) {
      sre_total[index_of(bid.direction)][bid.block - 1] += bid.volume_mw;
    }
    for (int k = 0; k < ProductBlock::kCount; ++k) {
      double bal = std::max(std::max(src_total[0][k], sre_total[0][k]),
                            std::max(src_total[1][k], sre_total[1][k]));
      afrr_split_sum[k] += bal;
      double da_peak = 0.0;
      for (int h = 4 * k; h < 4 * (k + 1); ++h) {
        da_peak = std::max(da_peak, std::abs(rec.plan.da_mw[h]));
      }
      da_split_sum[k] += da_peak;
    }

    report.days.push_back(std::move(rec));
  }

  const double n_days = static_cast<double>(report.days.size());
  for (int k = 0; k < ProductBlock::kCount; ++k) {
    report.mean_da_mw_by_block[k] = da_split_sum[k] / n_days;
    report.mean_afrr_mw_by_block[k] = afrr_split_sum[k] / n_days;
  }
  return report;
}

}  // namespace flexbid::backtest
