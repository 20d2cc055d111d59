// Builds the daily cross-market linear program from a calibrated day and the
// run configuration, and maps solutions back to a bid plan and expected
// trajectory.
//
// Sign convention: positive balancing volume in direction pos discharges the
// battery (level decreases), direction neg charges it; a day-ahead volume
// m_t > 0 is a sell and also discharges. The expected trajectory tau_t is
// the expected level change relative to the day-start level.

#pragma once

#include <string>
#include <vector>

#include "flexbid/calibration.hpp"
#include "flexbid/common.hpp"
#include "flexbid/config.hpp"
#include "flexbid/lp.hpp"

namespace flexbid::model {

// Maps LP columns back to market decisions. Column layout is fixed:
// scalars, SRC volumes, SRE volumes, hourly DA volumes, per-(day, block) DA
// caps, worst-case block volumes, battery level split, profit aggregates.
struct VariableDirectory {
  int n_src_pos = 0, n_src_neg = 0;
  int n_sre_pos = 0, n_sre_neg = 0;
  int horizon_hours = 0;   // T*
  int horizon_days = 0;    // T*/24
  int first_day_hours = 0; // T

  int m_da = 0;   // flexibility allocated to day-ahead
  int m_bal = 0;  // flexibility allocated to the balancing markets
  int src_begin = 0;
  int sre_begin = 0;
  int da_hour_begin = 0;
  int da_cap_begin = 0;
  int wc_begin = 0;
  int tau_pos_begin = 0;
  int tau_neg_begin = 0;
  int f_src = 0, f_sre = 0, f_da = 0, f_pt = 0;
  int total = 0;

  int n_src(Direction d) const { return d == Direction::pos ? n_src_pos : n_src_neg; }
  int n_sre(Direction d) const { return d == Direction::pos ? n_sre_pos : n_sre_neg; }

  int src(int block, Direction dir, int level) const;
  int sre(int block, Direction dir, int level) const;
  int da_hour(int t) const { return da_hour_begin + t; }
  int da_cap(int day, int block) const {
    return da_cap_begin + day * ProductBlock::kCount + (block - 1);
  }
  int wc_volume(int block, Direction dir) const {
    return wc_begin + index_of(dir) * ProductBlock::kCount + (block - 1);
  }
  int tau_pos(int t) const { return tau_pos_begin + t; }
  int tau_neg(int t) const { return tau_neg_begin + t; }
};

struct CrossMarketLP {
  lp::LinearProgram lp;
  VariableDirectory dir;
  Date date;
  double penalty_coefficient = 0.0;
  SplitPolicy split;
  double tau_initial = 0.0;
};

// Encodes the daily two-market problem. Throws ConfigError when the
// configuration itself is infeasible (tau_0 outside bounds and similar).
CrossMarketLP build_lp(const calib::CalibratedDay& cal, const RunConfig& cfg,
                       const SplitPolicy& split, double penalty_coefficient);

struct SrcBid {
  int block;
  Direction direction;
  int level;           // index into the calibration grid
  double price;        // EUR/MW
  double volume_mw;
};

struct SreBid {
  int block;
  Direction direction;
  int level;
  double price;        // EUR/MWh
  double volume_mw;
};

struct BidPlan {
  Date date;
  std::vector<SrcBid> src;
  std::vector<SreBid> sre;
  std::vector<double> da_mw;  // first-day hours 0..T-1, signed (buy < 0)
  double split_da_mw = 0.0;
  double split_afrr_mw = 0.0;
  double penalty_coefficient = 0.0;
};

struct ExpectedTrajectory {
  std::vector<double> tau;  // expected level change, t = 0..T*
  double f_src = 0.0, f_sre = 0.0, f_da = 0.0, f_pt = 0.0;

  double gross() const { return f_src + f_sre + f_da; }
  double objective() const { return gross() - f_pt; }
};

struct DayDecision {
  BidPlan plan;
  ExpectedTrajectory expected;
};

// Volumes below this threshold are clamped to zero on extraction.
inline constexpr double kVolumeClampMw = 1e-6;

// Requires an optimal solution; throws Error otherwise.
DayDecision extract_bid_plan(const CrossMarketLP& model,
                             const lp::LpSolution& sol,
                             const calib::CalibratedDay& cal);

// Worst-case level trajectories implied by a bid plan (full activation of
// the offered balancing volume in one direction plus the DA schedule),
// starting from tau_initial. Used by the capacity-safety checks.
struct WorstCaseTrajectory {
  std::vector<double> low;   // t = 0..T
  std::vector<double> high;
};
WorstCaseTrajectory worst_case_trajectory(const BidPlan& plan, double tau_initial);

}  // namespace flexbid::model
