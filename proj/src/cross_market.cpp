#include "flexbid/cross_market.hpp"

#include <algorithm>
#include <cmath>

namespace flexbid::model {

namespace {

// Hours of block k already covered by first-day hours 0..min(t, T-1).
int block_hours_elapsed(int t, int first_day_hours, int block) {
  int h = std::min(t, first_day_hours - 1) + 1;  // hours [0, h)
  int start = ProductBlock::kHours * (block - 1);
  return std::clamp(h - start, 0, ProductBlock::kHours);
}

void check_calibration(const calib::CalibratedDay& cal) {
  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    for (Direction dir : kDirections) {
      const auto& q = cal.src.probabilities(k, dir);
      const auto& grid = cal.src.grids[index_of(dir)];
      if (static_cast<int>(q.size()) != grid.size() + 1) {
        throw ConfigError("calibration q size does not match the SRC grid");
      }
      double sum = 0.0;
      for (double v : q) {
        if (v < -1e-12) throw ConfigError("negative acceptance probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("acceptance probabilities do not sum to one");
      }
      const auto& alpha = cal.sre.durations(k, dir);
      const auto& sre_grid = cal.sre.grids[index_of(dir)];
      if (static_cast<int>(alpha.size()) != sre_grid.size()) {
        throw ConfigError("calibration alpha size does not match the SRE grid");
      }
      for (double a : alpha) {
        if (a < -1e-12 || a > ProductBlock::kHours + 1e-12) {
          throw ConfigError("expected activation duration outside [0, 4] hours");
        }
      }
    }
  }
}

}  // namespace

int VariableDirectory::src(int block, Direction dir, int level) const {
  int offset = src_begin;
  if (dir == Direction::neg) offset += ProductBlock::kCount * n_src_pos;
  int n = n_src(dir);
  return offset + (block - 1) * n + level;
}

int VariableDirectory::sre(int block, Direction dir, int level) const {
  int offset = sre_begin;
  if (dir == Direction::neg) offset += ProductBlock::kCount * n_sre_pos;
  int n = n_sre(dir);
  return offset + (block - 1) * n + level;
}

CrossMarketLP build_lp(const calib::CalibratedDay& cal, const RunConfig& cfg,
                       const SplitPolicy& split, double penalty_coefficient) {
  cfg.validate();
  check_calibration(cal);
  if (penalty_coefficient < 0 || !std::isfinite(penalty_coefficient)) {
    throw ConfigError("penalty coefficient must be finite and >= 0");
  }
  if (!(cfg.tau_min_mwh <= cfg.tau_initial_mwh &&
        cfg.tau_initial_mwh <= cfg.tau_max_mwh)) {
    throw ConfigError("initial battery level outside [tau_min, tau_max]");
  }
  if (!split.free) {
    if (split.da_mw < 0 || split.afrr_mw < 0 ||
        split.da_mw + split.afrr_mw > cfg.total_flexibility_mw + 1e-9) {
      throw ConfigError("fixed split exceeds the total flexibility");
    }
  }
  const int T = cfg.first_day_hours;
  const int H = cfg.lookahead_hours;  // T*
  if (static_cast<int>(cal.da_forecast.size()) != H) {
    throw ConfigError("forecast horizon does not match lookahead_hours");
  }
  const double m = cfg.total_flexibility_mw;
  const double scale = static_cast<double>(T) / H;

  CrossMarketLP out;
  out.date = cal.date;
  out.penalty_coefficient = penalty_coefficient;
  out.split = split;
  out.tau_initial = cfg.tau_initial_mwh;

  VariableDirectory& dir = out.dir;
  dir.n_src_pos = cal.src.grids[0].size();
  dir.n_src_neg = cal.src.grids[1].size();
  dir.n_sre_pos = cal.sre.grids[0].size();
  dir.n_sre_neg = cal.sre.grids[1].size();
  dir.horizon_hours = H;
  dir.horizon_days = H / 24;
  dir.first_day_hours = T;

  lp::LinearProgram& lp = out.lp;

  // --- columns ---------------------------------------------------------
  if (split.free) {
    dir.m_da = lp.add_column("m_da", 0.0, m);
    dir.m_bal = lp.add_column("m_bal", 0.0, m);
  } else {
    dir.m_da = lp.add_column("m_da", split.da_mw, split.da_mw);
    dir.m_bal = lp.add_column("m_bal", split.afrr_mw, split.afrr_mw);
  }

  dir.src_begin = lp.num_cols();
  for (Direction d : kDirections) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      for (int i = 0; i < dir.n_src(d); ++i) {
        lp.add_column("src_" + std::string(to_string(d)) + "_k" + std::to_string(k) +
                          "_l" + std::to_string(i),
                      0.0, m);
      }
    }
  }
  dir.sre_begin = lp.num_cols();
  for (Direction d : kDirections) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      for (int i = 0; i < dir.n_sre(d); ++i) {
        lp.add_column("sre_" + std::string(to_string(d)) + "_k" + std::to_string(k) +
                          "_l" + std::to_string(i),
                      0.0, m);
      }
    }
  }
  dir.da_hour_begin = lp.num_cols();
  for (int t = 0; t < H; ++t) {
    lp.add_column("da_t" + std::to_string(t), -lp::kInf, lp::kInf);
  }
  dir.da_cap_begin = lp.num_cols();
  for (int d = 0; d < dir.horizon_days; ++d) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      lp.add_column("da_cap_d" + std::to_string(d) + "_k" + std::to_string(k),
                    -lp::kInf, lp::kInf);
    }
  }
  dir.wc_begin = lp.num_cols();
  for (Direction d : kDirections) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      lp.add_column("wc_" + std::string(to_string(d)) + "_k" + std::to_string(k),
                    0.0, m);
    }
  }
  dir.tau_pos_begin = lp.num_cols();
  for (int t = 0; t <= H; ++t) {
    lp.add_column("tau_pos_t" + std::to_string(t), 0.0, lp::kInf);
  }
  dir.tau_neg_begin = lp.num_cols();
  for (int t = 0; t <= H; ++t) {
    lp.add_column("tau_neg_t" + std::to_string(t), 0.0, lp::kInf);
  }
  dir.f_src = lp.add_column("f_src", -lp::kInf, lp::kInf, 1.0);
  dir.f_sre = lp.add_column("f_sre", -lp::kInf, lp::kInf, 1.0);
  dir.f_da = lp.add_column("f_da", -lp::kInf, lp::kInf, 1.0);
  dir.f_pt = lp.add_column("f_pt", -lp::kInf, lp::kInf, -1.0);
  dir.total = lp.num_cols();

  // --- profit definitions ----------------------------------------------
  // f_src = sum_k sum_i q_i * sum_{j<=i} m_j p_j, telescoped so volume j
  // carries p_j times the probability that level j is awarded.
  {
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.f_src, 1.0);
    for (Direction d : kDirections) {
      const auto& grid = cal.src.grids[index_of(d)];
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        const auto& q = cal.src.probabilities(k, d);
        double tail = 0.0;
        std::vector<double> awarded(grid.size());
        for (int j = grid.size() - 1; j >= 0; --j) {
          tail += q[j + 1];
          awarded[j] = tail;
        }
        for (int j = 0; j < grid.size(); ++j) {
          double coef = grid.at(j) * awarded[j];
          lp.add_entry(row, dir.src(k, d, j), -coef);
        }
      }
    }
  }
  {
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.f_sre, 1.0);
    for (Direction d : kDirections) {
      const auto& grid = cal.sre.grids[index_of(d)];
      for (int k = 1; k <= ProductBlock::kCount; ++k) {
        const auto& alpha = cal.sre.durations(k, d);
        for (int i = 0; i < grid.size(); ++i) {
          lp.add_entry(row, dir.sre(k, d, i), -grid.at(i) * alpha[i]);
        }
      }
    }
  }
  {
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.f_da, 1.0);
    for (int t = 0; t < H; ++t) {
      lp.add_entry(row, dir.da_hour(t), -scale * cal.da_forecast[t]);
    }
  }
  {
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.f_pt, 1.0);
    const double w = scale * penalty_coefficient;
    for (int t = 0; t <= H; ++t) {
      lp.add_entry(row, dir.tau_pos(t), -w);
      lp.add_entry(row, dir.tau_neg(t), -w);
    }
  }

  // --- expected battery level recurrence --------------------------------
  // tau_t - tau_{t-1} = (block SRE term entering at t) - da_t, with the
  // whole block credited at its start hour and tau_t split as tau+ - tau-.
  auto add_block_term = [&](int row, int k) {
    const auto& grid_pos = cal.sre.grids[0];
    const auto& alpha_pos = cal.sre.durations(k, Direction::pos);
    for (int i = 0; i < grid_pos.size(); ++i) {
      lp.add_entry(row, dir.sre(k, Direction::pos, i), alpha_pos[i]);
    }
    const auto& grid_neg = cal.sre.grids[1];
    const auto& alpha_neg = cal.sre.durations(k, Direction::neg);
    for (int i = 0; i < grid_neg.size(); ++i) {
      lp.add_entry(row, dir.sre(k, Direction::neg, i), -alpha_neg[i]);
    }
  };
  for (int t = 0; t <= H; ++t) {
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.tau_pos(t), 1.0);
    lp.add_entry(row, dir.tau_neg(t), -1.0);
    if (t > 0) {
      lp.add_entry(row, dir.tau_pos(t - 1), -1.0);
      lp.add_entry(row, dir.tau_neg(t - 1), 1.0);
    }
    if (t < T && t % ProductBlock::kHours == 0) {
      add_block_term(row, ProductBlock::of_hour(t).index);
    }
    if (t < H) lp.add_entry(row, dir.da_hour(t), 1.0);
  }
  {
    // Zero expected change over the whole look-ahead period.
    int row = lp.add_row(lp::RowSense::eq, 0.0);
    lp.add_entry(row, dir.tau_pos(H), 1.0);
    lp.add_entry(row, dir.tau_neg(H), -1.0);
  }

  // --- worst-case battery capacity ---------------------------------------
  // The balancing exposure of hour t' is the full offered block volume
  // (the most that the SRE market can call), truncated to the first day;
  // the day-ahead schedule enters deterministically over the whole horizon.
  for (int t = 0; t <= H; ++t) {
    int low = lp.add_row(lp::RowSense::ge, cfg.tau_min_mwh - cfg.tau_initial_mwh);
    int high = lp.add_row(lp::RowSense::le, cfg.tau_max_mwh - cfg.tau_initial_mwh);
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      int hours = block_hours_elapsed(t, T, k);
      if (hours == 0) continue;
      lp.add_entry(low, dir.wc_volume(k, Direction::pos), -static_cast<double>(hours));
      lp.add_entry(high, dir.wc_volume(k, Direction::neg), static_cast<double>(hours));
    }
    for (int u = 0; u <= std::min(t, H - 1); ++u) {
      lp.add_entry(low, dir.da_hour(u), -1.0);
      lp.add_entry(high, dir.da_hour(u), -1.0);
    }
  }

  // --- offered volume caps ------------------------------------------------
  // wc_k >= both the SRC and the SRE block totals and wc_k <= m_bal, which
  // also caps each block total by the balancing allocation.
  for (Direction d : kDirections) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      int src_row = lp.add_row(lp::RowSense::le, 0.0);
      for (int i = 0; i < dir.n_src(d); ++i) {
        lp.add_entry(src_row, dir.src(k, d, i), 1.0);
      }
      lp.add_entry(src_row, dir.wc_volume(k, d), -1.0);
      int sre_row = lp.add_row(lp::RowSense::le, 0.0);
      for (int i = 0; i < dir.n_sre(d); ++i) {
        lp.add_entry(sre_row, dir.sre(k, d, i), 1.0);
      }
      lp.add_entry(sre_row, dir.wc_volume(k, d), -1.0);
      int cap_row = lp.add_row(lp::RowSense::le, 0.0);
      lp.add_entry(cap_row, dir.wc_volume(k, d), 1.0);
      lp.add_entry(cap_row, dir.m_bal, -1.0);
    }
  }

  // --- day-ahead linking ----------------------------------------------
  for (int t = 0; t < H; ++t) {
    int day = t / 24;
    int block = ProductBlock::of_hour(t % 24).index;
    int up = lp.add_row(lp::RowSense::le, 0.0);
    lp.add_entry(up, dir.da_hour(t), 1.0);
    lp.add_entry(up, dir.da_cap(day, block), -1.0);
    int down = lp.add_row(lp::RowSense::le, 0.0);
    lp.add_entry(down, dir.da_hour(t), -1.0);
    lp.add_entry(down, dir.da_cap(day, block), -1.0);
  }
  for (int d = 0; d < dir.horizon_days; ++d) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      int up = lp.add_row(lp::RowSense::le, 0.0);
      lp.add_entry(up, dir.da_cap(d, k), 1.0);
      lp.add_entry(up, dir.m_da, -1.0);
      int down = lp.add_row(lp::RowSense::le, 0.0);
      lp.add_entry(down, dir.da_cap(d, k), -1.0);
      lp.add_entry(down, dir.m_da, -1.0);
    }
  }

  // --- flexibility split ------------------------------------------------
  {
    int row = lp.add_row(lp::RowSense::le, m);
    lp.add_entry(row, dir.m_da, 1.0);
    lp.add_entry(row, dir.m_bal, 1.0);
  }

  lp.validate();
  return out;
}

DayDecision extract_bid_plan(const CrossMarketLP& model, const lp::LpSolution& sol,
                             const calib::CalibratedDay& cal) {
  if (sol.status != lp::SolveStatus::optimal) {
    throw Error("cannot extract a bid plan from a " +
                std::string(lp::to_string(sol.status)) + " solution");
  }
  const VariableDirectory& dir = model.dir;
  auto clamp = [](double v) { return std::abs(v) < kVolumeClampMw ? 0.0 : v; };

  DayDecision out;
  BidPlan& plan = out.plan;
  plan.date = model.date;
  plan.penalty_coefficient = model.penalty_coefficient;
  plan.split_da_mw = clamp(sol.primal[dir.m_da]);
  plan.split_afrr_mw = clamp(sol.primal[dir.m_bal]);

  for (Direction d : kDirections) {
    const auto& src_grid = cal.src.grids[index_of(d)];
    const auto& sre_grid = cal.sre.grids[index_of(d)];
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      double src_total = 0.0;
      for (int i = 0; i < dir.n_src(d); ++i) {
        double v = clamp(sol.primal[dir.src(k, d, i)]);
        if (v > 0.0) {
          plan.src.push_back(SrcBid{k, d, i, src_grid.at(i), v});
          src_total += v;
        }
      }
      double sre_total = 0.0;
      for (int i = 0; i < dir.n_sre(d); ++i) {
        double v = clamp(sol.primal[dir.sre(k, d, i)]);
        if (v > 0.0) {
          plan.sre.push_back(SreBid{k, d, i, sre_grid.at(i), v});
          sre_total += v;
        }
      }
      if (src_total > plan.split_afrr_mw + 1e-6 ||
          sre_total > plan.split_afrr_mw + 1e-6) {
        throw Error("extracted block volume exceeds the balancing split");
      }
    }
  }

  plan.da_mw.resize(dir.first_day_hours);
  for (int t = 0; t < dir.first_day_hours; ++t) {
    plan.da_mw[t] = clamp(sol.primal[dir.da_hour(t)]);
  }

  ExpectedTrajectory& traj = out.expected;
  traj.tau.resize(dir.horizon_hours + 1);
  for (int t = 0; t <= dir.horizon_hours; ++t) {
    traj.tau[t] = sol.primal[dir.tau_pos(t)] - sol.primal[dir.tau_neg(t)];
  }
  traj.f_src = sol.primal[dir.f_src];
  traj.f_sre = sol.primal[dir.f_sre];
  traj.f_da = sol.primal[dir.f_da];
  traj.f_pt = sol.primal[dir.f_pt];
  return out;
}

WorstCaseTrajectory worst_case_trajectory(const BidPlan& plan, double tau_initial) {
  std::array<std::array<double, ProductBlock::kCount>, 2> src_total{};
  std::array<std::array<double, ProductBlock::kCount>, 2> sre_total{};
  for (const auto& bid : plan.src) {
    src_total[index_of(bid.direction)][bid.block - 1] += bid.volume_mw;
  }
  for (const auto& bid : plan.sre) {
    sre_total[index_of(bid.direction)][bid.block - 1] += bid.volume_mw;
  }

  const int T = static_cast<int>(plan.da_mw.size());
  WorstCaseTrajectory out;
  out.low.assign(T + 1, tau_initial);
  out.high.assign(T + 1, tau_initial);
  for (int t = 0; t < T; ++t) {
    int k = ProductBlock::of_hour(t % 24).index - 1;
    double wc_pos = std::max(src_total[0][k], sre_total[0][k]);
    double wc_neg = std::max(src_total[1][k], sre_total[1][k]);
    out.low[t + 1] = out.low[t] - wc_pos - plan.da_mw[t];
    out.high[t + 1] = out.high[t] + wc_neg - plan.da_mw[t];
  }
  return out;
}

}  // namespace flexbid::model
