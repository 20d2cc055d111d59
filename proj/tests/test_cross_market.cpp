#include "flexbid/cross_market.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/lp_checks.hpp"
#include "support/model_fixtures.hpp"

using namespace flexbid;
using namespace flexbid::model;
using flexbid::testing::random_calibrated_day;
using flexbid::testing::small_model_config;

namespace {

// Calibration with every q concentrated on "nothing awarded" and zero
// activation everywhere: the balancing markets are worthless.
calib::CalibratedDay dead_balancing_day(const RunConfig& cfg, double da_price) {
  calib::CalibratedDay cal;
  cal.date = Date::from_ymd(2021, 9, 1);
  cal.src.grids = {cfg.src_grid_pos, cfg.src_grid_neg};
  cal.sre.grids = {cfg.sre_grid_pos, cfg.sre_grid_neg};
  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    for (Direction dir : kDirections) {
      std::vector<double> q(cfg.src_grid(dir).size() + 1, 0.0);
      q[0] = 1.0;
      cal.src.q[k - 1][index_of(dir)] = q;
      cal.sre.alpha[k - 1][index_of(dir)] =
          std::vector<double>(cfg.sre_grid(dir).size(), 0.0);
    }
  }
  cal.da_forecast.assign(cfg.lookahead_hours, da_price);
  return cal;
}

double sum_abs_tau(const ExpectedTrajectory& traj) {
  double s = 0.0;
  for (double t : traj.tau) s += std::abs(t);
  return s;
}

// Worst-case level trajectory over the whole look-ahead horizon, recomputed
// from the primal volumes rather than the LP's own worst-case columns.
void check_capacity_safety(const CrossMarketLP& model, const lp::LpSolution& sol,
                           const RunConfig& cfg, double tol) {
  const auto& dir = model.dir;
  std::array<std::array<double, ProductBlock::kCount>, 2> offered{};
  for (Direction d : kDirections) {
    for (int k = 1; k <= ProductBlock::kCount; ++k) {
      double src = 0.0, sre = 0.0;
      for (int i = 0; i < dir.n_src(d); ++i) src += sol.primal[dir.src(k, d, i)];
      for (int i = 0; i < dir.n_sre(d); ++i) sre += sol.primal[dir.sre(k, d, i)];
      offered[index_of(d)][k - 1] = std::max(src, sre);
    }
  }
  double low = cfg.tau_initial_mwh;
  double high = cfg.tau_initial_mwh;
  for (int t = 0; t < dir.horizon_hours; ++t) {
    double da = sol.primal[dir.da_hour(t)];
    if (t < dir.first_day_hours) {
      int k = ProductBlock::of_hour(t).index - 1;
      low -= offered[0][k];
      high += offered[1][k];
    }
    low -= da;
    high -= da;
    EXPECT_GE(low, cfg.tau_min_mwh - tol) << "hour " << t;
    EXPECT_LE(high, cfg.tau_max_mwh + tol) << "hour " << t;
  }
}

}  // namespace

TEST(CrossMarketModel, ZeroFlexibilityMeansZeroEverything) {
  RunConfig cfg = small_model_config();
  cfg.total_flexibility_mw = 0.0;
  std::mt19937 rng(1);
  auto cal = random_calibrated_day(rng, cfg);
  auto model = build_lp(cal, cfg, SplitPolicy::make_free(), 5.0);
  auto sol = lp::solve(model.lp);
  ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  auto decision = extract_bid_plan(model, sol, cal);
  EXPECT_TRUE(decision.plan.src.empty());
  EXPECT_TRUE(decision.plan.sre.empty());
  for (double v : decision.plan.da_mw) EXPECT_EQ(v, 0.0);
  for (double t : decision.expected.tau) EXPECT_NEAR(t, 0.0, 1e-9);
}

TEST(CrossMarketModel, DeadBalancingAndFlatPricesAreWorthless) {
  // Constant forecast, alpha = 0, all q mass at q_0, c_p = 0: the terminal
  // balance forces the day-ahead schedule to net zero, and a flat price
  // makes any balanced schedule worth exactly nothing.
  RunConfig cfg = small_model_config();
  auto cal = dead_balancing_day(cfg, 80.0);
  auto model = build_lp(cal, cfg, SplitPolicy::make_free(), 0.0);
  auto sol = lp::solve(model.lp);
  ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
  EXPECT_NEAR(sol.objective, 0.0, 1e-7);
  auto decision = extract_bid_plan(model, sol, cal);
  EXPECT_NEAR(decision.expected.f_src, 0.0, 1e-9);
  EXPECT_NEAR(decision.expected.f_sre, 0.0, 1e-9);
  EXPECT_NEAR(decision.expected.f_da, 0.0, 1e-7);
}

TEST(CrossMarketModel, VariableDirectorySizeAtPaperScale) {
  RunConfig cfg = small_model_config();
  cfg.lookahead_hours = 336;
  cfg.src_grid_pos = PriceLevelGrid::parse("10:100:10");  // 10 levels
  cfg.src_grid_neg = PriceLevelGrid::parse("10:100:10");
  cfg.sre_grid_pos = PriceLevelGrid::parse("10:100:10");
  cfg.sre_grid_neg = PriceLevelGrid::parse("10:100:10");
  std::mt19937 rng(2);
  auto cal = random_calibrated_day(rng, cfg);
  auto model = build_lp(cal, cfg, SplitPolicy::make_free(), 10.0);

  // 2 split scalars, SRC and SRE volumes per (direction, block, level),
  // hourly day-ahead volumes, per-(day, block) day-ahead caps, 12 worst-case
  // block volumes, the battery level split, and 4 profit aggregates.
  const int expected = 2 + (2 * 6 * 10) + (2 * 6 * 10) + 336 + (14 * 6) + 12 +
                       2 * (336 + 1) + 4;
  EXPECT_EQ(expected, 1352);
  EXPECT_EQ(model.dir.total, expected);
  EXPECT_EQ(model.lp.num_cols(), expected);
}

TEST(CrossMarketModel, RejectsInfeasibleConfigBeforeSolving) {
  RunConfig cfg = small_model_config();
  cfg.tau_initial_mwh = cfg.tau_max_mwh + 1.0;
  std::mt19937 rng(3);
  auto cal = random_calibrated_day(rng, small_model_config());
  EXPECT_THROW(build_lp(cal, cfg, SplitPolicy::make_free(), 0.0), ConfigError);

  RunConfig cfg2 = small_model_config();
  EXPECT_THROW(build_lp(cal, cfg2, SplitPolicy::fixed(8.0, 8.0), 0.0), ConfigError);
}

TEST(CrossMarketModel, ExtractionPassesVolumesThrough) {
  // Make one SRC level clearly dominant: acceptance probability one at the
  // top level, everything else worthless, and a fixed (0, 3) split.
  RunConfig cfg = small_model_config();
  auto cal = dead_balancing_day(cfg, 80.0);
  for (int k = 1; k <= ProductBlock::kCount; ++k) {
    auto& q = cal.src.q[k - 1][index_of(Direction::pos)];
    std::fill(q.begin(), q.end(), 0.0);
    q.back() = 1.0;  // every level awarded with certainty
  }
  auto model = build_lp(cal, cfg, SplitPolicy::fixed(0.0, 3.0), 0.0);
  auto sol = lp::solve(model.lp);
  ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
  auto decision = extract_bid_plan(model, sol, cal);
  const auto& grid = cfg.src_grid_pos;
  double top_price = grid.at(grid.size() - 1);
  int found = 0;
  for (const auto& bid : decision.plan.src) {
    if (bid.direction != Direction::pos) continue;
    EXPECT_EQ(bid.price, top_price);
    EXPECT_NEAR(bid.volume_mw, 3.0, 1e-7);
    ++found;
  }
  EXPECT_EQ(found, ProductBlock::kCount);
  EXPECT_NEAR(decision.expected.f_src, 2 * 6 * 3.0 * top_price, 1e-6);
  EXPECT_EQ(decision.plan.split_da_mw, 0.0);
  EXPECT_NEAR(decision.plan.split_afrr_mw, 3.0, 1e-9);
}

TEST(CrossMarketModel, TinyVolumesAreClampedOut) {
  RunConfig cfg = small_model_config();
  auto cal = dead_balancing_day(cfg, 80.0);
  auto model = build_lp(cal, cfg, SplitPolicy::make_free(), 0.0);
  auto sol = lp::solve(model.lp);
  ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
  // Doctor one solver value below the clamp threshold.
  sol.primal[model.dir.src(2, Direction::pos, 1)] = 4e-7;
  auto decision = extract_bid_plan(model, sol, cal);
  for (const auto& bid : decision.plan.src) {
    EXPECT_FALSE(bid.block == 2 && bid.direction == Direction::pos && bid.level == 1);
  }
}

TEST(CrossMarketModel, OptimaSatisfyTerminalBalanceCapacityAndExactness) {
  RunConfig cfg = small_model_config();
  std::mt19937 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    auto cal = random_calibrated_day(rng, cfg);
    double c_p = (trial % 3 == 0) ? 0.0 : 2.5 * (trial % 5);
    auto model = build_lp(cal, cfg, SplitPolicy::make_free(), c_p);
    auto sol = lp::solve(model.lp);
    ASSERT_EQ(sol.status, lp::SolveStatus::optimal) << "trial " << trial;
    EXPECT_EQ(flexbid::testing::check_certificates(model.lp, sol), "")
        << "trial " << trial;

    auto decision = extract_bid_plan(model, sol, cal);
    EXPECT_NEAR(decision.expected.tau.back(), 0.0, 1e-6) << "trial " << trial;
    check_capacity_safety(model, sol, cfg, 1e-6);

    if (c_p > 0) {
      for (int t = 0; t <= model.dir.horizon_hours; ++t) {
        double tp = sol.primal[model.dir.tau_pos(t)];
        double tn = sol.primal[model.dir.tau_neg(t)];
        EXPECT_LE(std::min(tp, tn), 1e-6) << "trial " << trial << " t " << t;
      }
    }
  }
}

TEST(CrossMarketModel, PenaltyScalarizationMonotonicity) {
  RunConfig cfg = small_model_config();
  std::mt19937 rng(91);
  for (int trial = 0; trial < 6; ++trial) {
    auto cal = random_calibrated_day(rng, cfg);
    double prev_abs = -1.0;
    double prev_gross = 0.0;
    bool first = true;
    for (double c_p : {0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0}) {
      auto model = build_lp(cal, cfg, SplitPolicy::make_free(), c_p);
      auto sol = lp::solve(model.lp);
      ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
      auto decision = extract_bid_plan(model, sol, cal);
      double abs_tau = sum_abs_tau(decision.expected);
      double gross = decision.expected.gross();
      if (!first) {
        EXPECT_LE(abs_tau, prev_abs + 1e-6) << "trial " << trial << " c_p " << c_p;
        EXPECT_LE(gross, prev_gross + 1e-6) << "trial " << trial << " c_p " << c_p;
      }
      prev_abs = abs_tau;
      prev_gross = gross;
      first = false;
    }
  }
}

TEST(CrossMarketModel, FreeSplitDominatesEveryFixedSplit) {
  RunConfig cfg = small_model_config();
  std::mt19937 rng(92);
  for (int trial = 0; trial < 4; ++trial) {
    auto cal = random_calibrated_day(rng, cfg);
    auto free_model = build_lp(cal, cfg, SplitPolicy::make_free(), 5.0);
    auto free_sol = lp::solve(free_model.lp);
    ASSERT_EQ(free_sol.status, lp::SolveStatus::optimal);
    for (int a = 0; a <= 10; ++a) {
      auto model =
          build_lp(cal, cfg, SplitPolicy::fixed(a, cfg.total_flexibility_mw - a), 5.0);
      auto sol = lp::solve(model.lp);
      ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
      EXPECT_GE(free_sol.objective, sol.objective - 1e-6)
          << "trial " << trial << " split " << a;
    }
  }
}

TEST(CrossMarketModel, DumpsLpFormat) {
  RunConfig cfg = small_model_config();
  std::mt19937 rng(5);
  auto cal = random_calibrated_day(rng, cfg);
  auto model = build_lp(cal, cfg, SplitPolicy::make_free(), 5.0);
  std::ostringstream os;
  lp::write_lp_format(model.lp, os);
  EXPECT_NE(os.str().find("tau_pos_t0"), std::string::npos);
  EXPECT_NE(os.str().find("Subject To"), std::string::npos);
}
