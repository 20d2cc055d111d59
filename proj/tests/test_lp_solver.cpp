#include "flexbid/lp.hpp"

#include <gtest/gtest.h>

#include "flexbid/common.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "support/lp_checks.hpp"
#include "support/lp_oracle.hpp"
#include "support/lp_random.hpp"

using namespace flexbid;
using namespace flexbid::lp;
using flexbid::testing::check_certificates;
using flexbid::testing::enumerate_vertices;
using flexbid::testing::random_bounded_lp;
using flexbid::testing::random_infeasible_lp;

namespace {

LinearProgram single_var_lp() {
  // max x s.t. x <= 5, x >= 0
  LinearProgram lp;
  lp.add_column("x", 0.0, kInf, 1.0);
  int r = lp.add_row(RowSense::le, 5.0);
  lp.add_entry(r, 0, 1.0);
  return lp;
}

}  // namespace

TEST(LpSolver, SingleVariableHitsRowBound) {
  auto lp = single_var_lp();
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, SolveStatus::optimal);
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
  EXPECT_NEAR(sol.primal[0], 5.0, 1e-9);
  // Tight <= row in a max problem carries a nonnegative dual.
  EXPECT_NEAR(sol.duals[0], 1.0, 1e-9);
  EXPECT_EQ(check_certificates(lp, sol), "");
}

TEST(LpSolver, TwoVariableSharedBudget) {
  // max x + y s.t. x + y <= 1, x <= 0.25, x,y >= 0 -> objective 1
  LinearProgram lp;
  lp.add_column("x", 0.0, kInf, 1.0);
  lp.add_column("y", 0.0, kInf, 1.0);
  int r0 = lp.add_row(RowSense::le, 1.0);
  lp.add_entry(r0, 0, 1.0);
  lp.add_entry(r0, 1, 1.0);
  int r1 = lp.add_row(RowSense::le, 0.25);
  lp.add_entry(r1, 0, 1.0);
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, SolveStatus::optimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
  EXPECT_EQ(check_certificates(lp, sol), "");
}

TEST(LpSolver, DetectsUnbounded) {
  // max x s.t. x >= 0 with no upper structure.
  LinearProgram lp;
  lp.add_column("x", 0.0, kInf, 1.0);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, SolveStatus::unbounded);
}

TEST(LpSolver, DetectsInfeasible) {
  LinearProgram lp;
  lp.add_column("x", 0.0, 10.0, 1.0);
  int r1 = lp.add_row(RowSense::le, 2.0);
  lp.add_entry(r1, 0, 1.0);
  int r2 = lp.add_row(RowSense::ge, 3.0);
  lp.add_entry(r2, 0, 1.0);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, SolveStatus::infeasible);
}

TEST(LpSolver, IterationLimitReportedDistinctly) {
  auto lp = single_var_lp();
  Tolerances tol;
  tol.iteration_factor = 0;
  auto sol = solve(lp, tol);
  EXPECT_EQ(sol.status, SolveStatus::iteration_limit);
}

TEST(LpSolver, FixedAndFreeVariables) {
  // max 2x - y + z with x fixed to 3, y free, z in [-1, 4],
  // s.t. y = z - x  (so y >= -4).
  LinearProgram lp;
  lp.add_column("x", 3.0, 3.0, 2.0);
  lp.add_column("y", -kInf, kInf, -1.0);
  lp.add_column("z", -1.0, 4.0, 1.0);
  int r = lp.add_row(RowSense::eq, 0.0);
  lp.add_entry(r, 0, 1.0);
  lp.add_entry(r, 1, 1.0);
  lp.add_entry(r, 2, -1.0);
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, SolveStatus::optimal);
  // y = z - 3; objective = 6 - (z - 3) + z = 9. Any feasible z is optimal.
  EXPECT_NEAR(sol.objective, 9.0, 1e-9);
  EXPECT_EQ(check_certificates(lp, sol), "");
}

TEST(LpSolver, MatchesVertexEnumerationOracle) {
  std::mt19937 rng(20240601);
  int solved = 0;
  for (int trial = 0; trial < 250; ++trial) {
    auto lp = random_bounded_lp(rng);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, SolveStatus::optimal) << "trial " << trial;
    auto oracle = enumerate_vertices(lp);
    ASSERT_TRUE(oracle.feasible) << "trial " << trial;
    EXPECT_NEAR(sol.objective, oracle.objective,
                1e-6 * (1.0 + std::abs(oracle.objective)))
        << "trial " << trial;
    EXPECT_EQ(check_certificates(lp, sol), "") << "trial " << trial;
    ++solved;
  }
  EXPECT_EQ(solved, 250);
}

TEST(LpSolver, ContradictoryRowsAlwaysInfeasible) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    auto lp = random_infeasible_lp(rng);
    auto sol = solve(lp);
    EXPECT_EQ(sol.status, SolveStatus::infeasible) << "trial " << trial;
  }
}

TEST(LpSolver, DegenerateDuplicatedRowsTerminate) {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    auto base = random_bounded_lp(rng);
    // Duplicating rows leaves the feasible set (and optimum) unchanged but
    // makes the instance heavily degenerate.
    auto lp = base;
    const int m = base.num_rows();
    for (int copy = 0; copy < 3; ++copy) {
      for (int i = 0; i < m; ++i) lp.add_row(base.senses[i], base.rhs[i]);
      for (const auto& e : base.entries) {
        lp.add_entry(e.row + (copy + 1) * m, e.col, e.value);
      }
    }
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, SolveStatus::optimal) << "trial " << trial;
    auto oracle = enumerate_vertices(base);
    EXPECT_NEAR(sol.objective, oracle.objective,
                1e-6 * (1.0 + std::abs(oracle.objective)))
        << "trial " << trial;
  }
}

TEST(LpSolver, CostScalingPreservesBasisAndScalesObjective) {
  std::mt19937 rng(9090);
  for (int trial = 0; trial < 50; ++trial) {
    auto lp = random_bounded_lp(rng);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, SolveStatus::optimal);
    const double lambda = 2.0;
    auto scaled = lp;
    for (auto& c : scaled.objective) c *= lambda;
    auto sol2 = solve(scaled);
    ASSERT_EQ(sol2.status, SolveStatus::optimal);
    EXPECT_EQ(sol.column_status, sol2.column_status) << "trial " << trial;
    EXPECT_NEAR(sol2.objective, lambda * sol.objective,
                1e-6 * (1.0 + std::abs(sol.objective)));
  }
}

TEST(LpSolver, RepeatedSolvesAreBitIdentical) {
  std::mt19937 rng(31337);
  auto lp = random_bounded_lp(rng);
  auto a = solve(lp);
  auto b = solve(lp);
  ASSERT_EQ(a.status, b.status);
  EXPECT_EQ(a.primal, b.primal);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(LpSolver, ValidateRejectsBadData) {
  LinearProgram lp;
  lp.add_column("x", 1.0, 0.0, 1.0);  // lower > upper
  EXPECT_THROW(lp.validate(), Error);

  LinearProgram lp2;
  lp2.add_column("x", 0.0, 1.0, std::nan(""));
  EXPECT_THROW(lp2.validate(), Error);
}

TEST(LpSolver, WritesLpFormat) {
  auto lp = single_var_lp();
  std::ostringstream os;
  write_lp_format(lp, os);
  std::string text = os.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("Bounds"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}
