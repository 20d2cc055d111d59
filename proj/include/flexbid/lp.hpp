// Self-contained solver for bounded-variable linear programs.
//
// Problems are stated as   max c'x  s.t.  row senses over Ax vs b,
// l <= x <= u  with infinite bounds allowed on either side. The solver is a
// bounded-variable revised simplex with an explicit basis inverse, a
// two-phase start (artificial columns), Dantzig pricing with a Bland's-rule
// fallback after a stall, and deterministic tie-breaking so repeated solves
// of the same problem return the identical vertex.

#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace flexbid::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(SolveStatus s);

// Nonbasic columns sit exactly on a bound (or at zero when free).
enum class ColumnStatus { basic, at_lower, at_upper, nonbasic_free };

struct LinearProgram {
  struct Entry {
    int row;
    int col;
    double value;
  };

  std::vector<double> objective;  // maximized
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> col_names;

  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<Entry> entries;  // sparse triplets, duplicates are summed

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_column(std::string name, double lo, double hi, double obj = 0.0);
  int add_row(RowSense sense, double rhs_value);
  void add_entry(int row, int col, double value);

  // Dimension consistency, lower <= upper, no NaN anywhere. Throws Error.
  void validate() const;
};

struct Tolerances {
  double feasibility = 1e-7;  // bound/row violation allowed in a solution
  double gap = 1e-6;          // primal-dual objective mismatch allowed
  int iteration_factor = 50;  // limit = factor * (rows + cols)
};

struct LpSolution {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> duals;  // one per row; >=0 for <=, <=0 for >= (max)
  std::vector<ColumnStatus> column_status;
  int iterations = 0;
};

LpSolution solve(const LinearProgram& lp, const Tolerances& tol = {});

// Writes the problem in CPLEX LP text format for cross-checking against
// external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& out);

}  // namespace flexbid::lp
