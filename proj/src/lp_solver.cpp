#include "flexbid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "flexbid/common.hpp"

namespace flexbid::lp {

namespace {

constexpr double kPivotTol = 1e-9;   // smallest pivot element accepted
constexpr double kDualTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kDegenStep = 1e-12; // step below this counts as a stall

// Internal problem: every row is an equality over structural columns,
// slacks, and one artificial per row.
//
//   [ A | I_slack | Sigma_art ] x = b,   l <= x <= u
//
// Slack bounds encode the row sense (<=: [0,inf), =: [0,0], >=: (-inf,0]).
// Artificials carry the phase-1 objective and are frozen to [0,0] as soon
// as they leave the basis or phase 1 ends.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Tolerances& tol)
      : tol_(tol),
        m_(lp.num_rows()),
        n_struct_(lp.num_cols()),
        n_total_(lp.num_cols() + 2 * lp.num_rows()) {
    build(lp);
  }

  LpSolution run() {
    iteration_limit_ = tol_.iteration_factor * (m_ + n_struct_);
    init_basis();

    // Phase 1: maximize -sum(artificials).
    phase1_ = true;
    set_phase_costs();
    Outcome out = iterate();
    if (out == Outcome::limit) return finish_limit();
    refactorize();
    if (infeasibility() > tol_.feasibility * rhs_scale_) {
      LpSolution sol;
      sol.status = SolveStatus::infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    freeze_artificials();

    // Phase 2: original objective from the feasible basis.
    phase1_ = false;
    set_phase_costs();
    bland_ = false;
    stall_count_ = 0;
    while (true) {
      out = iterate();
      if (out == Outcome::limit) return finish_limit();
      if (out == Outcome::unbounded) {
        LpSolution sol;
        sol.status = SolveStatus::unbounded;
        sol.iterations = iterations_;
        return sol;
      }
      // Confirm optimality against a fresh factorization; resume if the
      // recomputed reduced costs still show an improving column.
      refactorize();
      if (price_full().col < 0) break;
    }
    return finish_optimal();
  }

 private:
  enum class Outcome { optimal, unbounded, limit };

  struct Candidate {
    int col = -1;
    double reduced = 0.0;
    int direction = +1;  // +1 increase, -1 decrease
  };

  void build(const LinearProgram& lp) {
    lower_.assign(n_total_, 0.0);
    upper_.assign(n_total_, 0.0);
    cost_orig_.assign(n_total_, 0.0);
    for (int j = 0; j < n_struct_; ++j) {
      lower_[j] = lp.lower[j];
      upper_[j] = lp.upper[j];
      cost_orig_[j] = lp.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      int sj = n_struct_ + i;
      switch (lp.senses[i]) {
        case RowSense::le: lower_[sj] = 0.0; upper_[sj] = kInf; break;
        case RowSense::eq: lower_[sj] = 0.0; upper_[sj] = 0.0; break;
        case RowSense::ge: lower_[sj] = -kInf; upper_[sj] = 0.0; break;
      }
      int aj = n_struct_ + m_ + i;
      lower_[aj] = 0.0;
      upper_[aj] = kInf;
    }

    // Column-wise sparse matrix; duplicate triplets are summed. Artificial
    // columns get a +1 placeholder whose sign init_basis() settles.
    std::vector<std::vector<std::pair<int, double>>> cols(n_total_);
    for (const auto& e : lp.entries) cols[e.col].emplace_back(e.row, e.value);
    for (int i = 0; i < m_; ++i) cols[n_struct_ + i].emplace_back(i, 1.0);
    for (int i = 0; i < m_; ++i) cols[n_struct_ + m_ + i].emplace_back(i, 1.0);
    col_start_.assign(n_total_ + 1, 0);
    for (int j = 0; j < n_total_; ++j) {
      auto& c = cols[j];
      std::sort(c.begin(), c.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::pair<int, double>> merged;
      for (const auto& [r, v] : c) {
        if (!merged.empty() && merged.back().first == r) {
          merged.back().second += v;
        } else {
          merged.emplace_back(r, v);
        }
      }
      c = std::move(merged);
      col_start_[j + 1] = col_start_[j] + static_cast<int>(c.size());
    }
    row_index_.reserve(col_start_[n_total_]);
    values_.reserve(col_start_[n_total_]);
    for (const auto& c : cols) {
      for (const auto& [r, v] : c) {
        row_index_.push_back(r);
        values_.push_back(v);
      }
    }

    rhs_ = lp.rhs;
    rhs_scale_ = 1.0;
    for (double b : rhs_) rhs_scale_ = std::max(rhs_scale_, std::abs(b));
  }

  void init_basis() {
    x_.assign(n_total_, 0.0);
    status_.assign(n_total_, ColumnStatus::nonbasic_free);
    for (int j = 0; j < n_struct_ + m_; ++j) {
      status_[j] = start_status(j);
      x_[j] = nonbasic_value(j);
    }

    // Residual of the nonbasic assignment decides each artificial's sign so
    // that every artificial starts basic and feasible.
    std::vector<double> r = rhs_;
    for (int j = 0; j < n_struct_ + m_; ++j) {
      if (x_[j] == 0.0) continue;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        r[row_index_[k]] -= values_[k] * x_[j];
      }
    }
    art_sign_.assign(m_, 1.0);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      int aj = n_struct_ + m_ + i;
      art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
      values_[col_start_[aj]] = art_sign_[i];
      basis_[i] = aj;
      status_[aj] = ColumnStatus::basic;
      x_[aj] = std::abs(r[i]);
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = art_sign_[i];
    pivots_since_refactor_ = 0;
    iterations_ = 0;
  }

  ColumnStatus start_status(int j) const {
    bool lo = std::isfinite(lower_[j]);
    bool hi = std::isfinite(upper_[j]);
    if (lo && hi) {
      return std::abs(lower_[j]) <= std::abs(upper_[j]) ? ColumnStatus::at_lower
                                                        : ColumnStatus::at_upper;
    }
    if (lo) return ColumnStatus::at_lower;
    if (hi) return ColumnStatus::at_upper;
    return ColumnStatus::nonbasic_free;
  }

  double nonbasic_value(int j) const {
    switch (status_[j]) {
      case ColumnStatus::at_lower: return lower_[j];
      case ColumnStatus::at_upper: return upper_[j];
      default: return 0.0;
    }
  }

  void set_phase_costs() {
    cost_.assign(n_total_, 0.0);
    if (phase1_) {
      for (int i = 0; i < m_; ++i) cost_[n_struct_ + m_ + i] = -1.0;
    } else {
      for (int j = 0; j < n_struct_; ++j) cost_[j] = cost_orig_[j];
    }
  }

  double infeasibility() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (j >= n_struct_ + m_) s += std::abs(x_[j]);
    }
    for (int i = 0; i < m_; ++i) {
      int aj = n_struct_ + m_ + i;
      if (status_[aj] != ColumnStatus::basic) s += std::abs(x_[aj]);
    }
    return s;
  }

  void freeze_artificials() {
    for (int i = 0; i < m_; ++i) {
      int aj = n_struct_ + m_ + i;
      upper_[aj] = 0.0;
      if (status_[aj] != ColumnStatus::basic) {
        status_[aj] = ColumnStatus::at_lower;
        x_[aj] = 0.0;
      }
    }
  }

  // ---- linear algebra ------------------------------------------------

  // y = cB' * Binv
  void btran_costs(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int j = 0; j < m_; ++j) y[j] += cb * row[j];
    }
  }

  // w = Binv * A_col(j)
  void ftran(int j, std::vector<double>& w) {
    scratch_.assign(m_, 0.0);
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      scratch_[row_index_[k]] = values_[k];
    }
    w.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += row[k] * scratch_[k];
      w[i] = acc;
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      d -= y[row_index_[k]] * values_[k];
    }
    return d;
  }

  // Rebuilds the dense inverse from the basis columns (Gauss-Jordan with
  // partial pivoting) and recomputes the basic values.
  void refactorize() {
    if (m_ > 0) {
      std::vector<double> aug(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
      const int w = 2 * m_;
      for (int col = 0; col < m_; ++col) {
        int j = basis_[col];
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          aug[static_cast<std::size_t>(row_index_[k]) * w + col] = values_[k];
        }
      }
      for (int i = 0; i < m_; ++i) aug[static_cast<std::size_t>(i) * w + m_ + i] = 1.0;
      for (int piv = 0; piv < m_; ++piv) {
        int best = piv;
        double best_abs = std::abs(aug[static_cast<std::size_t>(piv) * w + piv]);
        for (int i = piv + 1; i < m_; ++i) {
          double a = std::abs(aug[static_cast<std::size_t>(i) * w + piv]);
          if (a > best_abs) { best = i; best_abs = a; }
        }
        if (best_abs < 1e-12) throw Error("lp solver: numerically singular basis");
        if (best != piv) {
          for (int k = 0; k < 2 * m_; ++k) {
            std::swap(aug[static_cast<std::size_t>(piv) * w + k],
                      aug[static_cast<std::size_t>(best) * w + k]);
          }
        }
        double* prow = &aug[static_cast<std::size_t>(piv) * w];
        double inv = 1.0 / prow[piv];
        for (int k = 0; k < 2 * m_; ++k) prow[k] *= inv;
        for (int i = 0; i < m_; ++i) {
          if (i == piv) continue;
          double f = aug[static_cast<std::size_t>(i) * w + piv];
          if (f == 0.0) continue;
          double* irow = &aug[static_cast<std::size_t>(i) * w];
          for (int k = 0; k < 2 * m_; ++k) irow[k] -= f * prow[k];
        }
      }
      for (int i = 0; i < m_; ++i) {
        for (int k = 0; k < m_; ++k) {
          binv_[static_cast<std::size_t>(i) * m_ + k] =
              aug[static_cast<std::size_t>(i) * w + m_ + k];
        }
      }
    }
    recompute_basics();
    pivots_since_refactor_ = 0;
  }

  void recompute_basics() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < n_total_; ++j) {
      if (status_[j] == ColumnStatus::basic) continue;
      double xj = x_[j];
      if (xj == 0.0) continue;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        r[row_index_[k]] -= values_[k] * xj;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += row[k] * r[k];
      x_[basis_[i]] = acc;
    }
  }

  // ---- pricing and pivoting -------------------------------------------

  bool eligible(int j, double d, int& direction) const {
    if (lower_[j] == upper_[j]) return false;  // fixed
    switch (status_[j]) {
      case ColumnStatus::at_lower:
        if (d > kDualTol) { direction = +1; return true; }
        return false;
      case ColumnStatus::at_upper:
        if (d < -kDualTol) { direction = -1; return true; }
        return false;
      case ColumnStatus::nonbasic_free:
        if (std::abs(d) > kDualTol) { direction = d > 0 ? +1 : -1; return true; }
        return false;
      default:
        return false;
    }
  }

  Candidate price_full() {
    btran_costs(y_);
    Candidate best;
    for (int j = 0; j < n_total_; ++j) {
      if (status_[j] == ColumnStatus::basic) continue;
      int dir = 0;
      double d = reduced_cost(j, y_);
      if (!eligible(j, d, dir)) continue;
      if (bland_) return Candidate{j, d, dir};
      if (best.col < 0 || std::abs(d) > std::abs(best.reduced)) {
        best = Candidate{j, d, dir};
      }
    }
    return best;
  }

  Outcome iterate() {
    while (true) {
      if (iterations_ >= iteration_limit_) return Outcome::limit;
      Candidate cand = price_full();
      if (cand.col < 0) return Outcome::optimal;
      ++iterations_;

      ftran(cand.col, w_);
      const int dir = cand.direction;

      // Ratio test: largest step that keeps every basic column and the
      // entering column inside its bounds.
      double theta = kInf;
      double own_range = upper_[cand.col] - lower_[cand.col];
      if (std::isfinite(own_range)) theta = own_range;
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        double delta = -dir * w_[i];  // change of basic i per unit step
        if (std::abs(delta) <= kPivotTol) continue;
        int bj = basis_[i];
        double limit;
        if (delta > 0) {
          if (!std::isfinite(upper_[bj])) continue;
          limit = (upper_[bj] - x_[bj]) / delta;
        } else {
          if (!std::isfinite(lower_[bj])) continue;
          limit = (lower_[bj] - x_[bj]) / delta;
        }
        if (limit < 0) limit = 0.0;  // tolerate slight bound drift
        if (limit < theta - 1e-10) {
          theta = limit;
          leave = i;
        } else if (limit <= theta + 1e-10 && leave >= 0) {
          // Near-tie: prefer the numerically larger pivot, then lower row.
          if (std::abs(w_[i]) > std::abs(w_[leave]) + 1e-12) leave = i;
        }
      }
      if (theta == kInf) {
        if (phase1_) throw Error("lp solver: phase-1 ray (internal error)");
        return Outcome::unbounded;
      }
      if (theta < 0) theta = 0;

      if (theta <= kDegenStep) {
        if (++stall_count_ > stall_threshold()) bland_ = true;
      } else {
        stall_count_ = 0;
      }

      // Apply the step.
      for (int i = 0; i < m_; ++i) {
        if (w_[i] != 0.0) x_[basis_[i]] -= dir * theta * w_[i];
      }
      if (leave < 0) {
        // Bound flip: the entering column traverses to its opposite bound.
        status_[cand.col] = (dir > 0) ? ColumnStatus::at_upper : ColumnStatus::at_lower;
        x_[cand.col] = nonbasic_value(cand.col);
        continue;
      }

      int leaving_col = basis_[leave];
      double delta_leave = -dir * w_[leave];
      status_[leaving_col] = (delta_leave > 0) ? ColumnStatus::at_upper
                                               : ColumnStatus::at_lower;
      x_[leaving_col] = nonbasic_value(leaving_col);
      if (leaving_col >= n_struct_ + m_) {
        // An artificial never comes back.
        upper_[leaving_col] = 0.0;
        status_[leaving_col] = ColumnStatus::at_lower;
        x_[leaving_col] = 0.0;
      }

      x_[cand.col] += dir * theta;
      status_[cand.col] = ColumnStatus::basic;
      basis_[leave] = cand.col;
      update_inverse(leave);
      if (++pivots_since_refactor_ >= kRefactorInterval) refactorize();
    }
  }

  // Binv <- E * Binv for the pivot in row r with entering column w_.
  void update_inverse(int r) {
    double piv = w_[r];
    double* prow = &binv_[static_cast<std::size_t>(r) * m_];
    double inv = 1.0 / piv;
    for (int k = 0; k < m_; ++k) prow[k] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = w_[i];
      if (f == 0.0) continue;
      double* irow = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
    }
  }

  int stall_threshold() const { return std::max(100, m_); }

  // ---- termination ----------------------------------------------------

  LpSolution finish_limit() const {
    LpSolution sol;
    sol.status = SolveStatus::iteration_limit;
    sol.iterations = iterations_;
    return sol;
  }

  LpSolution finish_optimal() {
    LpSolution sol;
    sol.status = SolveStatus::optimal;
    sol.iterations = iterations_;
    sol.primal.assign(x_.begin(), x_.begin() + n_struct_);
    sol.objective = 0.0;
    for (int j = 0; j < n_struct_; ++j) sol.objective += cost_orig_[j] * sol.primal[j];
    btran_costs(y_);
    sol.duals = y_;
    sol.column_status.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) sol.column_status[j] = status_[j];
    return sol;
  }

  // ---- data -----------------------------------------------------------

  static constexpr int kRefactorInterval = 200;

  Tolerances tol_;
  int m_;
  int n_struct_;
  int n_total_;

  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> values_;
  std::vector<double> rhs_;
  double rhs_scale_ = 1.0;

  std::vector<double> lower_, upper_;
  std::vector<double> cost_orig_, cost_;
  std::vector<double> x_;
  std::vector<ColumnStatus> status_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  std::vector<double> art_sign_;

  std::vector<double> y_, w_, scratch_;

  bool phase1_ = true;
  bool bland_ = false;
  int stall_count_ = 0;
  int iterations_ = 0;
  int iteration_limit_ = 0;
  int pivots_since_refactor_ = 0;
};

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

int LinearProgram::add_column(std::string name, double lo, double hi, double obj) {
  col_names.push_back(std::move(name));
  lower.push_back(lo);
  upper.push_back(hi);
  objective.push_back(obj);
  return num_cols() - 1;
}

int LinearProgram::add_row(RowSense sense, double rhs_value) {
  senses.push_back(sense);
  rhs.push_back(rhs_value);
  return num_rows() - 1;
}

void LinearProgram::add_entry(int row, int col, double value) {
  if (value == 0.0) return;
  entries.push_back(Entry{row, col, value});
}

void LinearProgram::validate() const {
  const int n = num_cols();
  const int m = num_rows();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n ||
      static_cast<int>(col_names.size()) != n) {
    throw Error("lp: column arrays have inconsistent sizes");
  }
  if (static_cast<int>(senses.size()) != m) {
    throw Error("lp: row arrays have inconsistent sizes");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || !std::isfinite(objective[j])) {
      throw Error("lp: NaN or infinite data in column " + col_names[j]);
    }
    if (lower[j] > upper[j]) {
      throw Error("lp: lower > upper for column " + col_names[j]);
    }
  }
  for (double b : rhs) {
    if (!std::isfinite(b)) throw Error("lp: non-finite right-hand side");
  }
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n) {
      throw Error("lp: entry index out of range");
    }
    if (!std::isfinite(e.value)) throw Error("lp: non-finite coefficient");
  }
}

LpSolution solve(const LinearProgram& lp, const Tolerances& tol) {
  lp.validate();
  Simplex simplex(lp, tol);
  return simplex.run();
}

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  out << "Maximize\n obj:";
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    out << (lp.objective[j] >= 0 ? " + " : " - ") << num(std::abs(lp.objective[j]))
        << " " << lp.col_names[j];
  }
  out << "\nSubject To\n";
  std::vector<std::vector<std::pair<int, double>>> rows(lp.num_rows());
  for (const auto& e : lp.entries) rows[e.row].emplace_back(e.col, e.value);
  for (int i = 0; i < lp.num_rows(); ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    out << " r" << i << ":";
    double merged_prev = 0.0;
    int prev_col = -1;
    auto flush = [&]() {
      if (prev_col >= 0 && merged_prev != 0.0) {
        out << (merged_prev >= 0 ? " + " : " - ") << num(std::abs(merged_prev))
            << " " << lp.col_names[prev_col];
      }
    };
    for (const auto& [c, v] : r) {
      if (c == prev_col) {
        merged_prev += v;
        continue;
      }
      flush();
      prev_col = c;
      merged_prev = v;
    }
    flush();
    switch (lp.senses[i]) {
      case RowSense::le: out << " <= "; break;
      case RowSense::eq: out << " = "; break;
      case RowSense::ge: out << " >= "; break;
    }
    out << num(lp.rhs[i]) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo == hi) {
      out << " " << lp.col_names[j] << " = " << num(lo) << "\n";
    } else {
      out << " ";
      if (std::isfinite(lo)) {
        out << num(lo) << " <= ";
      } else {
        out << "-inf <= ";
      }
      out << lp.col_names[j];
      if (std::isfinite(hi)) out << " <= " << num(hi);
      out << "\n";
    }
  }
  out << "End\n";
}

}  // namespace flexbid::lp
