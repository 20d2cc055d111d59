#include "support/lp_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace flexbid::testing {

namespace {

constexpr double kFeasTol = 1e-7;

// Solves M z = rhs by Gaussian elimination with partial pivoting.
// Returns false when M is (numerically) singular.
bool dense_solve(std::vector<double> M, std::vector<double> rhs, int n,
                 std::vector<double>& z) {
  for (int p = 0; p < n; ++p) {
    int best = p;
    for (int i = p + 1; i < n; ++i) {
      if (std::abs(M[i * n + p]) > std::abs(M[best * n + p])) best = i;
    }
    if (std::abs(M[best * n + p]) < 1e-10) return false;
    if (best != p) {
      for (int k = 0; k < n; ++k) std::swap(M[p * n + k], M[best * n + k]);
      std::swap(rhs[p], rhs[best]);
    }
    for (int i = p + 1; i < n; ++i) {
      double f = M[i * n + p] / M[p * n + p];
      if (f == 0.0) continue;
      for (int k = p; k < n; ++k) M[i * n + k] -= f * M[p * n + k];
      rhs[i] -= f * rhs[p];
    }
  }
  z.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double acc = rhs[i];
    for (int k = i + 1; k < n; ++k) acc -= M[i * n + k] * z[k];
    z[i] = acc / M[i * n + i];
  }
  return true;
}

}  // namespace

OracleResult enumerate_vertices(const lp::LinearProgram& lp) {
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j]) || !std::isfinite(lp.upper[j])) {
      throw std::invalid_argument("oracle requires finite variable bounds");
    }
  }

  // Dense row-major A and per-row activity helper.
  std::vector<double> A(static_cast<std::size_t>(m) * n, 0.0);
  for (const auto& e : lp.entries) A[static_cast<std::size_t>(e.row) * n + e.col] += e.value;

  // Constraint pool: rows first, then one of {lower, upper} per variable.
  // index < m: row i as equality; otherwise bound of variable (idx - m) / 2
  // with side (idx - m) % 2 (0 = lower, 1 = upper).
  const int pool = m + 2 * n;

  OracleResult result;

  std::vector<int> pick(n);
  std::vector<double> M(static_cast<std::size_t>(n) * n);
  std::vector<double> rhs(n);
  std::vector<double> x;

  auto consider = [&]() {
    // Reject sets taking both bounds of one variable (parallel, singular).
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (pick[a] >= m && pick[b] >= m &&
            (pick[a] - m) / 2 == (pick[b] - m) / 2) {
          return;
        }
      }
    }
    for (int r = 0; r < n; ++r) {
      int c = pick[r];
      if (c < m) {
        for (int k = 0; k < n; ++k) M[r * n + k] = A[static_cast<std::size_t>(c) * n + k];
        rhs[r] = lp.rhs[c];
      } else {
        int var = (c - m) / 2;
        for (int k = 0; k < n; ++k) M[r * n + k] = 0.0;
        M[r * n + var] = 1.0;
        rhs[r] = ((c - m) % 2 == 0) ? lp.lower[var] : lp.upper[var];
      }
    }
    if (!dense_solve(M, rhs, n, x)) return;

    // Feasibility of the candidate point.
    for (int j = 0; j < n; ++j) {
      if (x[j] < lp.lower[j] - kFeasTol || x[j] > lp.upper[j] + kFeasTol) return;
    }
    for (int i = 0; i < m; ++i) {
      double act = 0.0;
      for (int k = 0; k < n; ++k) act += A[static_cast<std::size_t>(i) * n + k] * x[k];
      double tol = kFeasTol * (1.0 + std::abs(lp.rhs[i]));
      switch (lp.senses[i]) {
        case lp::RowSense::le: if (act > lp.rhs[i] + tol) return; break;
        case lp::RowSense::ge: if (act < lp.rhs[i] - tol) return; break;
        case lp::RowSense::eq: if (std::abs(act - lp.rhs[i]) > tol) return; break;
      }
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
    if (!result.feasible || obj > result.objective) {
      result.feasible = true;
      result.objective = obj;
    }
  };

  // Enumerate all size-n subsets of the pool.
  std::vector<int> idx(n);
  auto recurse = [&](auto&& self, int depth, int from) -> void {
    if (depth == n) {
      pick = idx;
      consider();
      return;
    }
    for (int c = from; c < pool; ++c) {
      idx[depth] = c;
      self(self, depth + 1, c + 1);
    }
  };
  recurse(recurse, 0, 0);
  return result;
}

}  // namespace flexbid::testing
