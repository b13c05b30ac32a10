#pragma once

#include "isolab/core.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Minimal exact-rational simplex for the tiny programs used in-tree
// (l^1 fillings, cone feasibility).  Standard form: min c.x, A x = b, x >= 0.
// Two phases, Bland's rule, dense mpq tableau.
// ---------------------------------------------------------------------------

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rat value = 0;
  std::vector<Rat> x;
};

class ExactSimplex {
 public:
  // A: m rows of length n; minimizes c.x subject to A x = b, x >= 0.
  static LpResult solve(std::vector<std::vector<Rat>> A, std::vector<Rat> b, std::vector<Rat> c) {
    std::size_t m = A.size();
    std::size_t n = m ? A[0].size() : c.size();
    for (std::size_t i = 0; i < m; ++i)
      if (b[i] < 0) {
        for (auto& aij : A[i]) aij = -aij;
        b[i] = -b[i];
      }

    // tableau with artificial basis
    std::size_t total = n + m;
    std::vector<std::vector<Rat>> T(m, std::vector<Rat>(total + 1, 0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
      T[i][n + i] = 1;
      T[i][total] = b[i];
      basis[i] = n + i;
    }

    // phase 1: minimize sum of artificials
    std::vector<Rat> cost1(total, 0);
    for (std::size_t j = n; j < total; ++j) cost1[j] = 1;
    Rat p1 = run(T, basis, cost1, total);
    if (p1 != 0) return {LpResult::Status::Infeasible, 0, {}};

    // drive artificials out of the basis where possible
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      std::size_t pivot_col = total;
      for (std::size_t j = 0; j < n; ++j)
        if (T[i][j] != 0) {
          pivot_col = j;
          break;
        }
      if (pivot_col == total) continue;  // redundant row
      pivot(T, basis, i, pivot_col, total);
    }

    // phase 2
    std::vector<Rat> cost2(total, 0);
    for (std::size_t j = 0; j < n; ++j) cost2[j] = c[j];
    // forbid re-entering artificials
    bool unbounded = false;
    Rat v = run(T, basis, cost2, total, /*restrict_to=*/n, &unbounded);
    if (unbounded) return {LpResult::Status::Unbounded, 0, {}};

    LpResult res;
    res.status = LpResult::Status::Optimal;
    res.value = v;
    res.x.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) res.x[basis[i]] = T[i][total];
    return res;
  }

  // feasibility of A x = b, x >= 0
  static bool feasible(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
    std::vector<Rat> c(A.empty() ? 0 : A[0].size(), 0);
    return solve(std::move(A), std::move(b), std::move(c)).status == LpResult::Status::Optimal;
  }

 private:
  static void pivot(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                    std::size_t row, std::size_t col, std::size_t total) {
    Rat piv = T[row][col];
    for (std::size_t j = 0; j <= total; ++j) T[row][j] /= piv;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (i == row || T[i][col] == 0) continue;
      Rat f = T[i][col];
      for (std::size_t j = 0; j <= total; ++j) T[i][j] -= f * T[row][j];
    }
    basis[row] = col;
  }

  // simplex loop with Bland's rule; returns objective value
  static Rat run(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                 const std::vector<Rat>& cost, std::size_t total,
                 std::size_t restrict_to = SIZE_MAX, bool* unbounded = nullptr) {
    std::size_t m = T.size();
    std::size_t ncols = (restrict_to == SIZE_MAX) ? total : restrict_to;
    while (true) {
      // reduced costs via the basis
      std::vector<Rat> y(m);  // multipliers of basic rows
      for (std::size_t i = 0; i < m; ++i) y[i] = cost[basis[i]];
      std::size_t enter = total;
      for (std::size_t j = 0; j < ncols; ++j) {
        Rat red = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (T[i][j] != 0) red -= y[i] * T[i][j];
        if (red < 0) {
          enter = j;
          break;  // Bland: smallest index
        }
      }
      if (enter == total) break;
      std::size_t leave = m;
      Rat best_ratio = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        Rat ratio = T[i][total] / T[i][enter];
        if (leave == m || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m) {
        if (unbounded) *unbounded = true;
        return 0;
      }
      pivot(T, basis, leave, enter, total);
    }
    Rat v = 0;
    for (std::size_t i = 0; i < m; ++i) v += cost[basis[i]] * T[i][total];
    return v;
  }
};

}  // namespace isolab
