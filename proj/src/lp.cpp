#include "netweight/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netweight {

namespace {

constexpr double kCostTol = 1e-9;   // entering: reduced cost must beat this
constexpr double kRatioTol = 1e-7;  // pivot element eligibility
constexpr double kPhase1Tol = 1e-7;
constexpr int kMaxPivots = 50000;

struct Tableau {
  // rows x (cols + 1); last column is the rhs
  int nrows = 0, ncols = 0;
  std::vector<double> t;
  std::vector<int> basis;   // basis[row] = variable index
  std::vector<double> obj;  // reduced-cost row, size ncols + 1 (last = -value)
  int pivots = 0;

  double& at(int r, int c) {
    return t[static_cast<std::size_t>(r) * (ncols + 1) + c];
  }
  double at(int r, int c) const {
    return t[static_cast<std::size_t>(r) * (ncols + 1) + c];
  }

  void pivot(int pr, int pc) {
    if (++pivots > kMaxPivots) throw Error("simplex iteration limit");
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= ncols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < nrows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (std::fabs(f) < 1e-14) continue;
      for (int c = 0; c <= ncols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = obj[pc];
    if (std::fabs(f) > 0) {
      for (int c = 0; c <= ncols; ++c) obj[c] -= f * at(pr, c);
      obj[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Smallest-index entering; leaving by min ratio with the largest eligible
  // pivot element among near-ties (keeps the tableau from blowing up on
  // near-degenerate rows).  Returns false at optimality.
  bool step(int restrict_cols) {
    int enter = -1;
    for (int c = 0; c < restrict_cols; ++c) {
      if (obj[c] < -kCostTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return false;

    double theta = std::numeric_limits<double>::infinity();
    for (int r = 0; r < nrows; ++r) {
      const double a = at(r, enter);
      if (a > kRatioTol)
        theta = std::min(theta, std::max(at(r, ncols), 0.0) / a);
    }
    if (theta == std::numeric_limits<double>::infinity()) {
      // a ray whose reduced cost is fp noise means we're at the optimum;
      // only a clearly improving ray is genuine unboundedness
      if (obj[enter] > -1e-6) return false;
      throw Unbounded();
    }
    int leave = -1;
    double best_piv = 0;
    for (int r = 0; r < nrows; ++r) {
      const double a = at(r, enter);
      if (a <= kRatioTol) continue;
      const double ratio = std::max(at(r, ncols), 0.0) / a;
      if (ratio > theta + 1e-9) continue;
      if (a > best_piv ||
          (a == best_piv && leave >= 0 && basis[r] < basis[leave])) {
        best_piv = a;
        leave = r;
      }
    }
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob) {
  const int n = prob.nvars;
  if (static_cast<int>(prob.c.size()) != n)
    throw DimensionMismatch("objective length != nvars");
  auto check_row = [&](const LpProblem::Row& row) {
    for (auto [j, v] : row.coef) {
      (void)v;
      if (j < 0 || j >= n)
        throw DimensionMismatch("row references variable out of range");
    }
  };
  for (const auto& r : prob.le) check_row(r);
  for (const auto& r : prob.eq) check_row(r);

  const int n_le = static_cast<int>(prob.le.size());
  const int n_eq = static_cast<int>(prob.eq.size());
  const int nrows = n_le + n_eq;
  // columns: structural | slacks | artificials
  const int slack0 = n;
  const int art0 = n + n_le;
  const int ncols = n + n_le + nrows;

  Tableau tb;
  tb.nrows = nrows;
  tb.ncols = ncols;
  tb.t.assign(static_cast<std::size_t>(nrows) * (ncols + 1), 0.0);
  tb.basis.assign(nrows, -1);

  for (int r = 0; r < nrows; ++r) {
    const bool is_le = r < n_le;
    const LpProblem::Row& row = is_le ? prob.le[r] : prob.eq[r - n_le];
    double scale = 0;  // equilibrate so pivots stay O(1)
    for (auto [j, v] : row.coef) {
      (void)j;
      scale = std::max(scale, std::fabs(v));
    }
    if (scale == 0) scale = 1;
    double sign = 1.0 / scale;
    if (row.rhs < 0) sign = -sign;  // keep rhs nonnegative
    for (auto [j, v] : row.coef) tb.at(r, j) += sign * v;
    if (is_le) tb.at(r, slack0 + r) = row.rhs < 0 ? -1.0 : 1.0;
    tb.at(r, ncols) = sign * row.rhs;
  }

  // Phase 1: basis from positive slacks where possible, artificials elsewhere.
  std::vector<bool> has_art(nrows, false);
  for (int r = 0; r < nrows; ++r) {
    if (r < n_le && tb.at(r, slack0 + r) > 0) {
      tb.basis[r] = slack0 + r;
    } else {
      tb.at(r, art0 + r) = 1.0;
      tb.basis[r] = art0 + r;
      has_art[r] = true;
    }
  }
  tb.obj.assign(ncols + 1, 0.0);
  for (int r = 0; r < nrows; ++r) {
    if (!has_art[r]) continue;
    // phase-1 objective: sum of artificials, expressed in nonbasic terms
    for (int c = 0; c <= ncols; ++c) tb.obj[c] -= tb.at(r, c);
    tb.obj[art0 + r] += 1.0;
  }
  while (tb.step(art0)) {
  }
  const double phase1 = -tb.obj[ncols];
  if (phase1 > kPhase1Tol) throw Infeasible();

  // Drive leftover artificials out of the basis; rows where that is
  // impossible are redundant and must be dropped, or phase 2's ray test
  // would treat "this zero artificial would grow" as an unbounded direction.
  for (int r = 0; r < tb.nrows;) {
    if (tb.basis[r] < art0) {
      ++r;
      continue;
    }
    int pc = -1;
    for (int c = 0; c < art0; ++c) {
      if (std::fabs(tb.at(r, c)) > kRatioTol) {
        pc = c;
        break;
      }
    }
    if (pc >= 0) {
      tb.pivot(r, pc);
      ++r;
    } else {
      const int last = tb.nrows - 1;
      if (r != last) {
        for (int c = 0; c <= ncols; ++c) tb.at(r, c) = tb.at(last, c);
        tb.basis[r] = tb.basis[last];
      }
      --tb.nrows;
    }
  }

  // Phase 2 objective.
  tb.obj.assign(ncols + 1, 0.0);
  for (int j = 0; j < n; ++j) tb.obj[j] = prob.c[j];
  for (int r = 0; r < tb.nrows; ++r) {
    const int b = tb.basis[r];
    if (b < n && std::fabs(tb.obj[b]) > 0) {
      const double f = tb.obj[b];
      for (int c = 0; c <= ncols; ++c) tb.obj[c] -= f * tb.at(r, c);
      tb.obj[b] = 0.0;
    }
  }
  while (tb.step(art0)) {
  }

  LpSolution sol;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < tb.nrows; ++r) {
    if (tb.basis[r] < n) sol.x[tb.basis[r]] = std::max(tb.at(r, ncols), 0.0);
  }
  double v = 0;
  for (int j = 0; j < n; ++j) v += prob.c[j] * sol.x[j];
  sol.value = v;
  return sol;
}

}  // namespace netweight
