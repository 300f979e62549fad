#pragma once

#include <utility>
#include <vector>

#include "netweight/errors.hpp"

namespace netweight {

// Dense two-phase simplex over the standard form
//   min c.x   s.t.   A_le x <= b_le,  A_eq x = b_eq,  x >= 0.
// Bland's rule, so termination is guaranteed; fine at the desk scale this
// artifact works at (hundreds of rows/columns).
struct LpProblem {
  struct Row {
    std::vector<std::pair<int, double>> coef;  // (variable, coefficient)
    double rhs = 0;
  };
  int nvars = 0;
  std::vector<double> c;
  std::vector<Row> le;
  std::vector<Row> eq;
};

struct LpSolution {
  double value = 0;
  std::vector<double> x;
};

// throws Infeasible / Unbounded / DimensionMismatch
LpSolution solve_lp(const LpProblem& prob);

}  // namespace netweight
