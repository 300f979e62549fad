#pragma once

#include <string>
#include <utility>
#include <vector>

#include "netweight/inner.hpp"

namespace netweight {

struct FptasResult {
  double a_min = 0;
  double grid_step = 0;  // epsilon*(1+beta)/n
  int grid_size = 0;
  std::vector<GridPointResult> trace;  // grid order
  int best_index = 0;

  const GridPointResult& best() const { return trace[best_index]; }
  bool all_converged() const;
};

// Eq. (9): min a  s.t.  p on the simplex, per-vertex sums <= a.
// Returns the optimum and the attaining distribution.
std::pair<double, EdgeVector> solve_amin(const DataGraph& g,
                                         const FptasConfig& cfg);

// 1 + floor(n(1 - a_min)/(epsilon(1+beta))), robust to fp-boundary inputs
int grid_size_formula(int n, double a_min, double epsilon, double beta);

// Algorithm 1.  Grid points solved independently (OpenMP when
// cfg.threads != 1); ties broken by smallest grid index.
FptasResult run_fptas(const DataGraph& g, const BoundParams& params,
                      const FptasConfig& cfg);

// beta = 0 only: the objective a + b is jointly convex, and the optimal a for
// a given p is its max vertex sum, so the whole program collapses to
// minimizing  max_vertex_sum(p) + g(p)  over the simplex.
GridPointResult solve_joint_beta0(const DataGraph& g, const BoundParams& params,
                                  const FptasConfig& cfg);

std::string fptas_result_to_json(const FptasResult& r);

}  // namespace netweight
