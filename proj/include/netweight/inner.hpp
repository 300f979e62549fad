#pragma once

#include <cstdint>

#include "netweight/weights.hpp"

namespace netweight {

struct FptasConfig {
  double epsilon = 0.05;
  int inner_max_iters = 12000;
  double inner_tol = 0.0125;  // must stay <= epsilon/4
  double feasibility_tol = kFeasTol;
  std::uint64_t seed = 0;
  int threads = 1;  // grid/trial parallelism; 0 = OpenMP default

  bool valid() const {
    return epsilon > 0 && inner_max_iters > 0 && inner_tol > 0 &&
           inner_tol <= epsilon / 4 + 1e-15 && feasibility_tol > 0;
  }
  // config with inner_tol re-derived from epsilon
  static FptasConfig for_epsilon(double eps) {
    FptasConfig c;
    c.epsilon = eps;
    c.inner_tol = eps / 4;
    return c;
  }
};

struct GridPointResult {
  double a = 0;
  double b = 0;          // certified inner value g(p)
  double objective = 0;  // a^{1/(1+beta)} + b
  EdgeVector p;
  bool converged = false;
};

// Euclidean projection onto the probability simplex.
EdgeVector project_simplex(EdgeVector v);

// Dykstra's alternating projections onto
//   P_a = {p >= 0, sum p = 1, per-vertex sums <= a}.
// Cycles end on the simplex so the returned point sums to exactly 1; vertex
// caps are met within tol.
EdgeVector project_polytope(const DataGraph& g, EdgeVector v, double a,
                            double tol = kFeasTol, int max_rounds = 2000);

// g(p) = max(||p||_2, sqrt(L)*||p||_max, L*||p||_inf)
double inner_objective(const DataGraph& g, const EdgeVector& p,
                       const BoundParams& params);

// Minimize g over P_a: projected subgradient with Polyak steps and iterate
// averaging; the relative gap is certified against max(trivial bound, best
// bundle-LP dual value).  a_min_hint, when >= 0, replaces the feasibility
// pre-check LP.
GridPointResult solve_inner(const DataGraph& g, double a,
                            const BoundParams& params, const FptasConfig& cfg,
                            double a_min_hint = -1.0);

}  // namespace netweight
