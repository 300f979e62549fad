#pragma once

#include "netweight/weights.hpp"

namespace netweight {

struct OracleResult {
  double value = 0;
  EdgeVector p;
  double slack = 0;  // discretization-error estimate at this resolution
};

// Verification oracle for Theorem 2: minimize the Eq. (8) objective over the
// discretized simplex {p_e = k_e * resolution, sum = 1}.  Exhaustive when the
// composition count fits the budget; otherwise a coarse-to-fine refinement
// (exhaustive coarse pass, then exhaustive windows around the incumbents at
// doubling resolutions).  A refinement miss can only overestimate the
// optimum, which makes the FPTAS acceptance check harder, never easier.
// pre: m <= 6, resolution in [1e-4, 1e-1].
OracleResult brute_force_optimum(const DataGraph& g, const BoundParams& params,
                                 double resolution,
                                 long long budget = 2'000'000);

}  // namespace netweight
