#pragma once

#include <string>
#include <vector>

#include "netweight/graph.hpp"

namespace netweight {

// One nonnegative real per edge, in the graph's edge order.  Fractional
// matchings (per-vertex sums <= 1) and edge distributions (sums to 1) are the
// two refinements the solver moves between.
using EdgeVector = std::vector<double>;

struct WeightNorms {
  double l1 = 0;
  double l2 = 0;
  double linf = 0;
  double lmax = 0;            // max_i sqrt(sum_{j: {i,j} in E} v_ij^2)
  double max_vertex_sum = 0;  // a = max_i sum_{j: {i,j} in E} v_ij
};

struct BoundParams {
  double beta = 0.0;   // Mammen-Tsybakov exponent, [0, 1)
  double delta = 1.0;  // confidence level, (0, 1]
  double log_inv_delta() const;
  bool valid() const;
};

// entries within -tau of zero are clamped to 0; below that throws NegativeEntry
EdgeVector clamp_nonnegative(EdgeVector v, double tol = kFeasTol);

WeightNorms compute_norms(const DataGraph& g, const EdgeVector& v);

bool is_fractional_matching(const DataGraph& g, const EdgeVector& w,
                            double tol = kFeasTol);
bool is_distribution(const DataGraph& g, const EdgeVector& p,
                     double tol = kFeasTol);

// max(l2, lmax*sqrt(L), linf*L) with L = log(1/delta); the concentration part
// shared by the Eq. (8) objective and the Theorem 1 evaluator
double concentration_term(const WeightNorms& norms, const BoundParams& params);

// Eq. (8): a^{1/(1+beta)} + concentration_term(p)
double objective(const DataGraph& g, const EdgeVector& p,
                 const BoundParams& params);

// w = p / a with a = max vertex sum; ||w||_1 = 1/a
EdgeVector matching_from_distribution(const DataGraph& g, const EdgeVector& p);

// Theorem 1 evaluator, order-level with unit constants:
//   2*approx_error
//   + (max(L,1) / (1-beta)^{2/(beta+1)} / ||w||_1)
//     * (||w||_1^{beta/(1+beta)} + max(||w||_2, ||w||_max sqrt(L), ||w||_inf L))
double theorem1_bound(const DataGraph& g, const EdgeVector& w,
                      const BoundParams& params, double approx_error = 0.0);

// Eq. (11): (Delta/m)^{1/(1+beta)} + m^{-1/2}; only for
// delta in (exp(-m/Delta), 1], else DeltaOutOfRange
double equal_weighting_bound_order(const DataGraph& g,
                                   const BoundParams& params);

double eq11_delta_threshold(const DataGraph& g);  // exp(-m/Delta)

// sqrt(chi*(D_G)/m)
double chromatic_bound_order(const DataGraph& g, int max_edges = 16);

// Theorem 1 remark threshold exp(-min(l2/linf, l2^2/lmax^2)); surfaced in
// reports, never used to reject
double delta_threshold(const WeightNorms& norms);

// {"edges": [[u,v],...], "values": [...]}
std::string weights_to_json(const DataGraph& g, const EdgeVector& v);
// header "u,v,value"
std::string weights_to_csv(const DataGraph& g, const EdgeVector& v);

// Both parsers accept edges in any order but require an exact unordered match
// with the graph's edge set.
EdgeVector weights_from_json(const DataGraph& g, const std::string& text);
EdgeVector weights_from_csv(const DataGraph& g, const std::string& text);

}  // namespace netweight
