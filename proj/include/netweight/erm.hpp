#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netweight/graph.hpp"
#include "netweight/rng.hpp"
#include "netweight/weights.hpp"

namespace netweight {

// Finite-domain synthetic ground truth: features take values in {0..D-1}
// with law px, labels are Bernoulli(eta(x1, x2)).
struct SyntheticInstance {
  int D = 2;
  std::vector<double> px;
  std::vector<std::vector<double>> eta;
  std::uint64_t seed = 0;

  bool valid() const;
  bool symmetric(double tol = 1e-12) const;
  std::string to_json() const;
  static SyntheticInstance from_json(const std::string& text);
};

struct Hypothesis {
  std::vector<std::vector<std::uint8_t>> table;  // D x D, values 0/1

  int operator()(int x1, int x2) const { return table[x1][x2]; }
  bool symmetric() const;
  bool operator==(const Hypothesis&) const = default;
};

// 1{eta >= 1/2}; ties at 1/2 go to label 1
Hypothesis bayes_rule(const SyntheticInstance& inst);

double true_risk(const SyntheticInstance& inst, const Hypothesis& r);
double bayes_risk(const SyntheticInstance& inst);

struct Sample {
  std::vector<int> features;         // per vertex
  std::vector<std::uint8_t> labels;  // per edge
};

Sample draw_sample(const SyntheticInstance& inst, const DataGraph& g,
                   std::uint64_t seed);
// convenience: seeded by the instance
Sample draw_sample(const SyntheticInstance& inst, const DataGraph& g);

double weighted_empirical_risk(const DataGraph& g, const Sample& s,
                               const EdgeVector& w, const Hypothesis& r);

struct ErmResult {
  int index = 0;  // into the hypothesis sequence; ties -> smallest
  double empirical_risk = 0;
};

ErmResult weighted_erm(const DataGraph& g, const Sample& s,
                       const EdgeVector& w,
                       const std::vector<Hypothesis>& hypotheses);

// Eq. (4): N edges drawn iid from p, loss averaged.
double subsampling_risk(const DataGraph& g, const Sample& s,
                        const EdgeVector& p, const Hypothesis& r, int N,
                        std::uint64_t seed);

struct DecompositionReport {
  double lambda_w = 0;    // weighted excess empirical risk
  double t_w = 0;
  double u_w = 0;
  double u_tilde_w = 0;
  double residual = 0;    // |lambda_w - (t_w + u_w + u_tilde_w)|
  double lambda_true = 0; // Lambda(r)
  double variance_lhs = 0;
};

// Exact Hoeffding decomposition of the weighted excess empirical risk against
// the instance's tables; requires a symmetric instance and hypothesis.
DecompositionReport hoeffding_decomposition(const SyntheticInstance& inst,
                                            const DataGraph& g,
                                            const Sample& s,
                                            const EdgeVector& w,
                                            const Hypothesis& r);

struct VarianceCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

// Lemma 2: Var[E[q_r | X1]] <= Lambda(r)
VarianceCheck variance_control_check(const SyntheticInstance& inst,
                                     const Hypothesis& r);

// all 2^{D(D+1)/2} symmetric tables, D <= 3
std::vector<Hypothesis> enumerate_symmetric_hypotheses(int D);

Hypothesis random_symmetric_hypothesis(int D, Rng& rng);

// seeded subset of the symmetric tables of size cap that always contains the
// Bayes rule (cap = 1 yields {r*})
std::vector<Hypothesis> hypothesis_subset(const SyntheticInstance& inst,
                                          int cap, std::uint64_t seed);

struct SchemeRow {
  std::string scheme;
  int trials = 0;
  double mean_excess_risk = 0;
  double std_excess_risk = 0;
};

// For each trial draws a fresh sample (seed + trial index) and records the
// true excess risk of each scheme's ERM pick.  Trials may run concurrently;
// aggregation is in trial order either way.
std::vector<SchemeRow> excess_risk_experiment(
    const SyntheticInstance& inst, const DataGraph& g,
    const std::vector<Hypothesis>& hypotheses,
    const std::vector<std::pair<std::string, EdgeVector>>& schemes, int trials,
    std::uint64_t seed, int threads = 1);

// trial-level excess risks, one row per scheme (used by the paired test)
std::vector<std::vector<double>> excess_risk_trials(
    const SyntheticInstance& inst, const DataGraph& g,
    const std::vector<Hypothesis>& hypotheses,
    const std::vector<std::pair<std::string, EdgeVector>>& schemes, int trials,
    std::uint64_t seed, int threads = 1);

std::string experiment_to_csv(const std::vector<SchemeRow>& rows);

// --- the star-plus-matching family ---------------------------------------

// m/2 disjoint edges plus an (m/2)-edge star; m even, >= 4
DataGraph star_plus_matching(int m);

// structural detection (any vertex labeling); half_out gets k = m/2
bool is_star_plus_matching(const DataGraph& g, int* half_out = nullptr);

// disjoint edges 2/(m+2), star edges 4/(m(m+2))
EdgeVector paper_star_distribution(const DataGraph& g);

// Demonstration design for the directional experiment: low-noise eta with a
// noisy diagonal cell, and a two-hypothesis class with approximation error so
// the hub vertex's fluctuation can mislead equal weighting.
SyntheticInstance demo_instance(std::uint64_t seed = 0);
std::vector<Hypothesis> demo_hypotheses();

}  // namespace netweight
