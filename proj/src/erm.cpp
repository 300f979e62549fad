#include "netweight/erm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "netweight/errors.hpp"
#include "netweight/serialize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netweight {

bool SyntheticInstance::valid() const {
  if (D < 1) return false;
  if (static_cast<int>(px.size()) != D) return false;
  double sum = 0;
  for (double v : px) {
    if (!(v >= 0)) return false;
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9) return false;
  if (static_cast<int>(eta.size()) != D) return false;
  for (const auto& row : eta) {
    if (static_cast<int>(row.size()) != D) return false;
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

bool SyntheticInstance::symmetric(double tol) const {
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j)
      if (std::fabs(eta[i][j] - eta[j][i]) > tol) return false;
  return true;
}

std::string SyntheticInstance::to_json() const {
  JsonWriter w;
  w.begin_obj();
  w.key("D");
  w.value(D);
  w.key("px");
  w.begin_arr();
  for (double v : px) w.value(v);
  w.end_arr();
  w.key("eta");
  w.begin_arr();
  for (const auto& row : eta) {
    w.begin_arr();
    for (double v : row) w.value(v);
    w.end_arr();
  }
  w.end_arr();
  w.key("seed");
  w.value(static_cast<long long>(seed));
  w.end_obj();
  return w.str();
}

SyntheticInstance SyntheticInstance::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
  SyntheticInstance inst;
  try {
    inst.D = j.at("D").get<int>();
    inst.px = j.at("px").get<std::vector<double>>();
    inst.eta = j.at("eta").get<std::vector<std::vector<double>>>();
    if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
  if (!inst.valid()) throw ParseError("invalid synthetic instance", 0);
  return inst;
}

bool Hypothesis::symmetric() const {
  const int D = static_cast<int>(table.size());
  for (int i = 0; i < D; ++i) {
    if (static_cast<int>(table[i].size()) != D) return false;
    for (int j = i + 1; j < D; ++j)
      if (table[i][j] != table[j][i]) return false;
  }
  return true;
}

Hypothesis bayes_rule(const SyntheticInstance& inst) {
  Hypothesis r;
  r.table.assign(inst.D, std::vector<std::uint8_t>(inst.D, 0));
  for (int i = 0; i < inst.D; ++i)
    for (int j = 0; j < inst.D; ++j)
      r.table[i][j] = inst.eta[i][j] >= 0.5 ? 1 : 0;
  return r;
}

double true_risk(const SyntheticInstance& inst, const Hypothesis& r) {
  double risk = 0;
  for (int i = 0; i < inst.D; ++i)
    for (int j = 0; j < inst.D; ++j) {
      const double e = inst.eta[i][j];
      risk += inst.px[i] * inst.px[j] * (r(i, j) == 1 ? 1.0 - e : e);
    }
  return risk;
}

double bayes_risk(const SyntheticInstance& inst) {
  return true_risk(inst, bayes_rule(inst));
}

Sample draw_sample(const SyntheticInstance& inst, const DataGraph& g,
                   std::uint64_t seed) {
  Rng rng(seed);
  Sample s;
  s.features.resize(g.n);
  for (int v = 0; v < g.n; ++v) s.features[v] = rng.discrete(inst.px);
  s.labels.resize(g.m());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    s.labels[e] = rng.bernoulli(inst.eta[s.features[u]][s.features[v]]) ? 1 : 0;
  }
  return s;
}

Sample draw_sample(const SyntheticInstance& inst, const DataGraph& g) {
  return draw_sample(inst, g, inst.seed);
}

double weighted_empirical_risk(const DataGraph& g, const Sample& s,
                               const EdgeVector& w, const Hypothesis& r) {
  if (w.size() != g.edges.size()) throw LengthMismatch("edge vector length does not match the graph");
  double total = 0, mass = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    const int pred = r(s.features[u], s.features[v]);
    total += w[e] * (pred != s.labels[e] ? 1.0 : 0.0);
    mass += w[e];
  }
  if (mass <= 0) throw ZeroVector();
  return total / mass;
}

ErmResult weighted_erm(const DataGraph& g, const Sample& s,
                       const EdgeVector& w,
                       const std::vector<Hypothesis>& hypotheses) {
  if (hypotheses.empty()) throw EmptyHypothesisSet();
  ErmResult best;
  best.index = 0;
  best.empirical_risk = weighted_empirical_risk(g, s, w, hypotheses[0]);
  for (std::size_t k = 1; k < hypotheses.size(); ++k) {
    const double risk = weighted_empirical_risk(g, s, w, hypotheses[k]);
    if (risk < best.empirical_risk) {
      best.index = static_cast<int>(k);
      best.empirical_risk = risk;
    }
  }
  return best;
}

double subsampling_risk(const DataGraph& g, const Sample& s,
                        const EdgeVector& p, const Hypothesis& r, int N,
                        std::uint64_t seed) {
  if (p.size() != g.edges.size()) throw LengthMismatch("edge vector length does not match the graph");
  if (N < 1) throw Error("subsample count must be positive");
  if (!is_distribution(g, p)) throw NotADistribution("subsampling distribution must sum to 1");
  Rng rng(seed);
  double total = 0;
  for (int t = 0; t < N; ++t) {
    const int e = rng.discrete(p);
    const auto [u, v] = g.edges[e];
    const int pred = r(s.features[u], s.features[v]);
    total += pred != s.labels[e] ? 1.0 : 0.0;
  }
  return total / N;
}

namespace {

// ordered-pair excess-loss tables for the decomposition
struct ExcessTables {
  std::vector<std::vector<double>> qbar;  // E[q_r | x1, x2]
  std::vector<double> h;                  // first-order term, centered
  double lambda = 0;                      // E[q_r]
};

ExcessTables build_tables(const SyntheticInstance& inst, const Hypothesis& r,
                          const Hypothesis& rstar) {
  const int D = inst.D;
  ExcessTables t;
  t.qbar.assign(D, std::vector<double>(D, 0));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      const double e = inst.eta[i][j];
      // q_r = 1{Y != r} - 1{Y != r*}, averaged over Y ~ Bernoulli(e)
      const double loss_r = r(i, j) == 1 ? 1.0 - e : e;
      const double loss_star = rstar(i, j) == 1 ? 1.0 - e : e;
      t.qbar[i][j] = loss_r - loss_star;
    }
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) t.lambda += inst.px[i] * inst.px[j] * t.qbar[i][j];
  t.h.assign(D, 0.0);
  for (int i = 0; i < D; ++i) {
    double row = 0;
    for (int j = 0; j < D; ++j) row += inst.px[j] * t.qbar[i][j];
    t.h[i] = row - t.lambda;
  }
  return t;
}

}  // namespace

DecompositionReport hoeffding_decomposition(const SyntheticInstance& inst,
                                            const DataGraph& g,
                                            const Sample& s,
                                            const EdgeVector& w,
                                            const Hypothesis& r) {
  if (!inst.symmetric() || !r.symmetric()) throw NotSymmetric("instance and hypothesis must be symmetric");
  if (w.size() != g.edges.size()) throw LengthMismatch("edge vector length does not match the graph");
  const Hypothesis rstar = bayes_rule(inst);
  const ExcessTables tab = build_tables(inst, r, rstar);

  double mass = 0;
  for (double v : w) mass += v;
  if (mass <= 0) throw ZeroVector();

  // per-vertex weight w_bar_i = sum of incident edge weights
  std::vector<double> wbar(g.n, 0.0);
  DecompositionReport rep;
  double lambda_w = 0, u_w = 0, u_tilde_w = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [i, j] = g.edges[e];
    const int xi = s.features[i], xj = s.features[j];
    const double loss_r = r(xi, xj) != s.labels[e] ? 1.0 : 0.0;
    const double loss_star = rstar(xi, xj) != s.labels[e] ? 1.0 : 0.0;
    const double q = loss_r - loss_star;
    const double qb = tab.qbar[xi][xj];
    const double hhat = qb - tab.lambda - tab.h[xi] - tab.h[xj];
    lambda_w += w[e] * q;
    u_w += w[e] * hhat;
    u_tilde_w += w[e] * (q - qb);
    wbar[i] += w[e];
    wbar[j] += w[e];
  }
  double t_w = tab.lambda;
  for (int v = 0; v < g.n; ++v)
    if (wbar[v] != 0) t_w += wbar[v] / mass * tab.h[s.features[v]];

  rep.lambda_w = lambda_w / mass;
  rep.t_w = t_w;
  rep.u_w = u_w / mass;
  rep.u_tilde_w = u_tilde_w / mass;
  rep.residual =
      std::fabs(rep.lambda_w - (rep.t_w + rep.u_w + rep.u_tilde_w));
  rep.lambda_true = tab.lambda;
  double var = 0;
  for (int i = 0; i < inst.D; ++i) var += inst.px[i] * tab.h[i] * tab.h[i];
  rep.variance_lhs = var;
  return rep;
}

VarianceCheck variance_control_check(const SyntheticInstance& inst,
                                     const Hypothesis& r) {
  if (!inst.symmetric() || !r.symmetric()) throw NotSymmetric("instance and hypothesis must be symmetric");
  const Hypothesis rstar = bayes_rule(inst);
  const ExcessTables tab = build_tables(inst, r, rstar);
  VarianceCheck c;
  for (int i = 0; i < inst.D; ++i) c.lhs += inst.px[i] * tab.h[i] * tab.h[i];
  c.rhs = tab.lambda;
  c.holds = c.lhs <= c.rhs + 1e-12;
  return c;
}

std::vector<Hypothesis> enumerate_symmetric_hypotheses(int D) {
  if (D < 1) throw Error("domain size must be positive");
  if (D > 3) throw TooLarge("symmetric hypothesis enumeration capped at D = 3");
  // free cells: upper triangle including the diagonal, row-major
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) cells.emplace_back(i, j);
  const int k = static_cast<int>(cells.size());
  std::vector<Hypothesis> out;
  out.reserve(std::size_t{1} << k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Hypothesis r;
    r.table.assign(D, std::vector<std::uint8_t>(D, 0));
    for (int t = 0; t < k; ++t)
      if (mask & (1u << t)) {
        const auto [i, j] = cells[t];
        r.table[i][j] = 1;
        r.table[j][i] = 1;
      }
    out.push_back(std::move(r));
  }
  return out;
}

Hypothesis random_symmetric_hypothesis(int D, Rng& rng) {
  Hypothesis r;
  r.table.assign(D, std::vector<std::uint8_t>(D, 0));
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) {
      const std::uint8_t bit = rng.bernoulli(0.5) ? 1 : 0;
      r.table[i][j] = bit;
      r.table[j][i] = bit;
    }
  return r;
}

std::vector<Hypothesis> hypothesis_subset(const SyntheticInstance& inst,
                                          int cap, std::uint64_t seed) {
  if (cap < 1) throw EmptyHypothesisSet();
  const Hypothesis rstar = bayes_rule(inst);
  std::vector<Hypothesis> out{rstar};
  Rng rng(seed);
  if (inst.D <= 3) {
    auto all = enumerate_symmetric_hypotheses(inst.D);
    std::vector<int> order;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (!(all[i] == rstar)) order.push_back(static_cast<int>(i));
    // Fisher-Yates with the portable generator
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(i)]);
    for (int idx : order) {
      if (static_cast<int>(out.size()) >= cap) break;
      out.push_back(all[idx]);
    }
  } else {
    int guard = 0;
    while (static_cast<int>(out.size()) < cap && guard < 100000) {
      Hypothesis r = random_symmetric_hypothesis(inst.D, rng);
      if (std::find(out.begin(), out.end(), r) == out.end())
        out.push_back(std::move(r));
      ++guard;
    }
  }
  return out;
}

std::vector<std::vector<double>> excess_risk_trials(
    const SyntheticInstance& inst, const DataGraph& g,
    const std::vector<Hypothesis>& hypotheses,
    const std::vector<std::pair<std::string, EdgeVector>>& schemes, int trials,
    std::uint64_t seed, int threads) {
  if (hypotheses.empty()) throw EmptyHypothesisSet();
  if (trials < 1) throw Error("trial count must be positive");
  for (const auto& [name, w] : schemes)
    if (w.size() != g.edges.size()) throw LengthMismatch("edge vector length does not match the graph");

  std::vector<double> risks(hypotheses.size());
  for (std::size_t k = 0; k < hypotheses.size(); ++k)
    risks[k] = true_risk(inst, hypotheses[k]);
  const double best_risk = *std::min_element(risks.begin(), risks.end());

  const std::size_t S = schemes.size();
  std::vector<std::vector<double>> excess(S, std::vector<double>(trials, 0.0));

  std::exception_ptr failure = nullptr;
  std::mutex failure_mu;
  auto run_trial = [&](int t) {
    try {
      const Sample s =
          draw_sample(inst, g, seed + static_cast<std::uint64_t>(t));
      for (std::size_t si = 0; si < S; ++si) {
        const ErmResult pick =
            weighted_erm(g, s, schemes[si].second, hypotheses);
        excess[si][t] = risks[pick.index] - best_risk;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
#ifdef _OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
#pragma omp parallel for schedule(dynamic)
      for (int t = 0; t < trials; ++t) run_trial(t);
    }
#else
    for (int t = 0; t < trials; ++t) run_trial(t);
#endif
  }
  if (failure) std::rethrow_exception(failure);
  return excess;
}

std::vector<SchemeRow> excess_risk_experiment(
    const SyntheticInstance& inst, const DataGraph& g,
    const std::vector<Hypothesis>& hypotheses,
    const std::vector<std::pair<std::string, EdgeVector>>& schemes, int trials,
    std::uint64_t seed, int threads) {
  const auto excess =
      excess_risk_trials(inst, g, hypotheses, schemes, trials, seed, threads);
  std::vector<SchemeRow> rows;
  rows.reserve(schemes.size());
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    SchemeRow row;
    row.scheme = schemes[si].first;
    row.trials = trials;
    double sum = 0;
    for (double v : excess[si]) sum += v;
    row.mean_excess_risk = sum / trials;
    double ss = 0;
    for (double v : excess[si]) {
      const double d = v - row.mean_excess_risk;
      ss += d * d;
    }
    row.std_excess_risk = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string experiment_to_csv(const std::vector<SchemeRow>& rows) {
  std::string out = "scheme,trials,mean_excess_risk,std_excess_risk\n";
  for (const auto& r : rows) {
    out += r.scheme;
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += format_real(r.mean_excess_risk);
    out += ',';
    out += format_real(r.std_excess_risk);
    out += '\n';
  }
  return out;
}

DataGraph star_plus_matching(int m) {
  if (m < 4 || m % 2 != 0)
    throw Error("star-plus-matching needs an even edge count >= 4");
  const int k = m / 2;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (int t = 0; t < k; ++t) edges.emplace_back(2 * t, 2 * t + 1);
  const int center = 2 * k;
  for (int t = 0; t < k; ++t) edges.emplace_back(center, center + 1 + t);
  return DataGraph::build(3 * k + 1, edges);
}

bool is_star_plus_matching(const DataGraph& g, int* half_out) {
  const int m = g.m();
  if (m < 4 || m % 2 != 0) return false;
  const int k = m / 2;
  if (g.n != 3 * k + 1) return false;
  int center = -1;
  for (int v = 0; v < g.n; ++v) {
    const int d = g.degree(v);
    if (d == k && k != 1) {
      if (center >= 0) return false;
      center = v;
    } else if (d != 1) {
      return false;
    }
  }
  if (center < 0) return false;
  // star neighbors must be leaves; the rest must pair up disjointly
  for (const auto& [nb, e] : g.adj[center]) {
    (void)e;
    if (g.degree(nb) != 1) return false;
  }
  int matched = 0;
  for (const auto& [u, v] : g.edges) {
    if (u == center || v == center) continue;
    if (g.degree(u) != 1 || g.degree(v) != 1) return false;
    ++matched;
  }
  if (matched != k) return false;
  if (half_out) *half_out = k;
  return true;
}

EdgeVector paper_star_distribution(const DataGraph& g) {
  int k = 0;
  if (!is_star_plus_matching(g, &k))
    throw Error("graph is not in the star-plus-matching family");
  const int m = g.m();
  int center = -1;
  for (int v = 0; v < g.n; ++v)
    if (g.degree(v) == k) center = v;
  EdgeVector p(m, 0.0);
  const double disjoint = 2.0 / (m + 2);
  const double star = 4.0 / (static_cast<double>(m) * (m + 2));
  for (int e = 0; e < m; ++e) {
    const auto& [u, v] = g.edges[e];
    p[e] = (u == center || v == center) ? star : disjoint;
  }
  return p;
}

SyntheticInstance demo_instance(std::uint64_t seed) {
  SyntheticInstance inst;
  inst.D = 2;
  inst.px = {0.6, 0.4};
  inst.eta = {{0.05, 0.05}, {0.05, 0.95}};
  inst.seed = seed;
  return inst;
}

std::vector<Hypothesis> demo_hypotheses() {
  Hypothesis never;
  never.table = {{0, 0}, {0, 0}};
  Hypothesis diag;
  diag.table = {{1, 0}, {0, 1}};
  return {never, diag};
}

}  // namespace netweight
