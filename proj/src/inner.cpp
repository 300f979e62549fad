#include "netweight/inner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "netweight/lp.hpp"
#include "netweight/serialize.hpp"

namespace netweight {

EdgeVector project_simplex(EdgeVector v) {
  const int m = static_cast<int>(v.size());
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0, theta = 0;
  int rho = 0;
  for (int j = 0; j < m; ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / (j + 1);
    if (u[j] - t > 0) {
      rho = j + 1;
      theta = t;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

namespace {

double max_cap_violation(const DataGraph& g, const EdgeVector& p, double a) {
  double worst = 0;
  for (int i = 0; i < g.n; ++i) {
    double s = 0;
    for (auto [j, e] : g.adj[i]) {
      (void)j;
      s += p[e];
    }
    worst = std::max(worst, s - a);
  }
  return worst;
}

}  // namespace

EdgeVector project_polytope(const DataGraph& g, EdgeVector v, double a,
                            double tol, int max_rounds) {
  if (static_cast<int>(v.size()) != g.m())
    throw LengthMismatch("project_polytope: length mismatch");
  // caps cannot bind when a >= 1 (the simplex already sums to 1)
  if (a >= 1.0) return project_simplex(std::move(v));

  std::vector<int> capped;  // vertices whose cap can be active
  for (int i = 0; i < g.n; ++i)
    if (g.degree(i) > 0) capped.push_back(i);

  const int sets = static_cast<int>(capped.size()) + 1;  // caps then simplex
  std::vector<EdgeVector> corr(sets, EdgeVector(v.size(), 0.0));
  EdgeVector p = std::move(v);

  for (int round = 0; round < max_rounds; ++round) {
    for (int s = 0; s < sets; ++s) {
      // add back this set's correction, project, store new correction
      for (std::size_t e = 0; e < p.size(); ++e) p[e] += corr[s][e];
      EdgeVector before = p;
      if (s + 1 == sets) {
        p = project_simplex(std::move(p));
      } else {
        const int i = capped[s];
        double sum = 0;
        for (auto [j, e] : g.adj[i]) {
          (void)j;
          sum += p[e];
        }
        if (sum > a) {
          const double shift = (sum - a) / g.degree(i);
          for (auto [j, e] : g.adj[i]) {
            (void)j;
            p[e] -= shift;
          }
        }
      }
      for (std::size_t e = 0; e < p.size(); ++e) corr[s][e] = before[e] - p[e];
    }
    if (max_cap_violation(g, p, a) <= 0.5 * tol) {
      bool neg = false;
      for (double x : p)
        if (x < -0.5 * tol) neg = true;
      if (!neg) break;
    }
  }
  for (double& x : p)
    if (x < 0) x = 0;
  return p;
}

double inner_objective(const DataGraph& g, const EdgeVector& p,
                       const BoundParams& params) {
  const WeightNorms s = compute_norms(g, p);
  return concentration_term(s, params);
}

namespace {

struct GEval {
  double value;
  EdgeVector subgrad;
};

GEval eval_g(const DataGraph& g, const EdgeVector& p,
             const BoundParams& params) {
  const double L = params.log_inv_delta();
  const int m = static_cast<int>(p.size());

  double sq = 0, linf = 0;
  int e_star = 0;
  for (int e = 0; e < m; ++e) {
    sq += p[e] * p[e];
    if (p[e] > linf) {
      linf = p[e];
      e_star = e;
    }
  }
  const double t1 = std::sqrt(sq);

  double vmax = 0;
  int i_star = -1;
  for (int i = 0; i < g.n; ++i) {
    double vs = 0;
    for (auto [j, e] : g.adj[i]) {
      (void)j;
      vs += p[e] * p[e];
    }
    if (vs > vmax) {
      vmax = vs;
      i_star = i;
    }
  }
  const double t2 = std::sqrt(L) * std::sqrt(vmax);
  const double t3 = L * linf;

  GEval out;
  out.value = std::max({t1, t2, t3});
  out.subgrad.assign(m, 0.0);
  if (t1 >= t2 && t1 >= t3) {
    if (t1 > 0)
      for (int e = 0; e < m; ++e) out.subgrad[e] = p[e] / t1;
  } else if (t2 >= t3) {
    const double denom = std::sqrt(vmax);
    if (denom > 0 && i_star >= 0)
      for (auto [j, e] : g.adj[i_star]) {
        (void)j;
        out.subgrad[e] = std::sqrt(L) * p[e] / denom;
      }
  } else {
    out.subgrad[e_star] = L;
  }
  return out;
}

struct Cut {
  double offset;  // f_k - s_k . p_k
  EdgeVector slope;
};

// min z  s.t.  q in P_a,  z >= offset_k + slope_k . q  for all cuts.
// Valid lower bound on min_{P_a} g because every cut underestimates g.
struct BundleOut {
  double lb;
  EdgeVector argmin;
};

BundleOut solve_bundle(const DataGraph& g, double a,
                       const std::deque<Cut>& cuts) {
  const int m = g.m();
  LpProblem lp;
  lp.nvars = m + 1;  // q, z
  lp.c.assign(m + 1, 0.0);
  lp.c[m] = 1.0;
  {
    LpProblem::Row sum;
    for (int e = 0; e < m; ++e) sum.coef.emplace_back(e, 1.0);
    sum.rhs = 1.0;
    lp.eq.push_back(std::move(sum));
  }
  if (a < 1.0) {
    for (int i = 0; i < g.n; ++i) {
      if (g.degree(i) == 0) continue;
      LpProblem::Row cap;
      for (auto [j, e] : g.adj[i]) {
        (void)j;
        cap.coef.emplace_back(e, 1.0);
      }
      cap.rhs = a;
      lp.le.push_back(std::move(cap));
    }
  }
  for (const Cut& c : cuts) {
    LpProblem::Row row;  // slope.q - z <= -offset
    for (int e = 0; e < m; ++e)
      if (c.slope[e] != 0.0) row.coef.emplace_back(e, c.slope[e]);
    row.coef.emplace_back(m, -1.0);
    row.rhs = -c.offset;
    lp.le.push_back(std::move(row));
  }
  const LpSolution sol = solve_lp(lp);
  BundleOut out;
  out.lb = sol.value;
  out.argmin.assign(sol.x.begin(), sol.x.begin() + m);
  return out;
}

}  // namespace

GridPointResult solve_inner(const DataGraph& g, double a,
                            const BoundParams& params, const FptasConfig& cfg,
                            double a_min_hint) {
  if (g.m() == 0) throw EmptyGraph();
  const int m = g.m();
  const double tau = cfg.feasibility_tol;

  double a_min = a_min_hint;
  if (a_min < 0) a_min = 1.0 / fractional_matching_number(g);
  if (a < a_min - std::max(tau, 1e-12) * std::max(1.0, a_min))
    throw InfeasibleA("a = " + format_real(a) + " below a_min = " +
                      format_real(a_min));

  const double L = params.log_inv_delta();
  const double lb_trivial =
      std::max({1.0 / std::sqrt(static_cast<double>(m)),
                a / std::sqrt(static_cast<double>(g.max_degree()) * m),
                L / m});

  // loose projections while iterating; the returned point gets a strict
  // polish so the trace honors tau_lp
  const double loose = std::max(1e-6, tau);
  const int loose_rounds = 80;

  EdgeVector p(m, 1.0 / m);
  p = project_polytope(g, std::move(p), a, loose, loose_rounds);

  GEval cur = eval_g(g, p, params);
  double f_best = cur.value;
  EdgeVector p_best = p;
  double lb = lb_trivial;

  std::deque<Cut> cuts;
  auto push_cut = [&](const GEval& ev, const EdgeVector& at) {
    Cut c;
    c.slope = ev.subgrad;
    c.offset = ev.value -
               std::inner_product(ev.subgrad.begin(), ev.subgrad.end(),
                                  at.begin(), 0.0);
    cuts.push_back(std::move(c));
    if (cuts.size() > 48) cuts.pop_front();
  };
  push_cut(cur, p);

  EdgeVector avg = p;
  int avg_count = 1;
  bool converged = false;
  const int cert_every = 25;

  for (int t = 1; t <= cfg.inner_max_iters; ++t) {
    const double gap = (f_best - lb) / lb;
    if (gap <= cfg.inner_tol) {
      converged = true;
      break;
    }

    double step;
    const double norm2 = std::inner_product(
        cur.subgrad.begin(), cur.subgrad.end(), cur.subgrad.begin(), 0.0);
    if (norm2 <= 0) {  // g flat here; only possible in degenerate cases
      converged = f_best <= lb * (1 + cfg.inner_tol);
      break;
    }
    if (lb > lb_trivial) {
      step = (cur.value - lb) / norm2;  // Polyak toward the certified bound
    } else {
      step = std::sqrt(2.0) / (std::sqrt(norm2) * std::sqrt((double)t));
    }

    EdgeVector next(m);
    for (int e = 0; e < m; ++e) next[e] = p[e] - step * cur.subgrad[e];
    p = project_polytope(g, std::move(next), a, loose, loose_rounds);
    cur = eval_g(g, p, params);
    if (cur.value < f_best) {
      f_best = cur.value;
      p_best = p;
    }
    push_cut(cur, p);

    for (int e = 0; e < m; ++e) avg[e] += p[e];
    ++avg_count;
    if (t % 50 == 0) {
      EdgeVector pa = avg;
      for (double& x : pa) x /= avg_count;
      pa = project_polytope(g, std::move(pa), a, loose, loose_rounds);
      const GEval ea = eval_g(g, pa, params);
      if (ea.value < f_best) {
        f_best = ea.value;
        p_best = pa;
      }
    }

    if (t % cert_every == 0) {
      BundleOut bo = solve_bundle(g, a, cuts);
      if (bo.lb > lb) lb = std::min(bo.lb, f_best);
      EdgeVector q = project_polytope(g, std::move(bo.argmin), a, loose,
                                      loose_rounds);
      const GEval eq = eval_g(g, q, params);
      if (eq.value < f_best) {
        f_best = eq.value;
        p_best = q;
      }
      push_cut(eq, q);
    }
  }

  // strict polish so the reported point meets every constraint within tau
  p_best = project_polytope(g, std::move(p_best), a, tau, 20000);
  const double f_final = eval_g(g, p_best, params).value;
  converged = (f_final - lb) / lb <= cfg.inner_tol * (1 + 1e-9) || converged;

  GridPointResult out;
  out.a = a;
  out.b = f_final;
  out.objective = std::pow(a, 1.0 / (1.0 + params.beta)) + f_final;
  out.p = std::move(p_best);
  out.converged = converged;
  return out;
}

}  // namespace netweight
