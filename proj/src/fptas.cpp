#include "netweight/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>

#include "netweight/lp.hpp"
#include "netweight/serialize.hpp"

namespace netweight {

bool FptasResult::all_converged() const {
  for (const auto& r : trace)
    if (!r.converged) return false;
  return true;
}

std::pair<double, EdgeVector> solve_amin(const DataGraph& g,
                                         const FptasConfig& cfg) {
  (void)cfg;
  if (g.m() == 0) throw EmptyGraph();
  const int m = g.m();
  LpProblem lp;
  lp.nvars = m + 1;  // p, a
  lp.c.assign(m + 1, 0.0);
  lp.c[m] = 1.0;
  {
    LpProblem::Row sum;
    for (int e = 0; e < m; ++e) sum.coef.emplace_back(e, 1.0);
    sum.rhs = 1.0;
    lp.eq.push_back(std::move(sum));
  }
  for (int i = 0; i < g.n; ++i) {
    if (g.degree(i) == 0) continue;
    LpProblem::Row cap;
    for (auto [j, e] : g.adj[i]) {
      (void)j;
      cap.coef.emplace_back(e, 1.0);
    }
    cap.coef.emplace_back(m, -1.0);
    cap.rhs = 0.0;
    lp.le.push_back(std::move(cap));
  }
  LpSolution sol = solve_lp(lp);
  EdgeVector p(sol.x.begin(), sol.x.begin() + m);
  return {sol.value, clamp_nonnegative(std::move(p), 1e-7)};
}

int grid_size_formula(int n, double a_min, double epsilon, double beta) {
  if (a_min >= 1.0) return 1;
  const double x = n * (1.0 - a_min) / (epsilon * (1.0 + beta));
  return 1 + static_cast<int>(std::floor(x + 1e-9));
}

FptasResult run_fptas(const DataGraph& g, const BoundParams& params,
                      const FptasConfig& cfg) {
  if (g.m() == 0) throw EmptyGraph();
  FptasResult res;
  auto [a_min, witness] = solve_amin(g, cfg);
  (void)witness;
  res.a_min = a_min;
  res.grid_step = cfg.epsilon * (1.0 + params.beta) / g.n;
  res.grid_size = grid_size_formula(g.n, a_min, cfg.epsilon, params.beta);
  res.trace.resize(res.grid_size);

  auto grid_a = [&](int i) {
    if (i == 0) return std::min(a_min * (1.0 + cfg.feasibility_tol), 1.0);
    return std::min(a_min + i * res.grid_step, 1.0);
  };

  const int K = res.grid_size;
  // exceptions must not escape a parallel region; stash and rethrow
  std::exception_ptr failure = nullptr;
  std::mutex failure_mu;
  auto solve_point = [&](int i) {
    try {
      res.trace[i] = solve_inner(g, grid_a(i), params, cfg, a_min);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  if (cfg.threads == 1) {
    for (int i = 0; i < K; ++i) solve_point(i);
  } else if (cfg.threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(cfg.threads)
    for (int i = 0; i < K; ++i) solve_point(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < K; ++i) solve_point(i);
  }
  if (failure) std::rethrow_exception(failure);

  int best = 0;
  for (int i = 1; i < K; ++i)
    if (res.trace[i].objective < res.trace[best].objective) best = i;
  res.best_index = best;
  return res;
}

namespace {

struct JointCut {
  double offset;
  EdgeVector slope;
};

double joint_bundle_lb(int m, const std::deque<JointCut>& cuts,
                       EdgeVector* argmin) {
  LpProblem lp;
  lp.nvars = m + 1;
  lp.c.assign(m + 1, 0.0);
  lp.c[m] = 1.0;
  {
    LpProblem::Row sum;
    for (int e = 0; e < m; ++e) sum.coef.emplace_back(e, 1.0);
    sum.rhs = 1.0;
    lp.eq.push_back(std::move(sum));
  }
  for (const JointCut& c : cuts) {
    LpProblem::Row row;
    for (int e = 0; e < m; ++e)
      if (c.slope[e] != 0.0) row.coef.emplace_back(e, c.slope[e]);
    row.coef.emplace_back(m, -1.0);
    row.rhs = -c.offset;
    lp.le.push_back(std::move(row));
  }
  LpSolution sol = solve_lp(lp);
  argmin->assign(sol.x.begin(), sol.x.begin() + m);
  return sol.value;
}

}  // namespace

GridPointResult solve_joint_beta0(const DataGraph& g, const BoundParams& params,
                                  const FptasConfig& cfg) {
  if (g.m() == 0) throw EmptyGraph();
  const int m = g.m();
  const double L = params.log_inv_delta();

  auto eval = [&](const EdgeVector& p, EdgeVector* sg) {
    const WeightNorms s = compute_norms(g, p);
    const double val = s.max_vertex_sum + concentration_term(s, params);
    if (sg) {
      sg->assign(m, 0.0);
      // argmax vertex sum, smallest index on ties
      int iv = -1;
      double vbest = -1;
      for (int i = 0; i < g.n; ++i) {
        double vs = 0;
        for (auto [j, e] : g.adj[i]) {
          (void)j;
          vs += p[e];
        }
        if (vs > vbest + 1e-15) {
          vbest = vs;
          iv = i;
        }
      }
      if (iv >= 0)
        for (auto [j, e] : g.adj[iv]) {
          (void)j;
          (*sg)[e] += 1.0;
        }
      const double t2 = s.lmax * std::sqrt(L);
      const double t3 = s.linf * L;
      if (s.l2 >= t2 && s.l2 >= t3) {
        if (s.l2 > 0)
          for (int e = 0; e < m; ++e) (*sg)[e] += p[e] / s.l2;
      } else if (t2 >= t3) {
        int im = -1;
        double mbest = -1;
        for (int i = 0; i < g.n; ++i) {
          double vs = 0;
          for (auto [j, e] : g.adj[i]) {
            (void)j;
            vs += p[e] * p[e];
          }
          if (vs > mbest + 1e-18) {
            mbest = vs;
            im = i;
          }
        }
        const double denom = std::sqrt(mbest);
        if (im >= 0 && denom > 0)
          for (auto [j, e] : g.adj[im]) {
            (void)j;
            (*sg)[e] += std::sqrt(L) * p[e] / denom;
          }
      } else {
        int eb = 0;
        for (int e = 1; e < m; ++e)
          if (p[e] > p[eb]) eb = e;
        (*sg)[eb] += L;
      }
    }
    return val;
  };

  const double lb_trivial = 2.0 / g.n + std::max(1.0 / std::sqrt((double)m), L / m);
  EdgeVector p(m, 1.0 / m);
  EdgeVector sg;
  double f = eval(p, &sg);
  double f_best = f;
  EdgeVector p_best = p;
  double lb = lb_trivial;

  std::deque<JointCut> cuts;
  auto push_cut = [&](double val, const EdgeVector& grad,
                      const EdgeVector& at) {
    JointCut c;
    c.slope = grad;
    c.offset = val - std::inner_product(grad.begin(), grad.end(), at.begin(),
                                        0.0);
    cuts.push_back(std::move(c));
    if (cuts.size() > 48) cuts.pop_front();
  };
  push_cut(f, sg, p);

  bool converged = false;
  for (int t = 1; t <= cfg.inner_max_iters; ++t) {
    if ((f_best - lb) / lb <= cfg.inner_tol) {
      converged = true;
      break;
    }
    const double norm2 =
        std::inner_product(sg.begin(), sg.end(), sg.begin(), 0.0);
    if (norm2 <= 0) break;
    double step;
    if (lb > lb_trivial)
      step = (f - lb) / norm2;
    else
      step = std::sqrt(2.0) / (std::sqrt(norm2) * std::sqrt((double)t));
    for (int e = 0; e < m; ++e) p[e] -= step * sg[e];
    p = project_simplex(std::move(p));
    f = eval(p, &sg);
    if (f < f_best) {
      f_best = f;
      p_best = p;
    }
    push_cut(f, sg, p);

    if (t % 25 == 0) {
      EdgeVector q;
      const double cand = joint_bundle_lb(m, cuts, &q);
      if (cand > lb) lb = std::min(cand, f_best);
      q = project_simplex(std::move(q));
      EdgeVector qsg;
      const double fq = eval(q, &qsg);
      if (fq < f_best) {
        f_best = fq;
        p_best = q;
      }
      push_cut(fq, qsg, q);
    }
  }
  if (!converged) converged = (f_best - lb) / lb <= cfg.inner_tol;

  const WeightNorms s = compute_norms(g, p_best);
  GridPointResult out;
  out.a = s.max_vertex_sum;
  out.b = concentration_term(s, params);
  out.objective = out.a + out.b;
  out.p = std::move(p_best);
  out.converged = converged;
  return out;
}

std::string fptas_result_to_json(const FptasResult& r) {
  JsonWriter w;
  w.begin_obj();
  w.key("a_min").value(r.a_min);
  w.key("grid_step").value(r.grid_step);
  w.key("grid").begin_arr();
  for (const auto& gp : r.trace) {
    w.begin_obj();
    w.key("a").value(gp.a);
    w.key("b").value(gp.b);
    w.key("objective").value(gp.objective);
    w.key("converged").value(gp.converged);
    w.end_obj();
  }
  w.end_arr();
  const GridPointResult& b = r.best();
  w.key("best").begin_obj();
  w.key("a").value(b.a);
  w.key("b").value(b.b);
  w.key("objective").value(b.objective);
  w.key("p").begin_arr();
  for (double x : b.p) w.value(x);
  w.end_arr();
  w.end_obj();
  w.end_obj();
  return w.str();
}

}  // namespace netweight
