#include "netweight/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netweight {

namespace {

double composition_count(long long k, int m) {
  // C(k + m - 1, m - 1), saturating
  double c = 1;
  for (int i = 1; i <= m - 1; ++i) {
    c *= static_cast<double>(k + i);
    c /= i;
    if (c > 1e18) return 1e18;
  }
  return c;
}

struct Candidate {
  double value;
  std::vector<int> comp;
};

// Evaluates the Eq. (8) objective for p = comp / K.
class Evaluator {
 public:
  Evaluator(const DataGraph& g, const BoundParams& params)
      : g_(g), beta_(params.beta), L_(params.log_inv_delta()) {}

  double operator()(const std::vector<int>& comp, long long K) const {
    const int m = g_.m();
    const double inv = 1.0 / static_cast<double>(K);
    double sq = 0, linf = 0;
    for (int e = 0; e < m; ++e) {
      const double pe = comp[e] * inv;
      sq += pe * pe;
      linf = std::max(linf, pe);
    }
    double a = 0, vmaxsq = 0;
    for (int i = 0; i < g_.n; ++i) {
      double s = 0, ssq = 0;
      for (auto [j, e] : g_.adj[i]) {
        (void)j;
        const double pe = comp[e] * inv;
        s += pe;
        ssq += pe * pe;
      }
      a = std::max(a, s);
      vmaxsq = std::max(vmaxsq, ssq);
    }
    const double b = std::max(
        {std::sqrt(sq), std::sqrt(L_) * std::sqrt(vmaxsq), L_ * linf});
    return std::pow(a, 1.0 / (1.0 + beta_)) + b;
  }

 private:
  const DataGraph& g_;
  double beta_;
  double L_;
};

class TopList {
 public:
  explicit TopList(std::size_t cap) : cap_(cap) {}

  void offer(double value, const std::vector<int>& comp) {
    if (items_.size() == cap_ && value >= items_.back().value) return;
    for (const auto& c : items_)
      if (c.comp == comp) return;
    auto pos = std::lower_bound(
        items_.begin(), items_.end(), value,
        [](const Candidate& c, double v) { return c.value < v; });
    items_.insert(pos, {value, comp});
    if (items_.size() > cap_) items_.pop_back();
  }

  const std::vector<Candidate>& items() const { return items_; }
  const Candidate& best() const { return items_.front(); }

 private:
  std::size_t cap_;
  std::vector<Candidate> items_;
};

void enumerate_all_rec(const Evaluator& ev, int m, long long K,
                       std::vector<int>& comp, int level, long long left,
                       TopList& top) {
  if (level == m - 1) {
    comp[level] = static_cast<int>(left);
    top.offer(ev(comp, K), comp);
    return;
  }
  for (long long k = 0; k <= left; ++k) {
    comp[level] = static_cast<int>(k);
    enumerate_all_rec(ev, m, K, comp, level + 1, left - k, top);
  }
}

void enumerate_all(const Evaluator& ev, int m, long long K, TopList& top) {
  std::vector<int> comp(m, 0);
  enumerate_all_rec(ev, m, K, comp, 0, K, top);
}

void enumerate_window(const Evaluator& ev, int m, long long K,
                      const std::vector<int>& center, int W, TopList& top,
                      std::vector<int>& comp, int level, long long left) {
  if (level == m - 1) {
    const long long lo = std::max(0LL, static_cast<long long>(center[level]) - W);
    const long long hi = center[level] + W;
    if (left >= lo && left <= hi) {
      comp[level] = static_cast<int>(left);
      top.offer(ev(comp, K), comp);
    }
    return;
  }
  const long long lo = std::max(0LL, static_cast<long long>(center[level]) - W);
  const long long hi = std::min(left, static_cast<long long>(center[level]) + W);
  for (long long k = lo; k <= hi; ++k) {
    comp[level] = static_cast<int>(k);
    enumerate_window(ev, m, K, center, W, top, comp, level + 1, left - k);
  }
}

}  // namespace

OracleResult brute_force_optimum(const DataGraph& g, const BoundParams& params,
                                 double resolution, long long budget) {
  if (g.m() == 0) throw EmptyGraph();
  if (g.m() > 6)
    throw TooLarge("brute_force_optimum caps at m = 6, got m = " +
                   std::to_string(g.m()));
  if (!(resolution >= 1e-4 - 1e-12 && resolution <= 1e-1 + 1e-12))
    throw BadResolution("resolution must lie in [1e-4, 1e-1]");

  const int m = g.m();
  const long long K = std::llround(1.0 / resolution);
  const Evaluator ev(g, params);

  TopList top(40);
  if (composition_count(K, m) <= static_cast<double>(budget)) {
    enumerate_all(ev, m, K, top);
  } else {
    // largest coarse K within budget (floor of 8 keeps the scaling sane even
    // under absurdly small test budgets)
    long long K0 = K;
    while (composition_count(K0, m) > static_cast<double>(budget) && K0 > 8)
      K0 /= 2;
    enumerate_all(ev, m, K0, top);
    long long Ks = K0;
    const int W = 6;
    while (Ks < K) {
      const long long Kn = std::min(2 * Ks, K);
      TopList next(40);
      std::vector<int> comp(m, 0);
      for (const auto& cand : top.items()) {
        std::vector<int> center(m);
        for (int e = 0; e < m; ++e)
          center[e] = static_cast<int>(
              std::llround(static_cast<double>(cand.comp[e]) * Kn / Ks));
        enumerate_window(ev, m, Kn, center, W, next, comp, 0, Kn);
      }
      top = std::move(next);
      Ks = Kn;
    }
  }

  const Candidate& best = top.best();
  OracleResult out;
  out.value = best.value;
  out.p.assign(m, 0.0);
  for (int e = 0; e < m; ++e)
    out.p[e] = static_cast<double>(best.comp[e]) / K;
  const double L = params.log_inv_delta();
  const double lip_b = std::max({1.0, std::sqrt(L), L});
  const double a_best = compute_norms(g, out.p).max_vertex_sum;
  const double lip_a =
      std::pow(std::max(a_best, resolution), -params.beta / (1.0 + params.beta)) /
      (1.0 + params.beta);
  out.slack = resolution * (m * lip_b + g.max_degree() * lip_a);
  return out;
}

}  // namespace netweight
