#include "netweight/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "netweight/serialize.hpp"

namespace netweight {

double BoundParams::log_inv_delta() const { return std::log(1.0 / delta); }

bool BoundParams::valid() const {
  return beta >= 0.0 && beta < 1.0 && delta > 0.0 && delta <= 1.0;
}

EdgeVector clamp_nonnegative(EdgeVector v, double tol) {
  for (double& x : v) {
    if (x < 0) {
      if (x < -tol)
        throw NegativeEntry("edge value " + format_real(x) + " below -tau");
      x = 0;
    }
  }
  return v;
}

WeightNorms compute_norms(const DataGraph& g, const EdgeVector& v) {
  if (static_cast<int>(v.size()) != g.m())
    throw LengthMismatch("edge vector length " + std::to_string(v.size()) +
                         " != m = " + std::to_string(g.m()));
  WeightNorms s;
  double sq = 0;
  for (double x : v) {
    s.l1 += x;
    sq += x * x;
    s.linf = std::max(s.linf, x);
  }
  s.l2 = std::sqrt(sq);
  for (int i = 0; i < g.n; ++i) {
    double sum = 0, sumsq = 0;
    for (auto [j, e] : g.adj[i]) {
      (void)j;
      sum += v[e];
      sumsq += v[e] * v[e];
    }
    s.max_vertex_sum = std::max(s.max_vertex_sum, sum);
    s.lmax = std::max(s.lmax, std::sqrt(sumsq));
  }
  return s;
}

bool is_fractional_matching(const DataGraph& g, const EdgeVector& w,
                            double tol) {
  if (static_cast<int>(w.size()) != g.m()) return false;
  for (double x : w)
    if (x < -tol) return false;
  const WeightNorms s = compute_norms(g, w);
  return s.max_vertex_sum <= 1.0 + tol && s.l1 > 0.0;
}

bool is_distribution(const DataGraph& g, const EdgeVector& p, double tol) {
  if (static_cast<int>(p.size()) != g.m()) return false;
  double sum = 0;
  for (double x : p) {
    if (x < -tol) return false;
    sum += x;
  }
  return std::fabs(sum - 1.0) <= std::max(tol, 1e-7);
}

double concentration_term(const WeightNorms& s, const BoundParams& params) {
  const double L = params.log_inv_delta();
  return std::max({s.l2, s.lmax * std::sqrt(L), s.linf * L});
}

double objective(const DataGraph& g, const EdgeVector& p,
                 const BoundParams& params) {
  if (!is_distribution(g, p))
    throw NotADistribution("objective needs an edge distribution");
  const WeightNorms s = compute_norms(g, p);
  return std::pow(s.max_vertex_sum, 1.0 / (1.0 + params.beta)) +
         concentration_term(s, params);
}

EdgeVector matching_from_distribution(const DataGraph& g,
                                      const EdgeVector& p) {
  if (!is_distribution(g, p))
    throw NotADistribution("matching_from_distribution needs a distribution");
  const WeightNorms s = compute_norms(g, p);
  if (s.max_vertex_sum <= 0) throw ZeroVector();
  EdgeVector w = p;
  for (double& x : w) x /= s.max_vertex_sum;
  return clamp_nonnegative(std::move(w));
}

double theorem1_bound(const DataGraph& g, const EdgeVector& w,
                      const BoundParams& params, double approx_error) {
  if (!is_fractional_matching(g, w))
    throw NotAMatching("theorem1_bound needs a fractional matching");
  const WeightNorms s = compute_norms(g, w);
  const double L = params.log_inv_delta();
  const double L_unit = std::max(L, 1.0);
  const double shrink =
      std::pow(1.0 - params.beta, 2.0 / (params.beta + 1.0));
  const double lead = L_unit / shrink / s.l1;
  const double fast = std::pow(s.l1, params.beta / (1.0 + params.beta));
  return 2.0 * approx_error + lead * (fast + concentration_term(s, params));
}

double eq11_delta_threshold(const DataGraph& g) {
  if (g.m() == 0) throw EmptyGraph();
  return std::exp(-static_cast<double>(g.m()) / g.max_degree());
}

double equal_weighting_bound_order(const DataGraph& g,
                                   const BoundParams& params) {
  if (g.m() == 0) throw EmptyGraph();
  const double thresh = eq11_delta_threshold(g);
  if (params.delta <= thresh)
    throw DeltaOutOfRange("delta = " + format_real(params.delta) +
                          " <= exp(-m/Delta) = " + format_real(thresh));
  const double dm = static_cast<double>(g.max_degree()) / g.m();
  return std::pow(dm, 1.0 / (1.0 + params.beta)) +
         1.0 / std::sqrt(static_cast<double>(g.m()));
}

double chromatic_bound_order(const DataGraph& g, int max_edges) {
  const double chi = fractional_edge_chromatic(g, max_edges);
  return std::sqrt(chi / g.m());
}

double delta_threshold(const WeightNorms& s) {
  const double r1 = s.linf > 0 ? s.l2 / s.linf : 0.0;
  const double r2 = s.lmax > 0 ? (s.l2 * s.l2) / (s.lmax * s.lmax) : 0.0;
  return std::exp(-std::min(r1, r2));
}

std::string weights_to_json(const DataGraph& g, const EdgeVector& v) {
  if (static_cast<int>(v.size()) != g.m())
    throw LengthMismatch("weights_to_json: length mismatch");
  JsonWriter w;
  w.begin_obj();
  w.key("edges").begin_arr();
  for (auto [a, b] : g.edges)
    w.begin_arr().value(a).value(b).end_arr();
  w.end_arr();
  w.key("values").begin_arr();
  for (double x : v) w.value(x);
  w.end_arr();
  w.end_obj();
  return w.str();
}

std::string weights_to_csv(const DataGraph& g, const EdgeVector& v) {
  if (static_cast<int>(v.size()) != g.m())
    throw LengthMismatch("weights_to_csv: length mismatch");
  std::string out = "u,v,value\n";
  for (int e = 0; e < g.m(); ++e) {
    out += std::to_string(g.edges[e].first);
    out += ',';
    out += std::to_string(g.edges[e].second);
    out += ',';
    out += format_real(v[e]);
    out += '\n';
  }
  return out;
}

namespace {

EdgeVector assemble(const DataGraph& g,
                    const std::vector<std::pair<std::pair<int, int>, double>>&
                        entries) {
  std::map<std::pair<int, int>, int> index;
  for (int e = 0; e < g.m(); ++e) index[g.edges[e]] = e;
  EdgeVector v(g.m(), 0.0);
  std::vector<bool> seen(g.m(), false);
  int pos = 0;
  for (auto [uv, val] : entries) {
    ++pos;
    auto [u, w] = uv;
    if (u > w) std::swap(u, w);
    auto it = index.find({u, w});
    if (it == index.end())
      throw MalformedLine(pos, "edge not in graph");
    if (seen[it->second])
      throw DuplicateEdge(pos);
    seen[it->second] = true;
    v[it->second] = val;
  }
  for (int e = 0; e < g.m(); ++e)
    if (!seen[e])
      throw LengthMismatch("weights file misses edge " +
                           std::to_string(g.edges[e].first) + "-" +
                           std::to_string(g.edges[e].second));
  return clamp_nonnegative(std::move(v));
}

}  // namespace

EdgeVector weights_from_json(const DataGraph& g, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedLine(1, std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("edges") || !j.contains("values") ||
      !j["edges"].is_array() || !j["values"].is_array() ||
      j["edges"].size() != j["values"].size())
    throw MalformedLine(1, "expected {\"edges\": [[u,v],...], \"values\": [...]}");
  std::vector<std::pair<std::pair<int, int>, double>> entries;
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const auto& e = j["edges"][i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !j["values"][i].is_number())
      throw MalformedLine(static_cast<int>(i) + 1, "bad edge entry");
    entries.push_back({{e[0].get<int>(), e[1].get<int>()},
                       j["values"][i].get<double>()});
  }
  return assemble(g, entries);
}

EdgeVector weights_from_csv(const DataGraph& g, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::pair<int, int>, double>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == "u,v,value") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long u, v;
    double val;
    std::string extra;
    if (!(ls >> u >> v >> val) || (ls >> extra))
      throw MalformedLine(lineno);
    entries.push_back({{static_cast<int>(u), static_cast<int>(v)}, val});
  }
  return assemble(g, entries);
}

}  // namespace netweight
