#include "netweight/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "netweight/lp.hpp"
#include "netweight/serialize.hpp"

namespace netweight {

int DataGraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
  return d;
}

DataGraph DataGraph::build(int n, std::vector<std::pair<int, int>> edges) {
  DataGraph g;
  g.n = n;
  g.edges.reserve(edges.size());
  std::set<std::pair<int, int>> seen;
  int pos = 0;
  for (auto [u, v] : edges) {
    ++pos;
    if (u == v) throw SelfLoop(pos);
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw MalformedLine(pos, "vertex index out of range");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw DuplicateEdge(pos);
    g.edges.emplace_back(u, v);
  }
  g.adj.assign(n, {});
  for (int e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edges[e];
    g.adj[u].emplace_back(v, e);
    g.adj[v].emplace_back(u, e);
  }
  return g;
}

DataGraph parse_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_line;
  std::string line;
  int lineno = 0;
  long declared_n = -1;
  bool saw_content = false;
  std::set<std::pair<int, int>> seen;
  int max_index = -1;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '#') continue;

    std::istringstream ls(line);
    std::string tok0;
    ls >> tok0;
    if (!saw_content && tok0 == "n") {
      long cnt;
      std::string extra;
      if (!(ls >> cnt) || cnt <= 0 || (ls >> extra))
        throw MalformedLine(lineno, "bad header line");
      declared_n = cnt;
      saw_content = true;
      continue;
    }
    saw_content = true;

    long u, v;
    std::string extra;
    std::istringstream es(line);
    if (!(es >> u >> v) || (es >> extra))
      throw MalformedLine(lineno);
    if (u < 0 || v < 0) throw MalformedLine(lineno, "negative vertex index");
    if (u == v) throw SelfLoop(lineno);
    int a = static_cast<int>(u), b = static_cast<int>(v);
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw DuplicateEdge(lineno);
    if (declared_n >= 0 && b >= declared_n)
      throw MalformedLine(lineno, "vertex index exceeds declared n");
    max_index = std::max(max_index, b);
    edges.emplace_back(a, b);
    edge_line.push_back(lineno);
  }

  const int n = declared_n >= 0 ? static_cast<int>(declared_n) : max_index + 1;
  return DataGraph::build(std::max(n, 0), std::move(edges));
}

DataGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

LineGraph line_graph(const DataGraph& g) {
  LineGraph lg;
  lg.nodes = g.m();
  lg.adj.assign(lg.nodes, {});
  for (int e = 0; e < g.m(); ++e) {
    for (int f = e + 1; f < g.m(); ++f) {
      auto [a, b] = g.edges[e];
      auto [c, d] = g.edges[f];
      if (a == c || a == d || b == c || b == d) {
        lg.adj[e].push_back(f);
        lg.adj[f].push_back(e);
      }
    }
  }
  return lg;
}

double fractional_matching_number(const DataGraph& g) {
  if (g.m() == 0) throw EmptyGraph();
  LpProblem lp;
  lp.nvars = g.m();
  lp.c.assign(g.m(), -1.0);  // maximize sum w
  for (int v = 0; v < g.n; ++v) {
    if (g.degree(v) == 0) continue;
    LpProblem::Row row;
    for (auto [u, e] : g.adj[v]) {
      (void)u;
      row.coef.emplace_back(e, 1.0);
    }
    row.rhs = 1.0;
    lp.le.push_back(std::move(row));
  }
  return -solve_lp(lp).value;
}

namespace {

void extend_matching(const DataGraph& g, std::vector<int>& current,
                     std::vector<bool>& used_vertex, int next_edge,
                     std::vector<std::vector<int>>& out) {
  bool extended = false;
  for (int e = next_edge; e < g.m(); ++e) {
    auto [u, v] = g.edges[e];
    if (used_vertex[u] || used_vertex[v]) continue;
    extended = true;
    used_vertex[u] = used_vertex[v] = true;
    current.push_back(e);
    extend_matching(g, current, used_vertex, e + 1, out);
    current.pop_back();
    used_vertex[u] = used_vertex[v] = false;
  }
  if (!extended) {
    // maximal iff no edge of the whole graph fits
    for (int e = 0; e < next_edge; ++e) {
      auto [u, v] = g.edges[e];
      if (!used_vertex[u] && !used_vertex[v]) return;
    }
    if (!current.empty()) out.push_back(current);
  }
}

}  // namespace

std::vector<std::vector<int>> maximal_matchings(const DataGraph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(g.n, false);
  extend_matching(g, cur, used, 0, out);
  return out;
}

double fractional_edge_chromatic(const DataGraph& g, int max_edges) {
  if (g.m() == 0) throw EmptyGraph();
  if (g.m() > max_edges)
    throw TooLarge("fractional_edge_chromatic: m = " + std::to_string(g.m()) +
                   " exceeds cap " + std::to_string(max_edges));
  const auto matchings = maximal_matchings(g);
  LpProblem lp;
  lp.nvars = static_cast<int>(matchings.size());
  lp.c.assign(lp.nvars, 1.0);  // minimize total cover weight
  std::vector<LpProblem::Row> cover(g.m());
  for (int j = 0; j < lp.nvars; ++j)
    for (int e : matchings[j]) cover[e].coef.emplace_back(j, -1.0);
  for (int e = 0; e < g.m(); ++e) {
    cover[e].rhs = -1.0;  // sum over matchings containing e >= 1
    lp.le.push_back(std::move(cover[e]));
  }
  return solve_lp(lp).value;
}

GraphStats graph_stats(const DataGraph& g, bool compute_chromatic,
                       int max_edges) {
  GraphStats s;
  s.n = g.n;
  s.m = g.m();
  s.max_degree = g.max_degree();
  s.nu_star = g.m() > 0 ? fractional_matching_number(g) : 0.0;
  if (compute_chromatic && g.m() > 0)
    s.chi_star = fractional_edge_chromatic(g, max_edges);
  return s;
}

std::string graph_stats_to_json(const GraphStats& s) {
  JsonWriter w;
  w.begin_obj();
  w.key("n").value(s.n);
  w.key("m").value(s.m);
  w.key("max_degree").value(s.max_degree);
  w.key("nu_star").value(s.nu_star);
  if (s.chi_star) w.key("chi_star").value(*s.chi_star);
  w.end_obj();
  return w.str();
}

}  // namespace netweight
