#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netweight/errors.hpp"

namespace netweight {

inline constexpr double kFeasTol = 1e-9;  // tau_lp everywhere

// The example graph G = (V, E): vertices are objects, edges are training
// examples.  Edges are stored with u < v in input order; no self-loops or
// duplicates.  Isolated vertices are allowed.
struct DataGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  // per vertex: (neighbor, edge index)
  std::vector<std::vector<std::pair<int, int>>> adj;

  int m() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  int max_degree() const;

  // validates and builds adjacency; throws SelfLoop/DuplicateEdge/
  // MalformedLine (with line = 1 + position for programmatic construction)
  static DataGraph build(int n, std::vector<std::pair<int, int>> edges);
};

DataGraph parse_edge_list(std::istream& in);
DataGraph parse_edge_list(const std::string& text);

struct LineGraph {
  int nodes = 0;  // = m(G)
  std::vector<std::vector<int>> adj;
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

LineGraph line_graph(const DataGraph& g);

// nu*(G): value of  max sum w_e  s.t.  w >= 0, per-vertex sums <= 1
double fractional_matching_number(const DataGraph& g);

// All maximal matchings of g, each as a sorted list of edge indices.
std::vector<std::vector<int>> maximal_matchings(const DataGraph& g);

// chi*(D_G) by the covering LP over maximal matchings; exponential in m,
// guarded by max_edges.
double fractional_edge_chromatic(const DataGraph& g, int max_edges = 16);

struct GraphStats {
  int n = 0;
  int m = 0;
  int max_degree = 0;
  double nu_star = 0;
  std::optional<double> chi_star;
};

GraphStats graph_stats(const DataGraph& g, bool compute_chromatic,
                       int max_edges = 16);

std::string graph_stats_to_json(const GraphStats& s);

}  // namespace netweight
