// SPDX-License-Identifier: Apache-2.0
#include "graphalign/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "graphalign/errors.hpp"

namespace graphalign {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
  Graph g(n);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edge_list) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw DataError("edge endpoint out of range: (" + std::to_string(u) +
                      ", " + std::to_string(v) + ")");
    if (u == v)
      throw DataError("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw DataError("duplicate edge (" + std::to_string(u) + ", " +
                      std::to_string(v) + ")");
    g.add_edge(u, v);
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nb = adj[u];
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

void Graph::add_edge(int u, int v) {
  if (u > v) std::swap(u, v);
  edges.emplace_back(u, v);
  adj[u].push_back(v);
  adj[v].push_back(u);
}

void ColoredGraph::add_edge(int u, int v, EdgeColor c) {
  if (u > v) std::swap(u, v);
  edges.push_back({u, v, c});
  adj[u].emplace_back(v, c);
  adj[v].emplace_back(u, c);
}

Graph ColoredGraph::project(bool first_side) const {
  Graph g(n);
  for (const Edge& e : edges) {
    const bool keep = e.color == EdgeColor::bicolored ||
                      (first_side ? e.color == EdgeColor::blue
                                  : e.color == EdgeColor::red);
    if (keep) g.add_edge(e.u, e.v);
  }
  return g;
}

int ColoredGraph::count(EdgeColor c) const {
  int k = 0;
  for (const Edge& e : edges)
    if (e.color == c) ++k;
  return k;
}

}  // namespace graphalign
