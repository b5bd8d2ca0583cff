// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

namespace graphalign {

/// Simple undirected graph as edge list plus adjacency lists.
/// Adjacency order follows edge insertion order; algorithms rely on this
/// being stable, not on any particular sorting.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, unique
  std::vector<std::vector<int>> adj;

  Graph() = default;
  explicit Graph(int n_vertices) : n(n_vertices), adj(n_vertices) {}

  /// Validates vertex range, rejects self-loops and duplicate edges.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);
};

enum class EdgeColor : unsigned char { blue = 0, red = 1, bicolored = 2 };

/// Three-colored simple graph encoding an aligned pair: blue edges belong
/// to the first graph only, red to the second only, bicolored to both.
struct ColoredGraph {
  struct Edge {
    int u, v;
    EdgeColor color;
  };

  int n = 0;
  std::vector<Edge> edges;
  // adjacency with colors, indexed per vertex
  std::vector<std::vector<std::pair<int, EdgeColor>>> adj;

  ColoredGraph() = default;
  explicit ColoredGraph(int n_vertices) : n(n_vertices), adj(n_vertices) {}

  void add_edge(int u, int v, EdgeColor c);

  /// Projection keeping blue+bicolored (first side) or red+bicolored
  /// (second side) edges.
  Graph project(bool first_side) const;

  int count(EdgeColor c) const;
};

}  // namespace graphalign
