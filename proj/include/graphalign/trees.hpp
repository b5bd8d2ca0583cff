// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "graphalign/degree_law.hpp"
#include "graphalign/graph.hpp"
#include "graphalign/matching_kernel.hpp"
#include "graphalign/rng.hpp"

namespace graphalign {

/// Finite rooted tree stored as an arena; node 0 is the root, children
/// keep insertion order. Optional per-node weight of the edge to the
/// parent (parallel array, empty when unweighted).
class RootedTree {
 public:
  RootedTree() { nodes_.push_back({-1, {}, 0}); }

  /// Appends a child of `parent`, returns its index.
  int add_child(int parent);

  int parent(int v) const { return nodes_[v].parent; }
  const std::vector<int>& children(int v) const { return nodes_[v].children; }
  int depth_of(int v) const { return nodes_[v].depth; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }
  /// Maximum generation present.
  int depth() const { return depth_; }

  /// Node indices grouped by generation, 0..depth().
  std::vector<std::vector<int>> levels() const;

  std::vector<double>& edge_weights() { return weight_to_parent_; }
  const std::vector<double>& edge_weights() const { return weight_to_parent_; }

 private:
  struct Node {
    int parent;
    std::vector<int> children;
    int depth;
  };
  std::vector<Node> nodes_;
  std::vector<double> weight_to_parent_;
  int depth_ = 0;
};

/// Rooted tree whose non-root nodes carry the color of the edge to their
/// parent.
struct ColoredTree {
  RootedTree tree;
  std::vector<EdgeColor> color_to_parent;  // index 0 (root) unused

  int add_child(int parent, EdgeColor c) {
    const int v = tree.add_child(parent);
    color_to_parent.resize(v + 1);
    color_to_parent[v] = c;
    return v;
  }
};

/// Galton-Watson tree with Poisson(lambda) offspring, truncated at
/// generation `depth` (generation-`depth` nodes are leaves).
RootedTree sample_gw_poisson(double lambda, int depth, Rng& rng);

/// Colored Galton-Watson tree for the two-graph Poisson model: every node
/// gets independent Poisson(lambda*(1-s)) blue, Poisson(lambda*(1-s)) red
/// and Poisson(lambda*s) bicolored offspring.
ColoredTree sample_colored_gw_er(double lambda, double s, int depth, Rng& rng);

enum class LawVariant { base, hat, tilde, dot };

/// Colored Galton-Watson tree for the generalized ensemble: the root
/// draws from the `root_variant` law, children reached by a blue / red /
/// bicolored edge recurse with the tilde / dot / hat law respectively.
ColoredTree sample_colored_gw_general(const DegreeTripleLaw& q,
                                      const SizeBiasedLaws& sb,
                                      LawVariant root_variant, int depth,
                                      Rng& rng);

/// Projects a colored tree onto the pair of monochromatic trees: the
/// connected component of the root under blue+bicolored edges, and under
/// red+bicolored edges. Vertex alignment is discarded except at the root.
std::pair<RootedTree, RootedTree> project_pair(const ColoredTree& t);

/// Log-probability that the truncated Poisson Galton-Watson process of
/// depth `d` produces exactly `tree`: nodes of generation < d contribute
/// log Po(lambda; #children), depth-0 evaluation returns 0.
double log_p0(const RootedTree& tree, double lambda, int d);

/// Log-likelihood-ratio of the depth-`d` truncated pair (correlated
/// generation versus independent), evaluated bottom-up generation by
/// generation via the matching kernel.
double log_likelihood_ratio(const RootedTree& t, const RootedTree& t2,
                            double lambda, double s, int d,
                            int degree_cap = kDefaultDegreeCap);

double log_likelihood_ratio(const RootedTree& t, const RootedTree& t2,
                            double lambda, double s, int d, int degree_cap,
                            KernelWorkspace& ws);

}  // namespace graphalign
