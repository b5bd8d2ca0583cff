// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphalign/degree_law.hpp"
#include "graphalign/graph.hpp"
#include "graphalign/rng.hpp"

namespace graphalign {

struct ErParams {
  int n = 0;
  double lambda = 0.0;
  double s = 0.0;

  /// n >= 1, lambda > 0, s in [0, 1], and lambda*(2-s)/n <= 1 so the
  /// per-pair category probabilities are valid.
  void validate() const;
};

/// Joint law of the weight pair carried by an edge present in both
/// graphs, with its marginal for single-graph edges. Closed enumeration
/// so that log-densities are exact.
class WeightModel {
 public:
  enum class Kind { product, gaussian_correlated, equal_weight };

  /// Finite stand-in for the log of the Dirac mass at equal weights in
  /// the equal_weight model; large enough to dominate any finite density
  /// difference arising at desk scale.
  static constexpr double kEqualWeightLogDelta = 1000.0;

  static WeightModel product() { return WeightModel(Kind::product, 0.0); }
  static WeightModel gaussian_correlated(double rho);
  static WeightModel equal_weight() {
    return WeightModel(Kind::equal_weight, 1.0);
  }
  static WeightModel from_name(const std::string& name, double rho);

  std::pair<double, double> sample_pair(Rng& rng) const;
  double sample_marginal(Rng& rng) const;
  double log_density(double w, double w2) const;
  double log_marginal_density(double w) const;

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }
  std::string name() const;

 private:
  WeightModel(Kind k, double rho) : kind_(k), rho_(rho) {}
  Kind kind_;
  double rho_;
};

enum class EnsembleKind { unknown, er, configuration, weighted };

/// Observed pair of graphs plus, when generated, the hidden relabelling
/// and per-edge weights; `ground_truth[i]` is the vertex of `graph_b`
/// matched to vertex i of `graph_a`. Weight vectors parallel the edge
/// lists.
struct GraphPairInstance {
  Graph graph_a;
  Graph graph_b;
  std::optional<std::vector<int>> ground_truth;
  std::optional<std::vector<double>> weights_a;
  std::optional<std::vector<double>> weights_b;
  EnsembleKind ensemble = EnsembleKind::unknown;

  int n() const { return graph_a.n; }
  bool weighted() const { return weights_a.has_value(); }
};

/// Correlated two-graph sampler: every unordered vertex pair is
/// independently bicolored / blue / red with probabilities lambda*s/n,
/// lambda*(1-s)/n, lambda*(1-s)/n. Returns the colored parent graph and
/// the observed pair with a uniform hidden permutation.
std::pair<ColoredGraph, GraphPairInstance> sample_correlated_er(
    const ErParams& params, std::uint64_t seed);

/// Correlated configuration-model sampler: per-vertex half-edge triples
/// drawn from `q`, three uniform pairings, rejection until the combined
/// colored graph is simple. Throws GenerationError after `max_retries`
/// failed attempts.
std::pair<ColoredGraph, GraphPairInstance> sample_configuration_correlated(
    const DegreeTripleLaw& q, int n, std::uint64_t seed, int max_retries = 1000);

/// Draws weights for the instance: correlated pairs on bicolored edges,
/// marginal draws on monochromatic ones, carried through the relabelling.
GraphPairInstance attach_weights(GraphPairInstance instance,
                                 const ColoredGraph& colored,
                                 const WeightModel& model, std::uint64_t seed);

/// Reconstructs the colored parent graph of an instance carrying its
/// ground truth: edges in both graphs (after undoing the relabelling)
/// are bicolored, first-graph-only edges blue, second-only red.
ColoredGraph colored_from_instance(const GraphPairInstance& instance);

/// Plain-text pair file:
///   header  "n m_a m_b weighted"
///   m_a lines "u v [w]" for the first graph, m_b for the second,
///   then optionally n lines "i pi(i)".
GraphPairInstance load_pair(const std::string& path);
void save_pair(const GraphPairInstance& instance, const std::string& path);

}  // namespace graphalign
