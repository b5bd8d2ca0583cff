// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphalign/degree_law.hpp"
#include "graphalign/ensembles.hpp"
#include "graphalign/graph.hpp"
#include "graphalign/matching_kernel.hpp"

namespace graphalign {

struct AlignOptions {
  int degree_cap = kDefaultDegreeCap;
  int threads = 1;
};

/// n x n log-scores produced by a message-passing run at a given depth.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(int n, int depth)
      : n_(n), depth_(depth), v_(static_cast<std::size_t>(n) * n, 0.0) {}

  double at(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * n_ + j];
  }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  int n() const { return n_; }
  int depth() const { return depth_; }
  const std::vector<double>& data() const { return v_; }

 private:
  int n_ = 0;
  int depth_ = 0;
  std::vector<double> v_;
};

/// Log-domain pair messages indexed by (directed edge of A) x (directed
/// edge of B), double-buffered between synchronous rounds. Directed edge
/// ids pair up as twins: undirected edge k yields ids 2k and 2k+1.
struct MessageState {
  int ma2 = 0;  // directed edge count of A
  int mb2 = 0;  // directed edge count of B
  int round = 0;
  std::vector<double> cur, prev;

  MessageState(const Graph& a, const Graph& b, double init = 0.0)
      : ma2(2 * a.num_edges()),
        mb2(2 * b.num_edges()),
        cur(static_cast<std::size_t>(ma2) * mb2, init),
        prev(static_cast<std::size_t>(ma2) * mb2, init) {}

  std::size_t pair_slot_count() const { return cur.size(); }

  void swap_buffers() {
    std::swap(cur, prev);
    ++round;
  }
};

using DepthCallback = std::function<void(int depth, const ScoreMatrix&)>;

/// Message passing for the two-graph Poisson model: messages start at
/// log 1, run depth-1 synchronous rounds, scores from the full neighbor
/// sets. `depths` selects the depths at which the callback fires (empty
/// means every depth 1..depth).
void run_mp_er_scan(const GraphPairInstance& instance, double lambda, double s,
                    int depth, const AlignOptions& opts,
                    const std::vector<int>& depths, const DepthCallback& cb);

ScoreMatrix run_mp_er(const GraphPairInstance& instance, double lambda,
                      double s, int depth, const AlignOptions& opts = {});

/// Generalized ensemble: pair messages plus per-edge scalar messages for
/// both size-biased marginals; scores are the joint combiner divided by
/// the two marginal combiners.
void run_mp_general_scan(const GraphPairInstance& instance,
                         const DegreeTripleLaw& q, int depth,
                         const AlignOptions& opts,
                         const std::vector<int>& depths,
                         const DepthCallback& cb);

ScoreMatrix run_mp_general(const GraphPairInstance& instance,
                           const DegreeTripleLaw& q, int depth,
                           const AlignOptions& opts = {});

/// Base ensemble for a weighted run: the Poisson model (converted
/// internally to its product law) or an explicit degree law.
struct WeightedBase {
  static WeightedBase er(double lambda, double s);
  static WeightedBase general(DegreeTripleLaw law);

  bool is_er = true;
  double lambda = 0.0;
  double s = 0.0;
  std::optional<DegreeTripleLaw> law;
};

/// Weighted variant: pair messages carry the joint weight log-density of
/// the edge pair they sit on, scalar messages the marginal log-density.
void run_mp_weighted_scan(const GraphPairInstance& instance,
                          const WeightedBase& base, const WeightModel& model,
                          int depth, const AlignOptions& opts,
                          const std::vector<int>& depths,
                          const DepthCallback& cb);

ScoreMatrix run_mp_weighted(const GraphPairInstance& instance,
                            const WeightedBase& base, const WeightModel& model,
                            int depth, const AlignOptions& opts = {});

/// Initial pair message of the weighted algorithm for one edge pair.
double weighted_initial_pair_message(const WeightModel& model, double w,
                                     double w2);

/// Plain-text score file: header "n depth", then n rows of n log-scores
/// ("-inf" for impossible pairings).
void save_scores(const ScoreMatrix& scores, const std::string& path);
ScoreMatrix load_scores(const std::string& path);

}  // namespace graphalign
