// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "graphalign/estimators.hpp"
#include "graphalign/graph.hpp"

namespace graphalign {

struct OverlapResult {
  double value = 0.0;
  /// Set for a partial estimator with no assigned vertices; the value is
  /// then reported as 0.
  bool null_estimator = false;
};

/// Fraction of correct matches: over all vertices for full estimators,
/// over the assigned ones for partial estimators.
OverlapResult overlap(const PartialMap& est, const std::vector<int>& truth);

/// Hamming distance between the matrix representations, in [0, 2]:
/// (1 - a) + 2a(1 - partial overlap) with a the assigned fraction.
double hamming_loss(const PartialMap& est, const std::vector<int>& truth);

struct ScoreDiagnostics {
  double argmax_score = 0.0;      // mean log-score of the estimator's choice
  double aligned_score = 0.0;     // mean log-score of the true match
  double quasi_aligned_score = 0.0;  // mean over neighbors of the true match
  double random_pair_score = 0.0;    // mean over all pairs
};

/// Averages of the log-scores over the four families of vertex pairs.
/// Vertices whose true match is isolated in B are skipped in the
/// quasi-aligned average.
ScoreDiagnostics score_diagnostics(const ScoreMatrix& scores,
                                   const PartialMap& full_est,
                                   const std::vector<int>& truth,
                                   const Graph& graph_b);

struct NishimoriCheck {
  double true_overlap = 0.0;      // fraction of correct argmax choices
  double estimated_overlap = 0.0; // mean of the row maxima of P-hat
};

/// Self-consistency check of the row-normalized scores: for an exact
/// posterior the two overlaps agree in expectation.
NishimoriCheck nishimori_check(const RowProbabilities& p,
                               const PartialMap& full_est,
                               const std::vector<int>& truth);

/// Largest non-negative solution of 1 - c = exp(-x c); zero for x <= 1.
double it_upper_bound(double lambda_s);

struct KlEstimate {
  int depth = 0;
  double mean = 0.0;
  double std_error = 0.0;
  int sample_count = 0;
};

/// Monte-Carlo estimate of the divergence between correlated and
/// independent tree-pair laws at depth d: mean log-likelihood-ratio over
/// pairs drawn from the correlated law. Guards against exponential tree
/// growth before sampling.
KlEstimate estimate_kl(double lambda, double s, int depth, int samples,
                       std::uint64_t seed, int threads = 1);

/// All per-sample evaluation quantities used by the experiment harness.
struct EvalReport {
  double overlap = 0.0;           // full argmax estimator
  double partial_overlap = 0.0;   // threshold estimator, assigned only
  double assigned_fraction = 0.0; // threshold estimator
  double hamming = 0.0;           // threshold estimator loss
  ScoreDiagnostics diagnostics;
  double estimated_overlap = 0.0; // mean row maximum of P-hat
  double true_overlap = 0.0;      // same argmax overlap, from the check
};

EvalReport evaluate(const ScoreMatrix& scores, const std::vector<int>& truth,
                    const Graph& graph_b, double threshold,
                    std::uint64_t tie_seed);

}  // namespace graphalign
