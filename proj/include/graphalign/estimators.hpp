// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "graphalign/aligner.hpp"

namespace graphalign {

/// Vertex correspondence estimate; -1 marks an unassigned vertex.
struct PartialMap {
  enum class Mode { full_argmax, matrix_half, threshold };

  std::vector<int> assignment;
  Mode mode = Mode::full_argmax;
  double threshold = 0.0;

  int n() const { return static_cast<int>(assignment.size()); }
  int num_assigned() const;
  bool is_full() const { return num_assigned() == n(); }
};

/// Row-stochastic matrix obtained by exponentiating and normalizing each
/// score row.
class RowProbabilities {
 public:
  RowProbabilities() = default;
  RowProbabilities(int n) : n_(n), v_(static_cast<std::size_t>(n) * n, 0.0) {}

  double at(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * n_ + j];
  }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  int n() const { return n_; }

 private:
  int n_ = 0;
  std::vector<double> v_;
};

/// Softmax per row of the log-score matrix. Throws DataError on a row
/// with no finite entry (no uniform fallback is applied).
RowProbabilities row_normalize(const ScoreMatrix& scores);

/// Row argmax with ties broken uniformly at random under `seed`; assigns
/// every vertex.
PartialMap argmax_estimator(const ScoreMatrix& scores, std::uint64_t seed);

/// Assigns i to the row argmax when the maximal probability strictly
/// exceeds T and the argmax is unique; otherwise leaves i unassigned.
PartialMap threshold_estimator(const RowProbabilities& p, double threshold);

/// The half-threshold rule of the matrix (Hamming) estimator.
PartialMap matrix_half_estimator(const RowProbabilities& p);

void save_map(const PartialMap& map, const std::string& path);
PartialMap load_map(const std::string& path);

}  // namespace graphalign
