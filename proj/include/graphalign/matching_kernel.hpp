// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <span>
#include <vector>

#include "graphalign/degree_law.hpp"

namespace graphalign {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr int kDefaultDegreeCap = 25;

/// Dense row-major matrix of log-values; entries are finite or -inf.
class LogMatrix {
 public:
  LogMatrix() = default;
  LogMatrix(int rows, int cols, double fill = 0.0) { assign(rows, cols, fill); }

  void assign(int rows, int cols, double fill = 0.0) {
    rows_ = rows;
    cols_ = cols;
    v_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  double& at(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return v_[static_cast<std::size_t>(r) * cols_ + c];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& data() const { return v_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

/// Scratch buffers reused across kernel calls; one instance per worker
/// thread, never shared.
struct KernelWorkspace {
  std::vector<double> dp;
  std::vector<double> comp;
  std::vector<double> row_scaled;
  std::vector<double> sums;
  std::vector<double> bucket;
  std::vector<double> esp;
  LogMatrix gather;
  LogMatrix sub;
  std::vector<double> vec_u;
  std::vector<double> vec_v;
};

/// log(n!) with cached table.
double log_factorial(int n);
/// log C(n, k); requires 0 <= k <= n.
double log_binomial(int n, int k);

/// Numerically stable log(sum of exp) over a span; -inf entries are
/// skipped, empty or all--inf input gives -inf.
double log_sum_exp(std::span<const double> xs);

/// Per-size partial-matching sums of an l x l' log-matrix with optional
/// log-factors for unmatched rows (`row_off`) and columns (`col_off`):
///
///   out[k] = log sum over size-k matchings mu of
///            prod_{(r,c) in mu} e^{m[r,c]}
///            * prod_{r unmatched} e^{row_off[r]}
///            * prod_{c unmatched} e^{col_off[c]}
///
/// Null offsets mean factor 1. Size-k entries additionally get k*log_weight.
/// out has min(l, l')+1 entries, k = 0 first. Throws CapacityError when
/// min(l, l') exceeds `degree_cap`.
void log_partial_matching_sums(const LogMatrix& m, double log_weight,
                               const double* row_off, const double* col_off,
                               int degree_cap, KernelWorkspace& ws,
                               std::vector<double>& out);

/// Likelihood-ratio merge for a pair of child sets of sizes l, l2 under
/// the two-graph Poisson model: combines the child-pair log-ratio matrix
/// into the parent's log-ratio. Handles the s = 1 limit (perfect
/// correlation, permanent form) and s = 0 (identically zero) exactly.
double log_lr_combine_er(int l, int l2, const LogMatrix& m, double lambda,
                         double s, int degree_cap, KernelWorkspace& ws);

/// Joint combiner for the generalized ensemble: matched child pairs read
/// the matrix, unmatched children on each side read the log-vectors u and
/// u2; each size-k term is weighted by law(l-k, l2-k, k) over the count of
/// injections. u/u2 may be null when l/l2 is 0.
double log_joint_combine(const DegreeTripleLaw& law, int l, int l2,
                         const LogMatrix& m, const double* u, const double* u2,
                         int degree_cap, KernelWorkspace& ws);

/// Marginal combiner: subsets of size k of the l children take factors
/// from u, the rest from v, weighted by the pair marginal law(l-k, k).
double log_marginal_combine(const DegreeTripleLaw& law, int l, const double* u,
                            const double* v, KernelWorkspace& ws);

}  // namespace graphalign
