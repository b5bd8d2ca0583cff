// SPDX-License-Identifier: Apache-2.0
#include "graphalign/matching_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "graphalign/errors.hpp"

namespace graphalign {

namespace {

// Spread of finite log-values beyond which the scaled linear-domain DP
// could flush relevant terms to zero; switch to the exact log-domain DP.
constexpr double kLinearSpreadLimit = 300.0;

std::vector<double> build_log_factorials(int upto) {
  std::vector<double> t(upto + 1, 0.0);
  for (int k = 1; k <= upto; ++k) t[k] = t[k - 1] + std::log(double(k));
  return t;
}

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = build_log_factorials(4096);
  return table;
}

struct Spread {
  double max = kNegInf;
  double min = std::numeric_limits<double>::infinity();
  void add(double x) {
    if (x == kNegInf) return;
    max = std::max(max, x);
    min = std::min(min, x);
  }
  bool empty() const { return max == kNegInf; }
  double width() const { return empty() ? 0.0 : max - min; }
};

// Exact log-domain accumulation helper for short term lists.
class LogAccumulator {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (max_ == kNegInf) {
      max_ = x;
      sum_ = 1.0;
    } else if (x > max_) {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    } else {
      sum_ += std::exp(x - max_);
    }
  }
  double value() const {
    return max_ == kNegInf ? kNegInf : max_ + std::log(sum_);
  }
  void reset() {
    max_ = kNegInf;
    sum_ = 0.0;
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// Fast path: subset DP in the linear domain after shifting each input
// array by its own finite maximum; per-size results are rescaled at the
// end. Valid only when the spreads are moderate (no underflow of
// dominant terms).
void matching_sums_linear(const LogMatrix& m, bool transposed,
                          const double* row_off, const double* col_off,
                          double m_shift, double u_shift, double c_shift,
                          KernelWorkspace& ws, std::vector<double>& out) {
  const int rows = transposed ? m.cols() : m.rows();
  const int cols = transposed ? m.rows() : m.cols();
  const std::size_t n_subsets = std::size_t(1) << cols;

  ws.dp.assign(n_subsets, 0.0);
  ws.dp[0] = 1.0;
  ws.row_scaled.resize(cols);

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double lw = transposed ? m.at(c, r) : m.at(r, c);
      ws.row_scaled[c] = lw == kNegInf ? 0.0 : std::exp(lw - m_shift);
    }
    const double ur = row_off == nullptr ? 1.0
                      : row_off[r] == kNegInf
                          ? 0.0
                          : std::exp(row_off[r] - u_shift);
    for (std::size_t s = n_subsets - 1; s + 1 > 0; --s) {
      double acc = ws.dp[s] * ur;
      std::size_t rem = s;
      while (rem) {
        const int c = std::countr_zero(rem);
        rem &= rem - 1;
        acc += ws.dp[s ^ (std::size_t(1) << c)] * ws.row_scaled[c];
      }
      ws.dp[s] = acc;
      if (s == 0) break;
    }
  }

  // products over unmatched columns, filled from the full set downwards
  ws.comp.assign(n_subsets, 1.0);
  if (col_off != nullptr) {
    for (std::size_t s = n_subsets - 1; s + 1 > 0; --s) {
      if (s != n_subsets - 1) {
        const std::size_t missing = (n_subsets - 1) ^ s;
        const int c = std::countr_zero(missing);
        const double cv = col_off[c] == kNegInf
                              ? 0.0
                              : std::exp(col_off[c] - c_shift);
        ws.comp[s] = ws.comp[s | (std::size_t(1) << c)] * cv;
      }
      if (s == 0) break;
    }
  }

  ws.bucket.assign(cols + 1, 0.0);
  for (std::size_t s = 0; s < n_subsets; ++s)
    ws.bucket[std::popcount(s)] += ws.dp[s] * ws.comp[s];

  out.resize(cols + 1);
  for (int k = 0; k <= cols; ++k) {
    const double v = ws.bucket[k];
    out[k] = v <= 0.0 ? kNegInf
                      : std::log(v) + k * m_shift + (rows - k) * u_shift +
                            (cols - k) * c_shift;
  }
}

// Exact path: the same DP carried out entirely in the log domain.
void matching_sums_logdomain(const LogMatrix& m, bool transposed,
                             const double* row_off, const double* col_off,
                             KernelWorkspace& ws, std::vector<double>& out) {
  const int rows = transposed ? m.cols() : m.rows();
  const int cols = transposed ? m.rows() : m.cols();
  const std::size_t n_subsets = std::size_t(1) << cols;

  ws.dp.assign(n_subsets, kNegInf);
  ws.dp[0] = 0.0;

  for (int r = 0; r < rows; ++r) {
    const double ur = row_off == nullptr ? 0.0 : row_off[r];
    for (std::size_t s = n_subsets - 1; s + 1 > 0; --s) {
      LogAccumulator acc;
      if (ur != kNegInf && ws.dp[s] != kNegInf) acc.add(ws.dp[s] + ur);
      std::size_t rem = s;
      while (rem) {
        const int c = std::countr_zero(rem);
        rem &= rem - 1;
        const double lw = transposed ? m.at(c, r) : m.at(r, c);
        const double prior = ws.dp[s ^ (std::size_t(1) << c)];
        if (lw != kNegInf && prior != kNegInf) acc.add(prior + lw);
      }
      ws.dp[s] = acc.value();
      if (s == 0) break;
    }
  }

  ws.comp.assign(n_subsets, 0.0);
  if (col_off != nullptr) {
    for (std::size_t s = n_subsets - 1; s + 1 > 0; --s) {
      if (s != n_subsets - 1) {
        const std::size_t missing = (n_subsets - 1) ^ s;
        const int c = std::countr_zero(missing);
        ws.comp[s] = ws.comp[s | (std::size_t(1) << c)] + col_off[c];
      }
      if (s == 0) break;
    }
  }

  out.assign(cols + 1, kNegInf);
  std::vector<LogAccumulator> acc(cols + 1);
  for (std::size_t s = 0; s < n_subsets; ++s)
    if (ws.dp[s] != kNegInf && ws.comp[s] != kNegInf)
      acc[std::popcount(s)].add(ws.dp[s] + ws.comp[s]);
  for (int k = 0; k <= cols; ++k) out[k] = acc[k].value();
}

}  // namespace

double log_factorial(int n) { return log_factorial_table()[n]; }

double log_binomial(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_sum_exp(std::span<const double> xs) {
  LogAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

void log_partial_matching_sums(const LogMatrix& m, double log_weight,
                               const double* row_off, const double* col_off,
                               int degree_cap, KernelWorkspace& ws,
                               std::vector<double>& out) {
  const bool transposed = m.cols() > m.rows();
  const int rows = transposed ? m.cols() : m.rows();
  const int cols = transposed ? m.rows() : m.cols();
  if (transposed) std::swap(row_off, col_off);

  if (cols > degree_cap)
    throw CapacityError("partial matching: min side " + std::to_string(cols) +
                        " exceeds degree cap " + std::to_string(degree_cap));

  Spread sm, su, sc;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      sm.add(transposed ? m.at(c, r) : m.at(r, c));
  if (row_off != nullptr)
    for (int r = 0; r < rows; ++r) su.add(row_off[r]);
  if (col_off != nullptr)
    for (int c = 0; c < cols; ++c) sc.add(col_off[c]);

  const double width = std::max({sm.width(), su.width(), sc.width()});
  if (width > kLinearSpreadLimit) {
    matching_sums_logdomain(m, transposed, row_off, col_off, ws, out);
  } else {
    const double m_shift = sm.empty() ? 0.0 : sm.max;
    const double u_shift = su.empty() ? 0.0 : su.max;
    const double c_shift = sc.empty() ? 0.0 : sc.max;
    matching_sums_linear(m, transposed, row_off, col_off, m_shift, u_shift,
                         c_shift, ws, out);
  }

  if (log_weight != 0.0)
    for (int k = 1; k <= cols; ++k)
      if (out[k] != kNegInf) out[k] += k * log_weight;
}

double log_lr_combine_er(int l, int l2, const LogMatrix& m, double lambda,
                         double s, int degree_cap, KernelWorkspace& ws) {
  if (s == 0.0) return 0.0;

  if (s == 1.0) {
    // Perfect correlation: only equal child counts are possible and the
    // sum reduces to a permanent over full matchings.
    if (l != l2) return kNegInf;
    if (l == 0) return lambda;
    log_partial_matching_sums(m, 0.0, nullptr, nullptr, degree_cap, ws,
                              ws.sums);
    const double perm = ws.sums[l];
    return perm == kNegInf ? kNegInf : lambda - l * std::log(lambda) + perm;
  }

  const double base = lambda * s + (l + l2) * std::log1p(-s);
  if (l == 0 || l2 == 0) return base;

  const double log_weight =
      std::log(s) - std::log(lambda) - 2.0 * std::log1p(-s);
  log_partial_matching_sums(m, log_weight, nullptr, nullptr, degree_cap, ws,
                            ws.sums);
  const double lse = log_sum_exp(ws.sums);
  return lse == kNegInf ? kNegInf : base + lse;
}

double log_joint_combine(const DegreeTripleLaw& law, int l, int l2,
                         const LogMatrix& m, const double* u, const double* u2,
                         int degree_cap, KernelWorkspace& ws) {
  log_partial_matching_sums(m, 0.0, u, u2, degree_cap, ws, ws.sums);
  LogAccumulator acc;
  const int kmax = std::min(l, l2);
  for (int k = 0; k <= kmax; ++k) {
    if (ws.sums[k] == kNegInf) continue;
    const double q = law.prob(l - k, l2 - k, k);
    if (q <= 0.0) continue;
    acc.add(std::log(q) - log_binomial(l, k) - log_binomial(l2, k) -
            log_factorial(k) + ws.sums[k]);
  }
  return acc.value();
}

double log_marginal_combine(const DegreeTripleLaw& law, int l, const double* u,
                            const double* v, KernelWorkspace& ws) {
  // esp[k] = log sum over k-subsets I of prod_{i in I} e^{u_i}
  //          * prod_{i not in I} e^{v_i}
  ws.esp.assign(l + 1, kNegInf);
  ws.esp[0] = 0.0;
  for (int i = 0; i < l; ++i) {
    for (int k = std::min(i + 1, l); k >= 0; --k) {
      LogAccumulator acc;
      if (ws.esp[k] != kNegInf && v[i] != kNegInf) acc.add(ws.esp[k] + v[i]);
      if (k > 0 && ws.esp[k - 1] != kNegInf && u[i] != kNegInf)
        acc.add(ws.esp[k - 1] + u[i]);
      ws.esp[k] = acc.value();
    }
  }
  LogAccumulator acc;
  for (int k = 0; k <= l; ++k) {
    if (ws.esp[k] == kNegInf) continue;
    const double q = law.pair_marginal(l - k, k);
    if (q <= 0.0) continue;
    acc.add(std::log(q) - log_binomial(l, k) + ws.esp[k]);
  }
  return acc.value();
}

}  // namespace graphalign
