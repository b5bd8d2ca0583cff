// SPDX-License-Identifier: Apache-2.0
#include "graphalign/metrics.hpp"

#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "graphalign/errors.hpp"
#include "graphalign/trees.hpp"

namespace graphalign {

namespace {

void check_truth(const PartialMap& est, const std::vector<int>& truth) {
  if (est.n() != static_cast<int>(truth.size()))
    throw DataError("estimator and ground truth sizes differ");
}

}  // namespace

OverlapResult overlap(const PartialMap& est, const std::vector<int>& truth) {
  check_truth(est, truth);
  const int assigned = est.num_assigned();
  if (assigned == 0) return {0.0, true};
  int correct = 0;
  for (int i = 0; i < est.n(); ++i)
    if (est.assignment[i] >= 0 && est.assignment[i] == truth[i]) ++correct;
  return {static_cast<double>(correct) / assigned, false};
}

double hamming_loss(const PartialMap& est, const std::vector<int>& truth) {
  check_truth(est, truth);
  const double n = est.n();
  const double assigned = est.num_assigned();
  const double frac = assigned / n;
  const double ov = overlap(est, truth).value;
  return (1.0 - frac) + 2.0 * frac * (1.0 - ov);
}

ScoreDiagnostics score_diagnostics(const ScoreMatrix& scores,
                                   const PartialMap& full_est,
                                   const std::vector<int>& truth,
                                   const Graph& graph_b) {
  check_truth(full_est, truth);
  const int n = scores.n();
  ScoreDiagnostics out;
  double quasi = 0.0;
  int quasi_count = 0;
  double all = 0.0;
  for (int i = 0; i < n; ++i) {
    out.argmax_score += scores.at(i, full_est.assignment[i]);
    out.aligned_score += scores.at(i, truth[i]);
    const auto& nb = graph_b.adj[truth[i]];
    if (!nb.empty()) {
      double acc = 0.0;
      for (int j : nb) acc += scores.at(i, j);
      quasi += acc / static_cast<double>(nb.size());
      ++quasi_count;
    }
    for (int j = 0; j < n; ++j) all += scores.at(i, j);
  }
  out.argmax_score /= n;
  out.aligned_score /= n;
  out.quasi_aligned_score = quasi_count > 0 ? quasi / quasi_count : 0.0;
  out.random_pair_score = all / (static_cast<double>(n) * n);
  return out;
}

NishimoriCheck nishimori_check(const RowProbabilities& p,
                               const PartialMap& full_est,
                               const std::vector<int>& truth) {
  check_truth(full_est, truth);
  const int n = p.n();
  NishimoriCheck out;
  out.true_overlap = overlap(full_est, truth).value;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double mx = 0.0;
    for (int j = 0; j < n; ++j) mx = std::max(mx, p.at(i, j));
    acc += mx;
  }
  out.estimated_overlap = acc / n;
  return out;
}

double it_upper_bound(double lambda_s) {
  if (lambda_s < 0.0)
    throw ConfigError("it_upper_bound: argument must be >= 0");
  if (lambda_s <= 1.0) return 0.0;
  double c = 1.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const double next = 1.0 - std::exp(-lambda_s * c);
    if (std::abs(next - c) < 1e-12) return next;
    c = next;
  }
  return c;
}

KlEstimate estimate_kl(double lambda, double s, int depth, int samples,
                       std::uint64_t seed, int threads) {
  if (samples < 1) throw ConfigError("estimate_kl: samples must be >= 1");
  if (!(lambda > 0.0) || s < 0.0 || s > 1.0)
    throw ConfigError("estimate_kl: invalid lambda or s");
  if (depth < 0) throw ConfigError("estimate_kl: negative depth");
  // expected pair-value matrix size at the deepest generation
  if (std::pow(std::max(lambda, 1.0), 2.0 * depth) > 1e10)
    throw CapacityError("estimate_kl: expected tree size out of budget at "
                        "lambda=" + std::to_string(lambda) +
                        ", d=" + std::to_string(depth));

  std::vector<double> values(samples);
  const int workers = std::max(1, std::min(threads, samples));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&](int w) {
    KernelWorkspace ws;
    try {
      for (int k = w; k < samples; k += workers) {
        Rng rng(mix_seed({seed, static_cast<std::uint64_t>(k)}));
        const ColoredTree ct = sample_colored_gw_er(lambda, s, depth, rng);
        const auto [t, t2] = project_pair(ct);
        values[k] = log_likelihood_ratio(t, t2, lambda, s, depth,
                                         kDefaultDegreeCap, ws);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= samples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = samples > 1 ? var / (samples - 1) : 0.0;

  KlEstimate out;
  out.depth = depth;
  out.mean = mean;
  out.std_error = std::sqrt(var / samples);
  out.sample_count = samples;
  return out;
}

EvalReport evaluate(const ScoreMatrix& scores, const std::vector<int>& truth,
                    const Graph& graph_b, double threshold,
                    std::uint64_t tie_seed) {
  EvalReport r;
  const PartialMap full = argmax_estimator(scores, tie_seed);
  r.overlap = overlap(full, truth).value;
  r.diagnostics = score_diagnostics(scores, full, truth, graph_b);

  const RowProbabilities p = row_normalize(scores);
  const NishimoriCheck nc = nishimori_check(p, full, truth);
  r.true_overlap = nc.true_overlap;
  r.estimated_overlap = nc.estimated_overlap;

  const PartialMap part = threshold_estimator(p, threshold);
  r.partial_overlap = overlap(part, truth).value;
  r.assigned_fraction =
      static_cast<double>(part.num_assigned()) / static_cast<double>(part.n());
  r.hamming = hamming_loss(part, truth);
  return r;
}

}  // namespace graphalign
