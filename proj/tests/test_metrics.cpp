// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "graphalign/ensembles.hpp"
#include "graphalign/errors.hpp"
#include "graphalign/metrics.hpp"
#include "oracles.hpp"

using namespace graphalign;

namespace {

PartialMap full_map(std::vector<int> assignment) {
  PartialMap m;
  m.assignment = std::move(assignment);
  return m;
}

PartialMap partial(std::vector<int> assignment) {
  PartialMap m;
  m.assignment = std::move(assignment);
  m.mode = PartialMap::Mode::threshold;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("overlap and loss boundary cases") {
  const std::vector<int> truth = {0, 1, 2, 3};

  SUBCASE("perfect match") {
    const PartialMap est = full_map({0, 1, 2, 3});
    CHECK(overlap(est, truth).value == 1.0);
    CHECK(hamming_loss(est, truth) == 0.0);
  }

  SUBCASE("null estimator") {
    const PartialMap est = partial({-1, -1, -1, -1});
    const OverlapResult r = overlap(est, truth);
    CHECK(r.value == 0.0);
    CHECK(r.null_estimator);
    CHECK(hamming_loss(est, truth) == 1.0);
  }

  SUBCASE("fully wrong assignment") {
    const PartialMap est = full_map({1, 2, 3, 0});
    CHECK(overlap(est, truth).value == 0.0);
    CHECK(hamming_loss(est, truth) == 2.0);
  }

  SUBCASE("partial overlap counts only assigned vertices") {
    const PartialMap est = partial({0, -1, 2, 0});
    CHECK(overlap(est, truth).value == doctest::Approx(2.0 / 3.0));
    const double frac = 3.0 / 4.0;
    CHECK(hamming_loss(est, truth) ==
          doctest::Approx((1 - frac) + 2 * frac * (1 - 2.0 / 3.0)));
  }

  SUBCASE("size mismatch is an error") {
    const PartialMap est = full_map({0, 1});
    CHECK_THROWS_AS(overlap(est, truth), DataError);
  }

  SUBCASE("loss of a full estimator is twice the overlap gap") {
    const PartialMap est = full_map({0, 1, 3, 2});
    CHECK(hamming_loss(est, truth) ==
          doctest::Approx(2.0 * (1.0 - overlap(est, truth).value)));
  }
}

TEST_CASE("score diagnostics") {
  Graph b(3);
  b.add_edge(0, 1);
  b.add_edge(1, 2);
  const std::vector<int> truth = {0, 1, 2};

  SUBCASE("constant scores collapse all four averages") {
    ScoreMatrix m(3, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = 1.75;
    const PartialMap est = full_map({0, 1, 2});
    const ScoreDiagnostics d = score_diagnostics(m, est, truth, b);
    CHECK(d.argmax_score == doctest::Approx(1.75));
    CHECK(d.aligned_score == doctest::Approx(1.75));
    CHECK(d.quasi_aligned_score == doctest::Approx(1.75));
    CHECK(d.random_pair_score == doctest::Approx(1.75));
  }

  SUBCASE("argmax average dominates the aligned one") {
    Rng rng(7);
    ScoreMatrix m(3, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = rng.next_unit();
    const PartialMap est = argmax_estimator(m, 3);
    const ScoreDiagnostics d = score_diagnostics(m, est, truth, b);
    CHECK(d.argmax_score >= d.aligned_score);
  }

  SUBCASE("isolated true images are skipped in the quasi average") {
    Graph isolated(3);
    isolated.add_edge(0, 1);  // vertex 2 isolated
    ScoreMatrix m(3, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = i == 2 ? -100.0 : 2.0;
    const PartialMap est = full_map({0, 1, 2});
    const ScoreDiagnostics d =
        score_diagnostics(m, est, {0, 1, 2}, isolated);
    // row 2 never contributes: its true image has no neighbors
    CHECK(d.quasi_aligned_score == doctest::Approx(2.0));
  }
}

TEST_CASE("self-consistency of the normalized scores") {
  SUBCASE("identity rows") {
    ScoreMatrix m(3, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = i == j ? 10.0 : -30.0;
    const RowProbabilities p = row_normalize(m);
    const PartialMap est = argmax_estimator(m, 1);
    const NishimoriCheck nc = nishimori_check(p, est, {0, 1, 2});
    CHECK(nc.true_overlap == doctest::Approx(1.0));
    CHECK(nc.estimated_overlap == doctest::Approx(1.0));
  }

  SUBCASE("uniform rows give 1/n on both sides in expectation") {
    const int n = 32;
    ScoreMatrix m(n, 1);
    const RowProbabilities p = row_normalize(m);
    std::vector<int> truth(n);
    for (int i = 0; i < n; ++i) truth[i] = i;
    double ov_total = 0.0;
    const int trials = 4000;
    for (int seed = 0; seed < trials; ++seed) {
      const PartialMap est = argmax_estimator(m, seed);
      const NishimoriCheck nc = nishimori_check(p, est, truth);
      CHECK(nc.estimated_overlap == doctest::Approx(1.0 / n));
      ov_total += nc.true_overlap;
    }
    const double mean_ov = ov_total / trials;
    CHECK(std::abs(mean_ov - 1.0 / n) <
          3.0 * std::sqrt(1.0 / n / (n * trials)) + 2e-3);
  }
}

TEST_CASE("partial-recovery upper bound") {
  CHECK(it_upper_bound(0.5) == 0.0);
  CHECK(it_upper_bound(1.0) == 0.0);
  // frozen from an independent bisection solve of 1 - c = exp(-2c)
  CHECK(it_upper_bound(2.0) == doctest::Approx(0.7968121300200202).epsilon(1e-10));
  CHECK_THROWS_AS(it_upper_bound(-0.1), ConfigError);

  SUBCASE("bisection cross-check") {
    for (double x : {1.2, 1.5, 2.0, 3.0, 5.0}) {
      double lo = 1e-9, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((1.0 - mid - std::exp(-x * mid)) > 0.0 ? lo : hi) = mid;
      }
      CHECK(it_upper_bound(x) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
    }
  }

  SUBCASE("monotone in the product and continuous at one") {
    double prev = 0.0;
    for (double x = 1.0; x <= 4.0; x += 0.05) {
      const double c = it_upper_bound(x);
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(it_upper_bound(1.0 + 1e-6) < 1e-2);
  }
}

TEST_CASE("tree divergence estimates") {
  SUBCASE("independent pairs give exactly zero") {
    const KlEstimate est = estimate_kl(1.5, 0.0, 4, 200, 9);
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
  }

  SUBCASE("depth one matches the exact double sum") {
    const double lambda = 1.5, s = 0.7;
    const KlEstimate est = estimate_kl(lambda, s, 1, 20000, 11, 2);
    const double exact = oracle::exact_kl_depth1(lambda, s);
    CHECK(std::abs(est.mean - exact) < 3.0 * est.std_error);
  }

  SUBCASE("guards before sampling") {
    CHECK_THROWS_AS(estimate_kl(3.0, 0.5, 30, 10, 1), CapacityError);
    CHECK_THROWS_AS(estimate_kl(1.5, 0.5, 3, 0, 1), ConfigError);
  }

  SUBCASE("deterministic across thread counts") {
    const KlEstimate a = estimate_kl(1.4, 0.6, 3, 500, 21, 1);
    const KlEstimate b = estimate_kl(1.4, 0.6, 3, 500, 21, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
}

TEST_CASE("evaluation report wiring") {
  const auto [colored, inst] = sample_correlated_er({64, 1.5, 0.85}, 33);
  const ScoreMatrix scores = run_mp_er(inst, 1.5, 0.85, 3);
  const EvalReport r =
      evaluate(scores, *inst.ground_truth, inst.graph_b, 0.5, 7);
  CHECK(r.overlap == r.true_overlap);
  CHECK(r.overlap >= 0.0);
  CHECK(r.overlap <= 1.0);
  CHECK(r.assigned_fraction >= 0.0);
  CHECK(r.assigned_fraction <= 1.0);
  CHECK(r.hamming >= 0.0);
  CHECK(r.hamming <= 2.0);
  CHECK(r.diagnostics.argmax_score >= r.diagnostics.aligned_score);
}

TEST_SUITE_END();
