// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "graphalign/errors.hpp"
#include "graphalign/trees.hpp"
#include "oracles.hpp"

using namespace graphalign;

namespace {

int count_color(const ColoredTree& t, EdgeColor c) {
  int k = 0;
  for (int v = 1; v < t.tree.size(); ++v)
    if (t.color_to_parent[v] == c) ++k;
  return k;
}

/// Canonical shape key of a depth<=2 tree: sorted child counts of the
/// root's children.
std::vector<int> depth2_shape(const RootedTree& t) {
  std::vector<int> shape;
  for (int c : t.children(t.root()))
    shape.push_back(static_cast<int>(t.children(c).size()));
  std::sort(shape.begin(), shape.end());
  return shape;
}

// 0.999 chi-square quantile via the Wilson-Hilferty approximation.
double chi2_quantile_999(int dof) {
  const double z = 3.0902;  // N(0,1) quantile at 0.999
  const double k = dof;
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

}  // namespace

TEST_SUITE_BEGIN("trees");

TEST_CASE("depth zero tree is a single root") {
  Rng rng(1);
  const RootedTree t = sample_gw_poisson(1.4, 0, rng);
  CHECK(t.size() == 1);
  CHECK(t.depth() == 0);
}

TEST_CASE("mean population of the branching process") {
  const double lambda = 1.4;
  const int d = 6;
  double expected = 0.0;
  for (int g = 0; g <= d; ++g) expected += std::pow(lambda, g);

  Rng rng(77);
  const int samples = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const RootedTree t = sample_gw_poisson(lambda, d, rng);
    sum += t.size();
    sum_sq += static_cast<double>(t.size()) * t.size();
  }
  const double mean = sum / samples;
  const double var = (sum_sq - samples * mean * mean) / (samples - 1);
  const double se = std::sqrt(var / samples);
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("tiny offspring rate mostly yields a bare root") {
  const double lambda = 1e-4;
  Rng rng(5);
  const int samples = 20000;
  int bare = 0;
  for (int k = 0; k < samples; ++k)
    bare += sample_gw_poisson(lambda, 5, rng).size() == 1 ? 1 : 0;
  const double expected = std::exp(-lambda);
  const double freq = static_cast<double>(bare) / samples;
  CHECK(std::abs(freq - expected) <
        3.0 * std::sqrt(expected * (1 - expected) / samples) + 1e-6);
}

TEST_CASE("colored tree color extremes") {
  Rng rng(9);
  const ColoredTree all_bi = sample_colored_gw_er(1.5, 1.0, 4, rng);
  CHECK(count_color(all_bi, EdgeColor::blue) == 0);
  CHECK(count_color(all_bi, EdgeColor::red) == 0);

  const ColoredTree none_bi = sample_colored_gw_er(1.5, 0.0, 4, rng);
  CHECK(count_color(none_bi, EdgeColor::bicolored) == 0);
}

TEST_CASE("mean bicolored offspring at the root") {
  const double lambda = 1.5, s = 0.8;
  Rng rng(13);
  const int samples = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ColoredTree t = sample_colored_gw_er(lambda, s, 1, rng);
    int bi = 0;
    for (int c : t.tree.children(0))
      bi += t.color_to_parent[c] == EdgeColor::bicolored ? 1 : 0;
    sum += bi;
    sum_sq += static_cast<double>(bi) * bi;
  }
  const double mean = sum / samples;
  const double var = (sum_sq - samples * mean * mean) / (samples - 1);
  CHECK(std::abs(mean - lambda * s) < 3.0 * std::sqrt(var / samples));
}

TEST_CASE("projection of a hand-built colored tree") {
  // root with two bicolored children, one blue child, one red child;
  // below the first bicolored child: one blue and one red grandchild;
  // below the blue child: one bicolored grandchild (invisible in red).
  ColoredTree t;
  const int bi1 = t.add_child(0, EdgeColor::bicolored);
  t.add_child(0, EdgeColor::bicolored);
  const int blue1 = t.add_child(0, EdgeColor::blue);
  t.add_child(0, EdgeColor::red);
  t.add_child(bi1, EdgeColor::blue);
  t.add_child(bi1, EdgeColor::red);
  t.add_child(blue1, EdgeColor::bicolored);

  const auto [first, second] = project_pair(t);
  // first side: root + bi1 + bi2 + blue1, plus blue grandchild under bi1
  // and the bicolored grandchild under blue1
  CHECK(first.size() == 6);
  // second side: root + bi1 + bi2 + red1 + red grandchild under bi1;
  // everything below blue1 is cut
  CHECK(second.size() == 5);
  CHECK(first.children(0).size() == 3);
  CHECK(second.children(0).size() == 3);
}

TEST_CASE("projection of an all-bicolored tree keeps the full shape") {
  Rng rng(21);
  const ColoredTree t = sample_colored_gw_er(1.2, 1.0, 3, rng);
  const auto [first, second] = project_pair(t);
  CHECK(first.size() == t.tree.size());
  CHECK(second.size() == t.tree.size());
}

TEST_CASE("root with a single red child projects to a bare blue root") {
  ColoredTree t;
  t.add_child(0, EdgeColor::red);
  const auto [first, second] = project_pair(t);
  CHECK(first.size() == 1);
  CHECK(second.size() == 2);
}

TEST_CASE("null model log-probability") {
  RootedTree bare;
  CHECK(log_p0(bare, 1.4, 0) == 0.0);
  CHECK(log_p0(bare, 1.4, 1) == doctest::Approx(-1.4));

  RootedTree two;
  two.add_child(0);
  two.add_child(0);
  CHECK(log_p0(two, 1.4, 1) ==
        doctest::Approx(std::log(std::exp(-1.4) * 1.4 * 1.4 / 2.0)));
}

TEST_CASE("truncated normalization of the null model at depth two") {
  const double lambda = 1.4;
  const int cap = 6;
  // enumerate every ordered tree of depth <= 2 with child counts <= cap
  double total = 0.0;
  std::vector<int> counts;
  for (int l = 0; l <= cap; ++l) {
    counts.assign(l, 0);
    while (true) {
      RootedTree t;
      for (int i = 0; i < l; ++i) {
        const int c = t.add_child(0);
        for (int j = 0; j < counts[i]; ++j) t.add_child(c);
      }
      total += std::exp(log_p0(t, lambda, 2));
      int i = 0;
      while (i < l && counts[i] == cap) {
        counts[i] = 0;
        ++i;
      }
      if (i >= l) break;
      ++counts[i];
    }
  }
  // analytic mass of the enumerated region; the remainder is tail mass
  double s1 = 0.0;
  for (int c = 0; c <= cap; ++c) s1 += oracle::poisson_pmf(lambda, c);
  double region = 0.0;
  for (int l = 0; l <= cap; ++l)
    region += oracle::poisson_pmf(lambda, l) * std::pow(s1, l);
  const double tail = 1.0 - region;
  CHECK(std::abs(total + tail - 1.0) < 1e-6);
}

TEST_CASE("likelihood ratio closed forms at depth one") {
  const double lambda = 1.4, s = 0.8;
  RootedTree bare;
  CHECK(log_likelihood_ratio(bare, bare, lambda, s, 0) == 0.0);
  CHECK(log_likelihood_ratio(bare, bare, lambda, s, 1) ==
        doctest::Approx(lambda * s));

  RootedTree chain;
  chain.add_child(0);
  const double expected =
      std::log(std::exp(lambda * s) * ((1 - s) * (1 - s) + s / lambda));
  CHECK(log_likelihood_ratio(chain, chain, lambda, s, 1) ==
        doctest::Approx(expected));
}

TEST_CASE("zero correlation gives log-ratio zero on any pair") {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const RootedTree t = sample_gw_poisson(1.5, 3, rng);
    const RootedTree t2 = sample_gw_poisson(1.5, 3, rng);
    CHECK(log_likelihood_ratio(t, t2, 1.5, 0.0, 3) == 0.0);
  }
}

TEST_CASE("exchange symmetry of the likelihood ratio") {
  Rng rng(35);
  int done = 0;
  while (done < 50) {
    const ColoredTree ct = sample_colored_gw_er(1.6, 0.7, 3, rng);
    const auto [t, t2] = project_pair(ct);
    if (t.size() > 12 || t2.size() > 12) continue;
    const double a = log_likelihood_ratio(t, t2, 1.6, 0.7, 3);
    const double b = log_likelihood_ratio(t2, t, 1.6, 0.7, 3);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    ++done;
  }
}

TEST_CASE("oracle equivalence on random correlated pairs") {
  Rng rng(37);
  int done = 0;
  while (done < 120) {
    const double lambda = 0.8 + 1.2 * rng.next_unit();
    const double s = rng.next_unit();
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const ColoredTree ct = sample_colored_gw_er(lambda, s, d, rng);
    const auto [t, t2] = project_pair(ct);
    if (t.size() > 9 || t2.size() > 9) continue;
    const double lr = log_likelihood_ratio(t, t2, lambda, s, d);
    const double ref =
        oracle::brute_force_log_p1(t, t2,
                                   oracle::TreePairLaw::make_er(lambda, s), d) -
        log_p0(t, lambda, d) - log_p0(t2, lambda, d);
    CHECK(lr == doctest::Approx(ref).epsilon(1e-11));
    ++done;
  }
}

TEST_CASE("brute-force pair law special cases") {
  const double lambda = 1.3, s = 0.6;
  RootedTree bare;
  // two bare roots at depth 1: no offspring in either color
  CHECK(oracle::brute_force_log_p1(bare, bare,
                                   oracle::TreePairLaw::make_er(lambda, s), 1) ==
        doctest::Approx(-lambda * (2.0 - s)));

  // independence at s = 0: the joint law factorizes
  Rng rng(39);
  for (int trial = 0; trial < 10; ++trial) {
    const RootedTree t = sample_gw_poisson(1.2, 2, rng);
    const RootedTree t2 = sample_gw_poisson(1.2, 2, rng);
    if (t.size() > 10 || t2.size() > 10) continue;
    const double joint = oracle::brute_force_log_p1(
        t, t2, oracle::TreePairLaw::make_er(lambda, 0.0), 2);
    CHECK(joint == doctest::Approx(log_p0(t, lambda, 2) +
                                   log_p0(t2, lambda, 2)).epsilon(1e-11));
  }
}

TEST_CASE("generalized brute force with poisson product matches the er one") {
  const double lambda = 1.3, s = 0.7;
  const DegreeTripleLaw q =
      DegreeTripleLaw::poisson_product(lambda * (1 - s), lambda * s);
  const SizeBiasedLaws sb = size_bias(q);
  Rng rng(41);
  int done = 0;
  while (done < 20) {
    const ColoredTree ct = sample_colored_gw_er(lambda, s, 2, rng);
    const auto [t, t2] = project_pair(ct);
    if (t.size() > 7 || t2.size() > 7) continue;
    const double er = oracle::brute_force_log_p1(
        t, t2, oracle::TreePairLaw::make_er(lambda, s), 2);
    const double gen = oracle::brute_force_log_p1(
        t, t2, oracle::TreePairLaw::make_general(q, sb), 2);
    CHECK(gen == doctest::Approx(er).epsilon(1e-9));
    ++done;
  }
}

TEST_CASE("projection marginal matches the single-graph branching law") {
  // depth-2 shape frequencies of the first projection against direct
  // sampling, two-sample chi-square
  const double lambda = 1.3, s = 0.6;
  const int samples = 100000;
  Rng rng_pair(43), rng_single(44);

  std::map<std::vector<int>, std::pair<int, int>> counts;
  for (int k = 0; k < samples; ++k) {
    const ColoredTree ct = sample_colored_gw_er(lambda, s, 2, rng_pair);
    counts[depth2_shape(project_pair(ct).first)].first++;
    counts[depth2_shape(sample_gw_poisson(lambda, 2, rng_single))].second++;
  }

  // merge rare shapes
  double chi2 = 0.0;
  int dof = -1;
  int rare_a = 0, rare_b = 0;
  for (const auto& [shape, c] : counts) {
    if (c.first + c.second < 40) {
      rare_a += c.first;
      rare_b += c.second;
      continue;
    }
    const double expected = (c.first + c.second) / 2.0;
    chi2 += (c.first - expected) * (c.first - expected) / expected +
            (c.second - expected) * (c.second - expected) / expected;
    ++dof;
  }
  if (rare_a + rare_b > 0) {
    const double expected = (rare_a + rare_b) / 2.0;
    chi2 += (rare_a - expected) * (rare_a - expected) / expected +
            (rare_b - expected) * (rare_b - expected) / expected;
    ++dof;
  }
  REQUIRE(dof >= 1);
  CHECK(chi2 < chi2_quantile_999(dof));
}

TEST_SUITE_END();
