// SPDX-License-Identifier: Apache-2.0
#include "graphalign/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "graphalign/errors.hpp"
#include "graphalign/matching_kernel.hpp"

namespace graphalign {

void ErParams::validate() const {
  if (n < 1) throw ConfigError("ErParams: n must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("ErParams: lambda must be > 0");
  if (s < 0.0 || s > 1.0) throw ConfigError("ErParams: s must be in [0, 1]");
  if (lambda * (2.0 - s) / n > 1.0)
    throw ConfigError("ErParams: lambda*(2-s)/n exceeds 1");
}

WeightModel WeightModel::gaussian_correlated(double rho) {
  if (!(std::abs(rho) < 1.0))
    throw ConfigError("gaussian_correlated: |rho| must be < 1");
  return WeightModel(Kind::gaussian_correlated, rho);
}

WeightModel WeightModel::from_name(const std::string& name, double rho) {
  if (name == "product") return product();
  if (name == "gaussian") return gaussian_correlated(rho);
  if (name == "equal") return equal_weight();
  throw ConfigError("unknown weight model '" + name + "'");
}

std::string WeightModel::name() const {
  switch (kind_) {
    case Kind::product:
      return "product";
    case Kind::gaussian_correlated:
      return "gaussian";
    case Kind::equal_weight:
      return "equal";
  }
  return "?";
}

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double log_std_normal(double w) { return -0.5 * (kLogTwoPi + w * w); }
}  // namespace

std::pair<double, double> WeightModel::sample_pair(Rng& rng) const {
  switch (kind_) {
    case Kind::product:
      return {rng.normal(), rng.normal()};
    case Kind::gaussian_correlated: {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      return {z1, rho_ * z1 + std::sqrt(1.0 - rho_ * rho_) * z2};
    }
    case Kind::equal_weight: {
      const double w = rng.normal();
      return {w, w};
    }
  }
  return {0.0, 0.0};
}

double WeightModel::sample_marginal(Rng& rng) const { return rng.normal(); }

double WeightModel::log_density(double w, double w2) const {
  switch (kind_) {
    case Kind::product:
      return log_std_normal(w) + log_std_normal(w2);
    case Kind::gaussian_correlated: {
      const double q = 1.0 - rho_ * rho_;
      return -kLogTwoPi - 0.5 * std::log(q) -
             (w * w - 2.0 * rho_ * w * w2 + w2 * w2) / (2.0 * q);
    }
    case Kind::equal_weight:
      return w == w2 ? log_std_normal(w) + kEqualWeightLogDelta : kNegInf;
  }
  return kNegInf;
}

double WeightModel::log_marginal_density(double w) const {
  return log_std_normal(w);
}

namespace {

/// Relabels C through the permutation: edge (u, v) of C becomes
/// (pi[u], pi[v]) in B. Weights follow the edges.
GraphPairInstance make_instance(const ColoredGraph& colored,
                                const std::vector<int>& pi,
                                EnsembleKind kind) {
  GraphPairInstance inst;
  inst.ensemble = kind;
  inst.graph_a = colored.project(true);
  const Graph c = colored.project(false);
  inst.graph_b = Graph(colored.n);
  for (auto [u, v] : c.edges) inst.graph_b.add_edge(pi[u], pi[v]);
  inst.ground_truth = pi;
  return inst;
}

}  // namespace

std::pair<ColoredGraph, GraphPairInstance> sample_correlated_er(
    const ErParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const int n = params.n;
  const double p_bi = params.lambda * params.s / n;
  const double p_mono = params.lambda * (1.0 - params.s) / n;

  ColoredGraph colored(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double x = rng.next_unit();
      if (x < p_bi)
        colored.add_edge(u, v, EdgeColor::bicolored);
      else if (x < p_bi + p_mono)
        colored.add_edge(u, v, EdgeColor::blue);
      else if (x < p_bi + 2.0 * p_mono)
        colored.add_edge(u, v, EdgeColor::red);
    }
  }

  const std::vector<int> pi = random_permutation(n, rng);
  GraphPairInstance inst = make_instance(colored, pi, EnsembleKind::er);
  return {std::move(colored), std::move(inst)};
}

std::pair<ColoredGraph, GraphPairInstance> sample_configuration_correlated(
    const DegreeTripleLaw& q, int n, std::uint64_t seed, int max_retries) {
  if (n < 1) throw ConfigError("configuration model: n must be >= 1");
  Rng rng(seed);

  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    // Degree triples; resample the whole sequence until every color's
    // half-edge total is even.
    std::vector<DegreeTriple> deg(n);
    bool even = false;
    int parity_tries = 0;
    while (!even && parity_tries < max_retries) {
      ++parity_tries;
      int tb = 0, tr = 0, ti = 0;
      for (int v = 0; v < n; ++v) {
        deg[v] = q.sample(rng);
        tb += deg[v].blue;
        tr += deg[v].red;
        ti += deg[v].bicolored;
      }
      even = tb % 2 == 0 && tr % 2 == 0 && ti % 2 == 0;
    }
    if (!even)
      throw GenerationError(
          "configuration model: no even half-edge totals after " +
          std::to_string(parity_tries) + " degree resamples");

    // Uniform pairing per color.
    auto pair_up = [&rng](const std::vector<int>& count, int n) {
      std::vector<int> stubs;
      for (int v = 0; v < n; ++v)
        for (int k = 0; k < count[v]; ++k) stubs.push_back(v);
      rng.shuffle(stubs);
      std::vector<std::pair<int, int>> out;
      for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
        out.emplace_back(stubs[i], stubs[i + 1]);
      return out;
    };

    std::vector<int> blue(n), red(n), bi(n);
    for (int v = 0; v < n; ++v) {
      blue[v] = deg[v].blue;
      red[v] = deg[v].red;
      bi[v] = deg[v].bicolored;
    }

    ColoredGraph colored(n);
    bool simple = true;
    std::set<std::pair<int, int>> seen;
    auto add_all = [&](const std::vector<std::pair<int, int>>& pairs,
                       EdgeColor c) {
      for (auto [u, v] : pairs) {
        if (u == v) {
          simple = false;
          return;
        }
        auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second) {
          simple = false;
          return;
        }
        colored.add_edge(u, v, c);
      }
    };
    add_all(pair_up(blue, n), EdgeColor::blue);
    if (simple) add_all(pair_up(red, n), EdgeColor::red);
    if (simple) add_all(pair_up(bi, n), EdgeColor::bicolored);
    if (!simple) continue;

    const std::vector<int> pi = random_permutation(n, rng);
    GraphPairInstance inst =
        make_instance(colored, pi, EnsembleKind::configuration);
    return {std::move(colored), std::move(inst)};
  }
  throw GenerationError("configuration model: no simple graph after " +
                        std::to_string(max_retries) + " attempts");
}

GraphPairInstance attach_weights(GraphPairInstance instance,
                                 const ColoredGraph& colored,
                                 const WeightModel& model,
                                 std::uint64_t seed) {
  if (!instance.ground_truth.has_value())
    throw DataError("attach_weights: instance without ground truth");
  const std::vector<int>& pi = *instance.ground_truth;
  Rng rng(seed);

  std::map<std::pair<int, int>, double> wa, wb;
  for (const ColoredGraph::Edge& e : colored.edges) {
    const auto a_key = std::minmax(e.u, e.v);
    const auto b_key = std::minmax(pi[e.u], pi[e.v]);
    switch (e.color) {
      case EdgeColor::bicolored: {
        const auto [w, w2] = model.sample_pair(rng);
        wa[a_key] = w;
        wb[b_key] = w2;
        break;
      }
      case EdgeColor::blue:
        wa[a_key] = model.sample_marginal(rng);
        break;
      case EdgeColor::red:
        wb[b_key] = model.sample_marginal(rng);
        break;
    }
  }

  auto collect = [](const Graph& g,
                    const std::map<std::pair<int, int>, double>& w) {
    std::vector<double> out;
    out.reserve(g.edges.size());
    for (auto e : g.edges) {
      const auto it = w.find(e);
      if (it == w.end())
        throw DataError("attach_weights: colored graph inconsistent with pair");
      out.push_back(it->second);
    }
    return out;
  };

  instance.weights_a = collect(instance.graph_a, wa);
  instance.weights_b = collect(instance.graph_b, wb);
  instance.ensemble = EnsembleKind::weighted;
  return instance;
}

ColoredGraph colored_from_instance(const GraphPairInstance& instance) {
  if (!instance.ground_truth.has_value())
    throw DataError("colored_from_instance: instance without ground truth");
  const std::vector<int>& pi = *instance.ground_truth;
  const int n = instance.n();
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) inv[pi[i]] = i;

  std::set<std::pair<int, int>> a_edges, c_edges;
  for (auto e : instance.graph_a.edges) a_edges.insert(e);
  for (auto [u, v] : instance.graph_b.edges) {
    auto key = std::minmax(inv[u], inv[v]);
    c_edges.insert({key.first, key.second});
  }

  ColoredGraph colored(n);
  for (auto e : a_edges)
    colored.add_edge(e.first, e.second,
                     c_edges.count(e) ? EdgeColor::bicolored : EdgeColor::blue);
  for (auto e : c_edges)
    if (!a_edges.count(e)) colored.add_edge(e.first, e.second, EdgeColor::red);
  return colored;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

GraphPairInstance load_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pair file '" + path + "'");

  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) parse_fail(path, line_no, "missing header");
  int n, ma, mb, weighted;
  {
    std::istringstream ss(line);
    if (!(ss >> n >> ma >> mb >> weighted) || (weighted != 0 && weighted != 1))
      parse_fail(path, line_no, "bad header, expected 'n m_a m_b weighted'");
    if (n < 1 || ma < 0 || mb < 0)
      parse_fail(path, line_no, "bad header counts");
  }

  GraphPairInstance inst;
  inst.graph_a = Graph(n);
  inst.graph_b = Graph(n);
  if (weighted) {
    inst.weights_a.emplace();
    inst.weights_b.emplace();
  }

  std::set<std::pair<int, int>> seen_a, seen_b;
  auto read_edges = [&](Graph& g, std::set<std::pair<int, int>>& seen,
                        std::optional<std::vector<double>>& w, int m) {
    for (int k = 0; k < m; ++k) {
      if (!next_line()) parse_fail(path, line_no, "unexpected end of edges");
      std::istringstream ss(line);
      int u, v;
      if (!(ss >> u >> v)) parse_fail(path, line_no, "bad edge line");
      if (u < 0 || v < 0 || u >= n || v >= n)
        parse_fail(path, line_no, "edge endpoint out of range");
      if (u == v) parse_fail(path, line_no, "self-loop");
      auto key = std::minmax(u, v);
      if (!seen.insert({key.first, key.second}).second)
        parse_fail(path, line_no, "duplicate edge");
      double wv = 0.0;
      if (weighted && !(ss >> wv))
        parse_fail(path, line_no, "missing weight on weighted edge");
      g.add_edge(u, v);
      if (weighted) w->push_back(wv);
    }
  };
  read_edges(inst.graph_a, seen_a, inst.weights_a, ma);
  read_edges(inst.graph_b, seen_b, inst.weights_b, mb);

  if (next_line()) {
    std::vector<int> pi(n, -1);
    std::vector<bool> hit(n, false);
    for (int k = 0; k < n; ++k) {
      if (k > 0 && !next_line())
        parse_fail(path, line_no, "truncated permutation block");
      std::istringstream ss(line);
      int i, img;
      if (!(ss >> i >> img)) parse_fail(path, line_no, "bad permutation line");
      if (i < 0 || i >= n || img < 0 || img >= n)
        parse_fail(path, line_no, "permutation index out of range");
      if (pi[i] != -1) parse_fail(path, line_no, "repeated source vertex");
      if (hit[img]) parse_fail(path, line_no, "repeated image vertex");
      pi[i] = img;
      hit[img] = true;
    }
    inst.ground_truth = std::move(pi);
    if (next_line()) parse_fail(path, line_no, "trailing content");
  }
  return inst;
}

void save_pair(const GraphPairInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write pair file '" + path + "'");
  const bool weighted = instance.weighted();
  out << instance.n() << ' ' << instance.graph_a.num_edges() << ' '
      << instance.graph_b.num_edges() << ' ' << (weighted ? 1 : 0) << '\n';
  char buf[64];
  auto dump = [&](const Graph& g, const std::optional<std::vector<double>>& w) {
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      out << g.edges[k].first << ' ' << g.edges[k].second;
      if (weighted) {
        std::snprintf(buf, sizeof buf, " %.17g", (*w)[k]);
        out << buf;
      }
      out << '\n';
    }
  };
  dump(instance.graph_a, instance.weights_a);
  dump(instance.graph_b, instance.weights_b);
  if (instance.ground_truth.has_value()) {
    for (int i = 0; i < instance.n(); ++i)
      out << i << ' ' << (*instance.ground_truth)[i] << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

}  // namespace graphalign
