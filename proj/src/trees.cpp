// SPDX-License-Identifier: Apache-2.0
#include "graphalign/trees.hpp"

#include <cmath>
#include <string>

#include "graphalign/errors.hpp"

namespace graphalign {

int RootedTree::add_child(int parent) {
  const int v = static_cast<int>(nodes_.size());
  nodes_.push_back({parent, {}, nodes_[parent].depth + 1});
  nodes_[parent].children.push_back(v);
  depth_ = std::max(depth_, nodes_[v].depth);
  return v;
}

std::vector<std::vector<int>> RootedTree::levels() const {
  std::vector<std::vector<int>> lv(depth_ + 1);
  for (int v = 0; v < size(); ++v) lv[nodes_[v].depth].push_back(v);
  return lv;
}

RootedTree sample_gw_poisson(double lambda, int depth, Rng& rng) {
  if (!(lambda > 0.0)) throw ConfigError("sample_gw_poisson: lambda <= 0");
  if (depth < 0) throw ConfigError("sample_gw_poisson: negative depth");
  RootedTree t;
  std::vector<int> frontier{0};
  for (int g = 0; g < depth; ++g) {
    std::vector<int> next;
    for (int v : frontier) {
      const int k = rng.poisson(lambda);
      for (int c = 0; c < k; ++c) next.push_back(t.add_child(v));
    }
    frontier = std::move(next);
  }
  return t;
}

ColoredTree sample_colored_gw_er(double lambda, double s, int depth,
                                 Rng& rng) {
  if (!(lambda > 0.0) || s < 0.0 || s > 1.0)
    throw ConfigError("sample_colored_gw_er: invalid parameters");
  ColoredTree t;
  std::vector<int> frontier{0};
  const double mono = lambda * (1.0 - s);
  const double bi = lambda * s;
  for (int g = 0; g < depth; ++g) {
    std::vector<int> next;
    for (int v : frontier) {
      const int nb = rng.poisson(mono);
      const int nr = rng.poisson(mono);
      const int nbi = rng.poisson(bi);
      for (int c = 0; c < nb; ++c)
        next.push_back(t.add_child(v, EdgeColor::blue));
      for (int c = 0; c < nr; ++c)
        next.push_back(t.add_child(v, EdgeColor::red));
      for (int c = 0; c < nbi; ++c)
        next.push_back(t.add_child(v, EdgeColor::bicolored));
    }
    frontier = std::move(next);
  }
  return t;
}

ColoredTree sample_colored_gw_general(const DegreeTripleLaw& q,
                                      const SizeBiasedLaws& sb,
                                      LawVariant root_variant, int depth,
                                      Rng& rng) {
  ColoredTree t;
  std::vector<std::pair<int, LawVariant>> frontier{{0, root_variant}};
  for (int g = 0; g < depth; ++g) {
    std::vector<std::pair<int, LawVariant>> next;
    for (auto [v, variant] : frontier) {
      const DegreeTripleLaw& law = variant == LawVariant::base  ? q
                                   : variant == LawVariant::hat ? sb.hat()
                                   : variant == LawVariant::tilde
                                       ? sb.tilde()
                                       : sb.dot();
      const DegreeTriple deg = law.sample(rng);
      for (int c = 0; c < deg.blue; ++c)
        next.emplace_back(t.add_child(v, EdgeColor::blue), LawVariant::tilde);
      for (int c = 0; c < deg.red; ++c)
        next.emplace_back(t.add_child(v, EdgeColor::red), LawVariant::dot);
      for (int c = 0; c < deg.bicolored; ++c)
        next.emplace_back(t.add_child(v, EdgeColor::bicolored),
                          LawVariant::hat);
    }
    frontier = std::move(next);
  }
  return t;
}

namespace {

RootedTree project_side(const ColoredTree& t, bool first_side) {
  RootedTree out;
  // (source node, image in projection), expanded in BFS order
  std::vector<std::pair<int, int>> frontier{{0, 0}};
  while (!frontier.empty()) {
    std::vector<std::pair<int, int>> next;
    for (auto [v, img] : frontier) {
      for (int c : t.tree.children(v)) {
        const EdgeColor col = t.color_to_parent[c];
        const bool keep = col == EdgeColor::bicolored ||
                          (first_side ? col == EdgeColor::blue
                                      : col == EdgeColor::red);
        if (keep) next.emplace_back(c, out.add_child(img));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

std::pair<RootedTree, RootedTree> project_pair(const ColoredTree& t) {
  return {project_side(t, true), project_side(t, false)};
}

double log_p0(const RootedTree& tree, double lambda, int d) {
  if (tree.depth() > d)
    throw ConfigError("log_p0: tree deeper than evaluation depth");
  const double log_lambda = std::log(lambda);
  double total = 0.0;
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.depth_of(v) >= d) continue;
    const int k = static_cast<int>(tree.children(v).size());
    total += -lambda + k * log_lambda - log_factorial(k);
  }
  return total;
}

double log_likelihood_ratio(const RootedTree& t, const RootedTree& t2,
                            double lambda, double s, int d, int degree_cap) {
  KernelWorkspace ws;
  return log_likelihood_ratio(t, t2, lambda, s, d, degree_cap, ws);
}

double log_likelihood_ratio(const RootedTree& t, const RootedTree& t2,
                            double lambda, double s, int d, int degree_cap,
                            KernelWorkspace& ws) {
  if (t.depth() > d || t2.depth() > d)
    throw ConfigError("log_likelihood_ratio: tree deeper than depth");
  if (d == 0) return 0.0;

  const auto lv = t.levels();
  const auto lv2 = t2.levels();

  // position of each node within its generation
  std::vector<int> pos(t.size()), pos2(t2.size());
  for (const auto& level : lv)
    for (std::size_t i = 0; i < level.size(); ++i)
      pos[level[i]] = static_cast<int>(i);
  for (const auto& level : lv2)
    for (std::size_t i = 0; i < level.size(); ++i)
      pos2[level[i]] = static_cast<int>(i);

  // prev(g+1) holds the pair values for generation g+1; generation d (or
  // anything past the shallower tree's depth) contributes the depth-0
  // convention log 1 = 0.
  LogMatrix prev, cur;
  for (int g = d - 1; g >= 0; --g) {
    const std::size_t rows = g < static_cast<int>(lv.size()) ? lv[g].size() : 0;
    const std::size_t cols =
        g < static_cast<int>(lv2.size()) ? lv2[g].size() : 0;
    cur.assign(static_cast<int>(rows), static_cast<int>(cols));
    for (std::size_t a = 0; a < rows; ++a) {
      const int u = lv[g][a];
      const auto& cu = t.children(u);
      for (std::size_t b = 0; b < cols; ++b) {
        const int v = lv2[g][b];
        const auto& cv = t2.children(v);
        ws.gather.assign(static_cast<int>(cu.size()),
                         static_cast<int>(cv.size()));
        if (g + 1 < d && prev.rows() > 0 && prev.cols() > 0) {
          for (std::size_t i = 0; i < cu.size(); ++i)
            for (std::size_t j = 0; j < cv.size(); ++j)
              ws.gather.at(static_cast<int>(i), static_cast<int>(j)) =
                  prev.at(pos[cu[i]], pos2[cv[j]]);
        }
        // g + 1 == d: children are depth-0 pairs, value log 1 = 0,
        // which is the gather default.
        cur.at(static_cast<int>(a), static_cast<int>(b)) = log_lr_combine_er(
            static_cast<int>(cu.size()), static_cast<int>(cv.size()),
            ws.gather, lambda, s, degree_cap, ws);
      }
    }
    std::swap(prev, cur);
  }
  return prev.at(0, 0);
}

}  // namespace graphalign
