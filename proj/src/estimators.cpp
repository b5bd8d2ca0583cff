// SPDX-License-Identifier: Apache-2.0
#include "graphalign/estimators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "graphalign/errors.hpp"
#include "graphalign/rng.hpp"

namespace graphalign {

int PartialMap::num_assigned() const {
  int k = 0;
  for (int v : assignment)
    if (v >= 0) ++k;
  return k;
}

RowProbabilities row_normalize(const ScoreMatrix& scores) {
  const int n = scores.n();
  RowProbabilities p(n);
  for (int i = 0; i < n; ++i) {
    double mx = kNegInf;
    for (int j = 0; j < n; ++j) mx = std::max(mx, scores.at(i, j));
    if (mx == kNegInf)
      throw DataError("row_normalize: row " + std::to_string(i) +
                      " has no finite score");
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += std::exp(scores.at(i, j) - mx);
    const double log_z = mx + std::log(z);
    for (int j = 0; j < n; ++j) p.at(i, j) = std::exp(scores.at(i, j) - log_z);
  }
  return p;
}

PartialMap argmax_estimator(const ScoreMatrix& scores, std::uint64_t seed) {
  const int n = scores.n();
  Rng rng(seed);
  PartialMap out;
  out.mode = PartialMap::Mode::full_argmax;
  out.assignment.resize(n);
  std::vector<int> ties;
  for (int i = 0; i < n; ++i) {
    double best = kNegInf;
    ties.clear();
    for (int j = 0; j < n; ++j) {
      const double v = scores.at(i, j);
      if (v > best) {
        best = v;
        ties.clear();
        ties.push_back(j);
      } else if (v == best) {
        ties.push_back(j);
      }
    }
    out.assignment[i] =
        ties.size() == 1
            ? ties[0]
            : ties[static_cast<std::size_t>(rng.next_below(ties.size()))];
  }
  return out;
}

PartialMap threshold_estimator(const RowProbabilities& p, double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("threshold_estimator: T must be in [0, 1]");
  const int n = p.n();
  PartialMap out;
  out.mode = PartialMap::Mode::threshold;
  out.threshold = threshold;
  out.assignment.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    double best = -1.0;
    int arg = -1;
    bool unique = true;
    for (int j = 0; j < n; ++j) {
      const double v = p.at(i, j);
      if (v > best) {
        best = v;
        arg = j;
        unique = true;
      } else if (v == best) {
        unique = false;
      }
    }
    // ambiguous maxima are treated as no-confidence
    if (best > threshold && unique) out.assignment[i] = arg;
  }
  return out;
}

PartialMap matrix_half_estimator(const RowProbabilities& p) {
  PartialMap out = threshold_estimator(p, 0.5);
  out.mode = PartialMap::Mode::matrix_half;
  return out;
}

void save_map(const PartialMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write map file '" + path + "'");
  for (int i = 0; i < map.n(); ++i) {
    out << i << ' ';
    if (map.assignment[i] >= 0)
      out << map.assignment[i];
    else
      out << '*';
    out << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

PartialMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open map file '" + path + "'");
  PartialMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    int i;
    std::string img;
    if (!(ss >> i >> img) || i != static_cast<int>(out.assignment.size()))
      throw DataError(path + ":" + std::to_string(line_no) + ": bad map line");
    out.assignment.push_back(img == "*" ? -1 : std::stoi(img));
  }
  return out;
}

}  // namespace graphalign
