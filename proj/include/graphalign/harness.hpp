// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graphalign/aligner.hpp"
#include "graphalign/ensembles.hpp"
#include "graphalign/metrics.hpp"

namespace graphalign {

/// Which graph-pair ensemble a sweep draws from. ER and weighted-ER take
/// lambda and s from the grids; law-based ensembles carry their law.
struct EnsembleSpec {
  enum class Kind { er, configuration, weighted_er, weighted_configuration };
  Kind kind = Kind::er;
  std::optional<DegreeTripleLaw> law;
  std::optional<WeightModel> model;
  int max_retries = 1000;
};

struct ExperimentConfig {
  EnsembleSpec ensemble;
  std::vector<int> n_grid;
  std::vector<double> lambda_grid;
  std::vector<double> s_grid;
  int d_max = 1;
  int samples = 1;
  std::uint64_t seed = 0;
  double threshold = 0.5;   // partial-estimator threshold used in reports
  double crossover_r = 0.1; // threshold R for the crossover extraction
  int degree_cap = kDefaultDegreeCap;
  int threads = 1;
  std::string out_path;

  void validate() const;

  /// JSON document; see README for the schema.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

/// One CSV row: means and standard errors at a single grid point and
/// depth. `status` is "ok" or a failure note; failed samples are
/// excluded from the averages.
struct ResultRow {
  int n = 0;
  double lambda = 0.0;
  double s = 0.0;
  int d = 0;
  int samples = 0;
  double overlap_mean = 0.0;
  double overlap_se = 0.0;
  double loss_mean = 0.0;
  double ov_hat_mean = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double f_t = 0.0;
  std::string status = "ok";
};

/// Runs the full grid: per point and sample, generate an instance, run
/// the aligner once for all depths 1..d_max, evaluate each depth.
/// Per-sample seeds are derived from the point parameters, so grid order
/// does not change any sample's instance.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv_file(const std::vector<ResultRow>& rows,
                    const std::string& path);

struct OptimalDepthRow {
  int n = 0;
  double lambda = 0.0;
  double s = 0.0;
  int d_star = 0;
  double overlap = 0.0;
  /// Overlap still rising at d_max: the argmax is a truncation.
  bool truncated = false;
};

/// Per (n, lambda, s): depth maximizing the mean overlap, smallest depth
/// on ties. Requires every depth 1..d_max to be present per point.
std::vector<OptimalDepthRow> select_optimal_depth(
    const std::vector<ResultRow>& rows);

struct CrossoverRow {
  int n = 0;
  double lambda = 0.0;
  bool found = false;
  double s_min = 0.0;
};

/// Per (n, lambda): minimal grid s whose optimal-depth overlap exceeds R.
std::vector<CrossoverRow> crossover_line(const std::vector<OptimalDepthRow>& rows,
                                         double r_threshold);

void write_optimal_csv(const std::vector<OptimalDepthRow>& rows,
                       const std::string& path);
void write_crossover_csv(const std::vector<CrossoverRow>& rows,
                         double r_threshold, const std::string& path);

/// Tree-problem divergence sweep; one row per (s, d).
struct TreeKlRow {
  double lambda = 0.0;
  double s = 0.0;
  int d = 0;
  int samples = 0;
  double kl_mean = 0.0;
  double kl_se = 0.0;
};

std::vector<TreeKlRow> run_tree_kl(double lambda,
                                   const std::vector<double>& s_grid,
                                   int d_min, int d_max, int samples,
                                   std::uint64_t seed, int threads);

void write_tree_kl_csv(const std::vector<TreeKlRow>& rows,
                       const std::string& path);

/// Degree-law JSON: {"entries": [[b, r, bi, p], ...]} or
/// {"poisson": {"mono": x, "bi": y}}.
DegreeTripleLaw law_from_json_text(const std::string& text);
DegreeTripleLaw law_from_json_file(const std::string& path);

}  // namespace graphalign
