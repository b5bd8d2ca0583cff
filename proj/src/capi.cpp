// SPDX-License-Identifier: Apache-2.0
#include "graphalign.h"

#include <exception>
#include <new>
#include <optional>
#include <string>

#include "graphalign/aligner.hpp"
#include "graphalign/ensembles.hpp"
#include "graphalign/errors.hpp"
#include "graphalign/estimators.hpp"
#include "graphalign/harness.hpp"
#include "graphalign/metrics.hpp"

using namespace graphalign;

struct ga_pair {
  GraphPairInstance instance;
  std::optional<ColoredGraph> colored;
};

struct ga_scores {
  ScoreMatrix scores;
};

struct ga_map {
  PartialMap map;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ga_status guarded(Fn&& fn) {
  try {
    fn();
    return GA_OK;
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return GA_ERROR_CONFIG;
  } catch (const CapacityError& e) {
    g_last_error = e.what();
    return GA_ERROR_CAPACITY;
  } catch (const DataError& e) {
    g_last_error = e.what();
    return GA_ERROR_DATA;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GA_ERROR_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GA_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GA_ERROR_INTERNAL;
  }
}

ga_status require(bool ok, const char* message) {
  if (ok) return GA_OK;
  g_last_error = message;
  return GA_ERROR_CONFIG;
}

AlignOptions make_opts(int32_t degree_cap, int32_t threads) {
  AlignOptions opts;
  if (degree_cap > 0) opts.degree_cap = degree_cap;
  if (threads > 0) opts.threads = threads;
  return opts;
}

}  // namespace

extern "C" {

const char* ga_version(void) { return "0.1.0"; }

const char* ga_last_error(void) { return g_last_error.c_str(); }

ga_status ga_pair_sample_er(uint32_t n, double lambda, double s, uint64_t seed,
                            ga_pair** out) {
  if (ga_status st = require(out != nullptr, "null output handle")) return st;
  return guarded([&] {
    auto [colored, instance] =
        sample_correlated_er({static_cast<int>(n), lambda, s}, seed);
    *out = new ga_pair{std::move(instance), std::move(colored)};
  });
}

ga_status ga_pair_sample_config(const char* law_json, uint32_t n,
                                uint64_t seed, uint32_t max_retries,
                                ga_pair** out) {
  if (ga_status st = require(out && law_json, "null argument")) return st;
  return guarded([&] {
    const DegreeTripleLaw law = law_from_json_text(law_json);
    auto [colored, instance] = sample_configuration_correlated(
        law, static_cast<int>(n), seed,
        max_retries == 0 ? 1000 : static_cast<int>(max_retries));
    *out = new ga_pair{std::move(instance), std::move(colored)};
  });
}

ga_status ga_pair_attach_weights(ga_pair* pair, const char* model, double rho,
                                 uint64_t seed) {
  if (ga_status st = require(pair && model, "null argument")) return st;
  return guarded([&] {
    const WeightModel wm = WeightModel::from_name(model, rho);
    if (!pair->colored.has_value())
      pair->colored = colored_from_instance(pair->instance);
    pair->instance =
        attach_weights(std::move(pair->instance), *pair->colored, wm, seed);
  });
}

ga_status ga_pair_load(const char* path, ga_pair** out) {
  if (ga_status st = require(out && path, "null argument")) return st;
  return guarded([&] { *out = new ga_pair{load_pair(path), std::nullopt}; });
}

ga_status ga_pair_save(const ga_pair* pair, const char* path) {
  if (ga_status st = require(pair && path, "null argument")) return st;
  return guarded([&] { save_pair(pair->instance, path); });
}

int32_t ga_pair_num_vertices(const ga_pair* pair) {
  return pair == nullptr ? -1 : pair->instance.n();
}

int32_t ga_pair_num_edges_a(const ga_pair* pair) {
  return pair == nullptr ? -1 : pair->instance.graph_a.num_edges();
}

int32_t ga_pair_num_edges_b(const ga_pair* pair) {
  return pair == nullptr ? -1 : pair->instance.graph_b.num_edges();
}

int32_t ga_pair_has_ground_truth(const ga_pair* pair) {
  return pair != nullptr && pair->instance.ground_truth.has_value() ? 1 : 0;
}

int32_t ga_pair_is_weighted(const ga_pair* pair) {
  return pair != nullptr && pair->instance.weighted() ? 1 : 0;
}

void ga_pair_free(ga_pair* pair) { delete pair; }

ga_status ga_align_er(const ga_pair* pair, double lambda, double s,
                      int32_t depth, int32_t degree_cap, int32_t threads,
                      ga_scores** out) {
  if (ga_status st = require(pair && out, "null argument")) return st;
  return guarded([&] {
    *out = new ga_scores{run_mp_er(pair->instance, lambda, s, depth,
                                   make_opts(degree_cap, threads))};
  });
}

ga_status ga_align_general(const ga_pair* pair, const char* law_json,
                           int32_t depth, int32_t degree_cap, int32_t threads,
                           ga_scores** out) {
  if (ga_status st = require(pair && out && law_json, "null argument"))
    return st;
  return guarded([&] {
    const DegreeTripleLaw law = law_from_json_text(law_json);
    *out = new ga_scores{run_mp_general(pair->instance, law, depth,
                                        make_opts(degree_cap, threads))};
  });
}

ga_status ga_align_weighted_er(const ga_pair* pair, double lambda, double s,
                               const char* model, double rho, int32_t depth,
                               int32_t degree_cap, int32_t threads,
                               ga_scores** out) {
  if (ga_status st = require(pair && out && model, "null argument")) return st;
  return guarded([&] {
    *out = new ga_scores{run_mp_weighted(
        pair->instance, WeightedBase::er(lambda, s),
        WeightModel::from_name(model, rho), depth,
        make_opts(degree_cap, threads))};
  });
}

ga_status ga_align_weighted_general(const ga_pair* pair, const char* law_json,
                                    const char* model, double rho,
                                    int32_t depth, int32_t degree_cap,
                                    int32_t threads, ga_scores** out) {
  if (ga_status st = require(pair && out && model && law_json, "null argument"))
    return st;
  return guarded([&] {
    const DegreeTripleLaw law = law_from_json_text(law_json);
    *out = new ga_scores{run_mp_weighted(
        pair->instance, WeightedBase::general(law),
        WeightModel::from_name(model, rho), depth,
        make_opts(degree_cap, threads))};
  });
}

int32_t ga_scores_n(const ga_scores* scores) {
  return scores == nullptr ? -1 : scores->scores.n();
}

int32_t ga_scores_depth(const ga_scores* scores) {
  return scores == nullptr ? -1 : scores->scores.depth();
}

double ga_scores_get(const ga_scores* scores, int32_t i, int32_t j) {
  return scores->scores.at(i, j);
}

ga_status ga_scores_save(const ga_scores* scores, const char* path) {
  if (ga_status st = require(scores && path, "null argument")) return st;
  return guarded([&] { save_scores(scores->scores, path); });
}

void ga_scores_free(ga_scores* scores) { delete scores; }

ga_status ga_estimate_argmax(const ga_scores* scores, uint64_t seed,
                             ga_map** out) {
  if (ga_status st = require(scores && out, "null argument")) return st;
  return guarded(
      [&] { *out = new ga_map{argmax_estimator(scores->scores, seed)}; });
}

ga_status ga_estimate_threshold(const ga_scores* scores, double threshold,
                                ga_map** out) {
  if (ga_status st = require(scores && out, "null argument")) return st;
  return guarded([&] {
    *out = new ga_map{
        threshold_estimator(row_normalize(scores->scores), threshold)};
  });
}

int32_t ga_map_n(const ga_map* map) { return map == nullptr ? -1 : map->map.n(); }

int32_t ga_map_get(const ga_map* map, int32_t i) {
  return map->map.assignment[i];
}

int32_t ga_map_num_assigned(const ga_map* map) {
  return map == nullptr ? -1 : map->map.num_assigned();
}

ga_status ga_map_save(const ga_map* map, const char* path) {
  if (ga_status st = require(map && path, "null argument")) return st;
  return guarded([&] { save_map(map->map, path); });
}

void ga_map_free(ga_map* map) { delete map; }

ga_status ga_eval_overlap(const ga_map* map, const ga_pair* pair,
                          double* out) {
  if (ga_status st = require(map && pair && out, "null argument")) return st;
  return guarded([&] {
    if (!pair->instance.ground_truth.has_value())
      throw DataError("pair has no ground truth");
    *out = overlap(map->map, *pair->instance.ground_truth).value;
  });
}

ga_status ga_eval_loss(const ga_map* map, const ga_pair* pair, double* out) {
  if (ga_status st = require(map && pair && out, "null argument")) return st;
  return guarded([&] {
    if (!pair->instance.ground_truth.has_value())
      throw DataError("pair has no ground truth");
    *out = hamming_loss(map->map, *pair->instance.ground_truth);
  });
}

double ga_it_upper_bound(double x) { return it_upper_bound(x); }

ga_status ga_tree_kl(double lambda, double s, int32_t depth, int32_t samples,
                     uint64_t seed, int32_t threads, double* mean,
                     double* std_error) {
  if (ga_status st = require(mean && std_error, "null output")) return st;
  return guarded([&] {
    const KlEstimate est = estimate_kl(lambda, s, depth, samples, seed,
                                       threads > 0 ? threads : 1);
    *mean = est.mean;
    *std_error = est.std_error;
  });
}

ga_status ga_sweep_run(const char* config_path, const char* out_csv,
                       const char* optimal_csv, const char* crossover_csv) {
  if (ga_status st = require(config_path != nullptr, "null config path"))
    return st;
  return guarded([&] {
    ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
    if (out_csv != nullptr) config.out_path = out_csv;
    if (config.out_path.empty())
      throw ConfigError("sweep: no output path given");
    const std::vector<ResultRow> rows = run_experiment(config);
    write_csv_file(rows, config.out_path);
    if (optimal_csv != nullptr || crossover_csv != nullptr) {
      const auto optimal = select_optimal_depth(rows);
      if (optimal_csv != nullptr) write_optimal_csv(optimal, optimal_csv);
      if (crossover_csv != nullptr)
        write_crossover_csv(crossover_line(optimal, config.crossover_r),
                            config.crossover_r, crossover_csv);
    }
  });
}

ga_status ga_tree_kl_csv(double lambda, const double* s_grid, size_t s_count,
                         int32_t d_min, int32_t d_max, int32_t samples,
                         uint64_t seed, int32_t threads, const char* out_csv) {
  if (ga_status st =
          require(s_grid && s_count > 0 && out_csv, "null argument"))
    return st;
  return guarded([&] {
    const std::vector<double> grid(s_grid, s_grid + s_count);
    const auto rows = run_tree_kl(lambda, grid, d_min, d_max, samples, seed,
                                  threads > 0 ? threads : 1);
    write_tree_kl_csv(rows, out_csv);
  });
}

}  // extern "C"
