/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the graphalign library: generation of correlated graph
 * pairs, the pair-message alignment algorithm, estimators, evaluation
 * metrics and the experiment harness. All objects are opaque handles
 * owned by the caller through the matching *_free function; functions
 * return GA_OK or an error status, with a per-thread message available
 * from ga_last_error().
 */
#ifndef GRAPHALIGN_H
#define GRAPHALIGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GA_API __declspec(dllexport)
#else
#define GA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ga_status {
  GA_OK = 0,
  GA_ERROR_INTERNAL = 1,
  GA_ERROR_CONFIG = 2,   /* invalid parameters or configuration */
  GA_ERROR_CAPACITY = 3, /* degree cap, memory guard or retry budget */
  GA_ERROR_DATA = 4      /* malformed files or inconsistent data */
} ga_status;

typedef struct ga_pair ga_pair;     /* observed graph pair */
typedef struct ga_scores ga_scores; /* n x n log-score matrix */
typedef struct ga_map ga_map;       /* vertex correspondence estimate */

GA_API const char* ga_version(void);
/* Message for the most recent failing call on this thread. */
GA_API const char* ga_last_error(void);

/* ---- generation ---------------------------------------------------- */

/* Correlated two-graph sampler with edge probabilities lambda*s/n
 * (both), lambda*(1-s)/n (each single graph). */
GA_API ga_status ga_pair_sample_er(uint32_t n, double lambda, double s,
                                   uint64_t seed, ga_pair** out);

/* Correlated configuration model; law_json holds either
 * {"entries": [[blue, red, bi, prob], ...]} or
 * {"poisson": {"mono": x, "bi": y}}. */
GA_API ga_status ga_pair_sample_config(const char* law_json, uint32_t n,
                                       uint64_t seed, uint32_t max_retries,
                                       ga_pair** out);

/* Draws edge weights in place; model is "product", "gaussian" (uses rho)
 * or "equal". Requires a pair with ground truth. */
GA_API ga_status ga_pair_attach_weights(ga_pair* pair, const char* model,
                                        double rho, uint64_t seed);

GA_API ga_status ga_pair_load(const char* path, ga_pair** out);
GA_API ga_status ga_pair_save(const ga_pair* pair, const char* path);

GA_API int32_t ga_pair_num_vertices(const ga_pair* pair);
GA_API int32_t ga_pair_num_edges_a(const ga_pair* pair);
GA_API int32_t ga_pair_num_edges_b(const ga_pair* pair);
GA_API int32_t ga_pair_has_ground_truth(const ga_pair* pair);
GA_API int32_t ga_pair_is_weighted(const ga_pair* pair);
GA_API void ga_pair_free(ga_pair* pair);

/* ---- alignment ------------------------------------------------------ */

GA_API ga_status ga_align_er(const ga_pair* pair, double lambda, double s,
                             int32_t depth, int32_t degree_cap,
                             int32_t threads, ga_scores** out);

GA_API ga_status ga_align_general(const ga_pair* pair, const char* law_json,
                                  int32_t depth, int32_t degree_cap,
                                  int32_t threads, ga_scores** out);

/* Weighted run over the Poisson base model. */
GA_API ga_status ga_align_weighted_er(const ga_pair* pair, double lambda,
                                      double s, const char* model, double rho,
                                      int32_t depth, int32_t degree_cap,
                                      int32_t threads, ga_scores** out);

/* Weighted run over an explicit degree law. */
GA_API ga_status ga_align_weighted_general(const ga_pair* pair,
                                           const char* law_json,
                                           const char* model, double rho,
                                           int32_t depth, int32_t degree_cap,
                                           int32_t threads, ga_scores** out);

GA_API int32_t ga_scores_n(const ga_scores* scores);
GA_API int32_t ga_scores_depth(const ga_scores* scores);
/* Log-score; -HUGE_VAL encodes an impossible pairing. */
GA_API double ga_scores_get(const ga_scores* scores, int32_t i, int32_t j);
GA_API ga_status ga_scores_save(const ga_scores* scores, const char* path);
GA_API void ga_scores_free(ga_scores* scores);

/* ---- estimators ------------------------------------------------------ */

GA_API ga_status ga_estimate_argmax(const ga_scores* scores, uint64_t seed,
                                    ga_map** out);
GA_API ga_status ga_estimate_threshold(const ga_scores* scores,
                                       double threshold, ga_map** out);

GA_API int32_t ga_map_n(const ga_map* map);
/* Assigned vertex or -1. */
GA_API int32_t ga_map_get(const ga_map* map, int32_t i);
GA_API int32_t ga_map_num_assigned(const ga_map* map);
GA_API ga_status ga_map_save(const ga_map* map, const char* path);
GA_API void ga_map_free(ga_map* map);

/* ---- metrics --------------------------------------------------------- */

/* Fraction of correct matches against the pair's ground truth (among the
 * assigned vertices for partial maps). */
GA_API ga_status ga_eval_overlap(const ga_map* map, const ga_pair* pair,
                                 double* out);
/* Hamming loss in [0, 2]. */
GA_API ga_status ga_eval_loss(const ga_map* map, const ga_pair* pair,
                              double* out);

/* Largest non-negative solution of 1 - c = exp(-x c); 0 for x <= 1. */
GA_API double ga_it_upper_bound(double x);

GA_API ga_status ga_tree_kl(double lambda, double s, int32_t depth,
                            int32_t samples, uint64_t seed, int32_t threads,
                            double* mean, double* std_error);

/* ---- harness ---------------------------------------------------------- */

/* Runs a sweep described by a JSON config file; writes the result CSV to
 * out_csv (or the config's "out" when null). optimal_csv and
 * crossover_csv are optional side outputs. */
GA_API ga_status ga_sweep_run(const char* config_path, const char* out_csv,
                              const char* optimal_csv,
                              const char* crossover_csv);

GA_API ga_status ga_tree_kl_csv(double lambda, const double* s_grid,
                                size_t s_count, int32_t d_min, int32_t d_max,
                                int32_t samples, uint64_t seed,
                                int32_t threads, const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHALIGN_H */
