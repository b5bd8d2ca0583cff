// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; all functionality goes through the C API of
// the shared library.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphalign.h"

namespace {

int fail(ga_status st) {
  std::fprintf(stderr, "error: %s\n", ga_last_error());
  return static_cast<int>(st);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.c_str());
    std::exit(4);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct PairGuard {
  ga_pair* p = nullptr;
  ~PairGuard() { ga_pair_free(p); }
};
struct ScoresGuard {
  ga_scores* p = nullptr;
  ~ScoresGuard() { ga_scores_free(p); }
};
struct MapGuard {
  ga_map* p = nullptr;
  ~MapGuard() { ga_map_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphalign: alignment of correlated sparse random graphs"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "sample a correlated pair");
  std::string gen_ensemble = "er";
  int gen_n = 0;
  double gen_lambda = 0.0, gen_s = 0.0, gen_rho = 0.0;
  std::string gen_law, gen_weights, gen_out;
  std::uint64_t gen_seed = 0;
  int gen_retries = 1000;
  gen->add_option("--ensemble", gen_ensemble, "er | config")
      ->check(CLI::IsMember({"er", "config"}));
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--lambda", gen_lambda, "average degree (er)");
  gen->add_option("--s", gen_s, "correlation (er)");
  gen->add_option("--law", gen_law, "degree-law JSON file (config)");
  gen->add_option("--weights", gen_weights,
                  "weight model: product | gaussian | equal");
  gen->add_option("--rho", gen_rho, "gaussian weight correlation");
  gen->add_option("--max-retries", gen_retries, "rejection budget (config)");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "pair file path")->required();

  // ---- align ----
  auto* al = app.add_subcommand("align", "score and match a pair file");
  std::string al_pair, al_mode = "er", al_law, al_weights, al_scores_out,
              al_map_out, al_estimator = "argmax";
  double al_lambda = 0.0, al_s = 0.0, al_rho = 0.0, al_threshold = 0.5;
  int al_d = 1, al_cap = 25, al_threads = 1;
  std::uint64_t al_seed = 0;
  al->add_option("--pair", al_pair, "pair file")->required();
  al->add_option("--mode", al_mode, "er | general | weighted")
      ->check(CLI::IsMember({"er", "general", "weighted"}));
  al->add_option("--lambda", al_lambda, "average degree");
  al->add_option("--s", al_s, "correlation");
  al->add_option("--law", al_law, "degree-law JSON file (general base)");
  al->add_option("--weights", al_weights, "weight model (weighted mode)");
  al->add_option("--rho", al_rho, "gaussian weight correlation");
  al->add_option("--d", al_d, "depth");
  al->add_option("--d-max", al_d, "alias of --d");
  al->add_option("--degree-cap", al_cap, "kernel degree cap");
  al->add_option("--threads", al_threads, "worker threads");
  al->add_option("--estimator", al_estimator, "argmax | threshold")
      ->check(CLI::IsMember({"argmax", "threshold"}));
  al->add_option("--threshold", al_threshold, "assignment threshold");
  al->add_option("--seed", al_seed, "tie-break seed");
  al->add_option("--scores-out", al_scores_out, "score matrix output path");
  al->add_option("--map-out", al_map_out, "assignment output path");

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "run an experiment config");
  std::string sw_config, sw_out, sw_optimal, sw_crossover;
  sw->add_option("--config", sw_config, "JSON config file")->required();
  sw->add_option("--out", sw_out, "result CSV (overrides config)");
  sw->add_option("--optimal-out", sw_optimal, "optimal-depth CSV");
  sw->add_option("--crossover-out", sw_crossover, "crossover CSV");

  // ---- tree-kl ----
  auto* tk = app.add_subcommand("tree-kl", "tree-problem divergence sweep");
  double tk_lambda = 1.5;
  std::vector<double> tk_s;
  int tk_dmin = 1, tk_dmax = 1, tk_samples = 10000, tk_threads = 1;
  std::uint64_t tk_seed = 0;
  std::string tk_out;
  tk->add_option("--lambda", tk_lambda, "average degree")->required();
  tk->add_option("--s", tk_s, "correlation values")->required();
  tk->add_option("--d-min", tk_dmin, "smallest depth");
  tk->add_option("--d-max", tk_dmax, "largest depth")->required();
  tk->add_option("--samples", tk_samples, "samples per point");
  tk->add_option("--seed", tk_seed, "rng seed");
  tk->add_option("--threads", tk_threads, "worker threads");
  tk->add_option("--out", tk_out, "output CSV")->required();

  // ---- bound ----
  auto* bd = app.add_subcommand("bound", "partial-recovery upper bound");
  double bd_x = 0.0;
  bd->add_option("x", bd_x, "product lambda*s")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // config error
  }

  if (gen->parsed()) {
    PairGuard pair;
    ga_status st;
    if (gen_ensemble == "er") {
      st = ga_pair_sample_er(gen_n, gen_lambda, gen_s, gen_seed, &pair.p);
    } else {
      if (gen_law.empty()) {
        std::fprintf(stderr, "error: config ensemble needs --law\n");
        return 2;
      }
      st = ga_pair_sample_config(read_file(gen_law).c_str(), gen_n, gen_seed,
                                 gen_retries, &pair.p);
    }
    if (st != GA_OK) return fail(st);
    if (!gen_weights.empty()) {
      st = ga_pair_attach_weights(pair.p, gen_weights.c_str(), gen_rho,
                                  gen_seed + 1);
      if (st != GA_OK) return fail(st);
    }
    st = ga_pair_save(pair.p, gen_out.c_str());
    if (st != GA_OK) return fail(st);
    std::printf("wrote %s: n=%d m_a=%d m_b=%d\n", gen_out.c_str(),
                ga_pair_num_vertices(pair.p), ga_pair_num_edges_a(pair.p),
                ga_pair_num_edges_b(pair.p));
    return 0;
  }

  if (al->parsed()) {
    PairGuard pair;
    ga_status st = ga_pair_load(al_pair.c_str(), &pair.p);
    if (st != GA_OK) return fail(st);

    ScoresGuard scores;
    if (al_mode == "er") {
      st = ga_align_er(pair.p, al_lambda, al_s, al_d, al_cap, al_threads,
                       &scores.p);
    } else if (al_mode == "general") {
      if (al_law.empty()) {
        std::fprintf(stderr, "error: general mode needs --law\n");
        return 2;
      }
      st = ga_align_general(pair.p, read_file(al_law).c_str(), al_d, al_cap,
                            al_threads, &scores.p);
    } else {
      if (al_weights.empty()) {
        std::fprintf(stderr, "error: weighted mode needs --weights\n");
        return 2;
      }
      if (!al_law.empty())
        st = ga_align_weighted_general(pair.p, read_file(al_law).c_str(),
                                       al_weights.c_str(), al_rho, al_d,
                                       al_cap, al_threads, &scores.p);
      else
        st = ga_align_weighted_er(pair.p, al_lambda, al_s, al_weights.c_str(),
                                  al_rho, al_d, al_cap, al_threads, &scores.p);
    }
    if (st != GA_OK) return fail(st);

    if (!al_scores_out.empty()) {
      st = ga_scores_save(scores.p, al_scores_out.c_str());
      if (st != GA_OK) return fail(st);
    }

    MapGuard map;
    if (al_estimator == "argmax")
      st = ga_estimate_argmax(scores.p, al_seed, &map.p);
    else
      st = ga_estimate_threshold(scores.p, al_threshold, &map.p);
    if (st != GA_OK) return fail(st);
    if (!al_map_out.empty()) {
      st = ga_map_save(map.p, al_map_out.c_str());
      if (st != GA_OK) return fail(st);
    }

    if (ga_pair_has_ground_truth(pair.p)) {
      double ov = 0.0, loss = 0.0;
      if (ga_eval_overlap(map.p, pair.p, &ov) == GA_OK &&
          ga_eval_loss(map.p, pair.p, &loss) == GA_OK)
        std::printf("overlap=%.6f loss=%.6f assigned=%d/%d\n", ov, loss,
                    ga_map_num_assigned(map.p), ga_map_n(map.p));
    } else {
      std::printf("assigned=%d/%d (no ground truth in pair file)\n",
                  ga_map_num_assigned(map.p), ga_map_n(map.p));
    }
    return 0;
  }

  if (sw->parsed()) {
    const ga_status st = ga_sweep_run(
        sw_config.c_str(), sw_out.empty() ? nullptr : sw_out.c_str(),
        sw_optimal.empty() ? nullptr : sw_optimal.c_str(),
        sw_crossover.empty() ? nullptr : sw_crossover.c_str());
    if (st != GA_OK) return fail(st);
    return 0;
  }

  if (tk->parsed()) {
    const ga_status st =
        ga_tree_kl_csv(tk_lambda, tk_s.data(), tk_s.size(), tk_dmin, tk_dmax,
                       tk_samples, tk_seed, tk_threads, tk_out.c_str());
    if (st != GA_OK) return fail(st);
    return 0;
  }

  if (bd->parsed()) {
    std::printf("%.12f\n", ga_it_upper_bound(bd_x));
    return 0;
  }

  return 2;
}
