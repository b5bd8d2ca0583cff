// SPDX-License-Identifier: Apache-2.0
#include "graphalign/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "graphalign/errors.hpp"
#include "json.hpp"

namespace graphalign {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<double> as_double_grid(const json& j, const char* name) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else {
    out.push_back(j.get<double>());
  }
  if (out.empty())
    throw ConfigError(std::string("config: empty grid '") + name + "'");
  return out;
}

std::vector<int> as_int_grid(const json& j, const char* name) {
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<int>());
  } else {
    out.push_back(j.get<int>());
  }
  if (out.empty())
    throw ConfigError(std::string("config: empty grid '") + name + "'");
  return out;
}

DegreeTripleLaw law_from_json(const json& j) {
  if (j.contains("poisson")) {
    const auto& p = j.at("poisson");
    return DegreeTripleLaw::poisson_product(p.at("mono").get<double>(),
                                            p.at("bi").get<double>());
  }
  if (j.contains("entries")) {
    std::vector<DegreeTripleLaw::Entry> entries;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4)
        throw ConfigError("law: each entry must be [blue, red, bi, prob]");
      entries.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(),
                           e[3].get<double>());
    }
    return DegreeTripleLaw::from_entries(entries);
  }
  throw ConfigError("law: expected 'entries' or 'poisson'");
}

WeightModel model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double rho = j.value("rho", 0.0);
  return WeightModel::from_name(kind, rho);
}

EnsembleSpec ensemble_from_json(const json& j) {
  EnsembleSpec spec;
  const std::string type = j.value("type", "er");
  if (type == "er") {
    spec.kind = EnsembleSpec::Kind::er;
  } else if (type == "config") {
    spec.kind = EnsembleSpec::Kind::configuration;
    spec.law = law_from_json(j.at("law"));
  } else if (type == "weighted") {
    const auto& base = j.at("base");
    const std::string base_type = base.value("type", "er");
    if (base_type == "er") {
      spec.kind = EnsembleSpec::Kind::weighted_er;
    } else if (base_type == "config") {
      spec.kind = EnsembleSpec::Kind::weighted_configuration;
      spec.law = law_from_json(base.at("law"));
    } else {
      throw ConfigError("ensemble: unknown base type '" + base_type + "'");
    }
    spec.model = model_from_json(j.at("model"));
  } else {
    throw ConfigError("ensemble: unknown type '" + type + "'");
  }
  spec.max_retries = j.value("max_retries", 1000);
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("config: empty n grid");
  if (d_max < 1) throw ConfigError("config: d_max must be >= 1");
  if (samples < 1) throw ConfigError("config: samples must be >= 1");
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("config: threshold must be in [0, 1]");
  const bool needs_er_params =
      ensemble.kind == EnsembleSpec::Kind::er ||
      ensemble.kind == EnsembleSpec::Kind::weighted_er;
  if (needs_er_params && (lambda_grid.empty() || s_grid.empty()))
    throw ConfigError("config: er ensembles need lambda and s grids");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    ExperimentConfig c;
    if (j.contains("ensemble")) c.ensemble = ensemble_from_json(j.at("ensemble"));
    c.n_grid = as_int_grid(j.at("n"), "n");
    if (j.contains("lambda")) c.lambda_grid = as_double_grid(j.at("lambda"), "lambda");
    if (j.contains("s")) c.s_grid = as_double_grid(j.at("s"), "s");
    if (c.lambda_grid.empty()) c.lambda_grid = {0.0};
    if (c.s_grid.empty()) c.s_grid = {0.0};
    c.d_max = j.value("d_max", 1);
    c.samples = j.value("samples", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.threshold = j.value("threshold", 0.5);
    c.crossover_r = j.value("crossover_R", 0.1);
    c.degree_cap = j.value("degree_cap", kDefaultDegreeCap);
    c.threads = j.value("threads", 1);
    c.out_path = j.value("out", std::string{});
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

DegreeTripleLaw law_from_json_text(const std::string& text) {
  try {
    return law_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("law: ") + e.what());
  }
}

DegreeTripleLaw law_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open law file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return law_from_json_text(ss.str());
}

namespace {

struct SampleOutcome {
  std::vector<EvalReport> by_depth;
  bool failed = false;
  std::string failure;
};

SampleOutcome run_one_sample(const ExperimentConfig& config, int n,
                             double lambda, double s,
                             std::uint64_t sample_seed) {
  SampleOutcome out;
  out.by_depth.resize(config.d_max);

  AlignOptions opts;
  opts.degree_cap = config.degree_cap;
  opts.threads = 1;

  GraphPairInstance instance;
  ColoredGraph colored;
  switch (config.ensemble.kind) {
    case EnsembleSpec::Kind::er: {
      std::tie(colored, instance) =
          sample_correlated_er({n, lambda, s}, sample_seed);
      break;
    }
    case EnsembleSpec::Kind::configuration:
    case EnsembleSpec::Kind::weighted_configuration: {
      std::tie(colored, instance) = sample_configuration_correlated(
          *config.ensemble.law, n, sample_seed, config.ensemble.max_retries);
      break;
    }
    case EnsembleSpec::Kind::weighted_er: {
      std::tie(colored, instance) =
          sample_correlated_er({n, lambda, s}, sample_seed);
      break;
    }
  }
  const bool weighted =
      config.ensemble.kind == EnsembleSpec::Kind::weighted_er ||
      config.ensemble.kind == EnsembleSpec::Kind::weighted_configuration;
  if (weighted)
    instance = attach_weights(std::move(instance), colored,
                              *config.ensemble.model,
                              mix_seed({sample_seed, 0x77}));

  const auto on_depth = [&](int d, const ScoreMatrix& scores) {
    out.by_depth[d - 1] =
        evaluate(scores, *instance.ground_truth, instance.graph_b,
                 config.threshold,
                 mix_seed({sample_seed, static_cast<std::uint64_t>(d)}));
  };

  switch (config.ensemble.kind) {
    case EnsembleSpec::Kind::er:
      run_mp_er_scan(instance, lambda, s, config.d_max, opts, {}, on_depth);
      break;
    case EnsembleSpec::Kind::configuration:
      run_mp_general_scan(instance, *config.ensemble.law, config.d_max, opts,
                          {}, on_depth);
      break;
    case EnsembleSpec::Kind::weighted_er:
      run_mp_weighted_scan(instance, WeightedBase::er(lambda, s),
                           *config.ensemble.model, config.d_max, opts, {},
                           on_depth);
      break;
    case EnsembleSpec::Kind::weighted_configuration:
      run_mp_weighted_scan(instance, WeightedBase::general(*config.ensemble.law),
                           *config.ensemble.model, config.d_max, opts, {},
                           on_depth);
      break;
  }
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRow> rows;

  for (int n : config.n_grid) {
    for (double lambda : config.lambda_grid) {
      for (double s : config.s_grid) {
        std::vector<SampleOutcome> outcomes(config.samples);
        const int workers = std::max(1, std::min(config.threads, config.samples));
        std::exception_ptr error;
        std::mutex error_mu;
        auto body = [&](int w) {
          for (int k = w; k < config.samples; k += workers) {
            const std::uint64_t sample_seed =
                mix_seed({config.seed, static_cast<std::uint64_t>(n),
                          double_bits(lambda), double_bits(s),
                          static_cast<std::uint64_t>(k)});
            try {
              outcomes[k] = run_one_sample(config, n, lambda, s, sample_seed);
            } catch (const CapacityError& e) {
              outcomes[k].failed = true;
              outcomes[k].failure = e.what();
            } catch (...) {
              std::lock_guard<std::mutex> lk(error_mu);
              if (!error) error = std::current_exception();
              return;
            }
          }
        };
        if (workers == 1) {
          body(0);
        } else {
          std::vector<std::thread> pool;
          for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
          for (auto& t : pool) t.join();
        }
        if (error) std::rethrow_exception(error);

        int failed = 0;
        for (const auto& o : outcomes)
          if (o.failed) ++failed;
        const int good = config.samples - failed;

        for (int d = 1; d <= config.d_max; ++d) {
          ResultRow row;
          row.n = n;
          row.lambda = lambda;
          row.s = s;
          row.d = d;
          row.samples = good;
          if (failed > 0)
            row.status = "capacity:" + std::to_string(failed) + "/" +
                         std::to_string(config.samples);
          if (good > 0) {
            double ov_sum = 0.0, ov_sq = 0.0;
            for (const auto& o : outcomes) {
              if (o.failed) continue;
              const EvalReport& r = o.by_depth[d - 1];
              ov_sum += r.overlap;
              row.loss_mean += r.hamming;
              row.ov_hat_mean += r.estimated_overlap;
              row.a1 += r.diagnostics.argmax_score;
              row.a2 += r.diagnostics.aligned_score;
              row.a3 += r.diagnostics.quasi_aligned_score;
              row.a4 += r.diagnostics.random_pair_score;
              row.f_t += r.assigned_fraction;
            }
            row.overlap_mean = ov_sum / good;
            for (const auto& o : outcomes) {
              if (o.failed) continue;
              const double dev = o.by_depth[d - 1].overlap - row.overlap_mean;
              ov_sq += dev * dev;
            }
            row.overlap_se =
                good > 1 ? std::sqrt(ov_sq / (good - 1) / good) : 0.0;
            row.loss_mean /= good;
            row.ov_hat_mean /= good;
            row.a1 /= good;
            row.a2 /= good;
            row.a3 /= good;
            row.a4 /= good;
            row.f_t /= good;
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "n,lambda,s,d,samples,overlap_mean,overlap_se,loss_mean,ov_hat_mean,"
         "A1,A2,A3,A4,fT,status\n";
  for (const ResultRow& r : rows) {
    out << r.n << ',' << format_double(r.lambda) << ',' << format_double(r.s)
        << ',' << r.d << ',' << r.samples << ','
        << format_double(r.overlap_mean) << ',' << format_double(r.overlap_se)
        << ',' << format_double(r.loss_mean) << ','
        << format_double(r.ov_hat_mean) << ',' << format_double(r.a1) << ','
        << format_double(r.a2) << ',' << format_double(r.a3) << ','
        << format_double(r.a4) << ',' << format_double(r.f_t) << ','
        << r.status << '\n';
  }
}

void write_csv_file(const std::vector<ResultRow>& rows,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(rows, out);
  if (!out) throw DataError("write failure on '" + path + "'");
}

std::vector<OptimalDepthRow> select_optimal_depth(
    const std::vector<ResultRow>& rows) {
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::map<int, const ResultRow*>> groups;
  for (const ResultRow& r : rows) groups[{r.n, r.lambda, r.s}][r.d] = &r;

  std::vector<OptimalDepthRow> out;
  for (const auto& [key, by_depth] : groups) {
    const int d_max = by_depth.rbegin()->first;
    for (int d = 1; d <= d_max; ++d)
      if (by_depth.find(d) == by_depth.end())
        throw DataError("select_optimal_depth: missing depth " +
                        std::to_string(d) + " for a grid point");
    OptimalDepthRow o;
    o.n = std::get<0>(key);
    o.lambda = std::get<1>(key);
    o.s = std::get<2>(key);
    o.d_star = 1;
    o.overlap = by_depth.at(1)->overlap_mean;
    for (int d = 2; d <= d_max; ++d) {
      const double v = by_depth.at(d)->overlap_mean;
      if (v > o.overlap) {
        o.overlap = v;
        o.d_star = d;
      }
    }
    o.truncated = o.d_star == d_max && d_max > 1;
    out.push_back(o);
  }
  return out;
}

std::vector<CrossoverRow> crossover_line(
    const std::vector<OptimalDepthRow>& rows, double r_threshold) {
  using Key = std::pair<int, double>;
  std::map<Key, std::vector<const OptimalDepthRow*>> groups;
  for (const OptimalDepthRow& r : rows) groups[{r.n, r.lambda}].push_back(&r);

  std::vector<CrossoverRow> out;
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const OptimalDepthRow* a, const OptimalDepthRow* b) {
                return a->s < b->s;
              });
    CrossoverRow c;
    c.n = key.first;
    c.lambda = key.second;
    for (const OptimalDepthRow* r : group) {
      if (r->overlap > r_threshold) {
        c.found = true;
        c.s_min = r->s;
        break;
      }
    }
    out.push_back(c);
  }
  return out;
}

void write_optimal_csv(const std::vector<OptimalDepthRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "n,lambda,s,d_star,overlap,truncated\n";
  for (const OptimalDepthRow& r : rows)
    out << r.n << ',' << format_double(r.lambda) << ',' << format_double(r.s)
        << ',' << r.d_star << ',' << format_double(r.overlap) << ','
        << (r.truncated ? 1 : 0) << '\n';
}

void write_crossover_csv(const std::vector<CrossoverRow>& rows,
                         double r_threshold, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "n,lambda,R,s_min\n";
  for (const CrossoverRow& r : rows) {
    out << r.n << ',' << format_double(r.lambda) << ','
        << format_double(r_threshold) << ',';
    if (r.found)
      out << format_double(r.s_min);
    else
      out << "none";
    out << '\n';
  }
}

std::vector<TreeKlRow> run_tree_kl(double lambda,
                                   const std::vector<double>& s_grid,
                                   int d_min, int d_max, int samples,
                                   std::uint64_t seed, int threads) {
  if (d_min < 1 || d_max < d_min)
    throw ConfigError("tree-kl: invalid depth range");
  std::vector<TreeKlRow> out;
  for (double s : s_grid) {
    for (int d = d_min; d <= d_max; ++d) {
      const KlEstimate est =
          estimate_kl(lambda, s, d, samples,
                      mix_seed({seed, double_bits(s),
                                static_cast<std::uint64_t>(d)}),
                      threads);
      out.push_back({lambda, s, d, est.sample_count, est.mean, est.std_error});
    }
  }
  return out;
}

void write_tree_kl_csv(const std::vector<TreeKlRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "lambda,s,d,samples,kl_mean,kl_se\n";
  for (const TreeKlRow& r : rows)
    out << format_double(r.lambda) << ',' << format_double(r.s) << ',' << r.d
        << ',' << r.samples << ',' << format_double(r.kl_mean) << ','
        << format_double(r.kl_se) << '\n';
}

}  // namespace graphalign
