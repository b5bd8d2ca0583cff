// SPDX-License-Identifier: Apache-2.0
#include "graphalign/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "graphalign/errors.hpp"

namespace graphalign {

namespace {

/// Per-vertex incoming arcs; in_arcs[v][t] = (adj[v][t], id of the
/// directed edge adj[v][t] -> v). The outgoing id is the twin (id ^ 1).
struct Incidence {
  std::vector<std::vector<std::pair<int, int>>> in_arcs;

  explicit Incidence(const Graph& g) : in_arcs(g.n) {
    for (int k = 0; k < g.num_edges(); ++k) {
      const auto [u, v] = g.edges[k];
      // directed edge 2k is u->v, 2k+1 is v->u
      in_arcs[v].emplace_back(u, 2 * k);
      in_arcs[u].emplace_back(v, 2 * k + 1);
    }
  }
};

void parallel_for(int count, int threads,
                  const std::function<void(int, int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += threads) fn(i, w);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void check_cap(int l, int l2, int cap, int i, int i2, const char* what) {
  if (std::min(l, l2) > cap)
    throw CapacityError(std::string(what) + " at vertex pair (" +
                        std::to_string(i) + ", " + std::to_string(i2) +
                        "): min degree side " + std::to_string(std::min(l, l2)) +
                        " exceeds degree cap " + std::to_string(cap));
}

std::set<int> wanted_set(const std::vector<int>& depths, int depth) {
  std::set<int> w(depths.begin(), depths.end());
  if (w.empty())
    for (int t = 1; t <= depth; ++t) w.insert(t);
  return w;
}

void validate_common(const GraphPairInstance& instance, int depth) {
  if (instance.graph_a.n != instance.graph_b.n)
    throw DataError("aligner: graphs have different vertex counts");
  if (depth < 1) throw ConfigError("aligner: depth must be >= 1");
}

}  // namespace

void run_mp_er_scan(const GraphPairInstance& instance, double lambda, double s,
                    int depth, const AlignOptions& opts,
                    const std::vector<int>& depths, const DepthCallback& cb) {
  validate_common(instance, depth);
  if (instance.weighted())
    throw DataError("run_mp_er: weighted instance, use the weighted runner");
  if (!(lambda > 0.0) || s < 0.0 || s > 1.0)
    throw ConfigError("run_mp_er: invalid lambda or s");

  const Graph& A = instance.graph_a;
  const Graph& B = instance.graph_b;
  const int n = A.n;
  const Incidence ia(A), ib(B);
  MessageState ms(A, B);
  const std::set<int> want = wanted_set(depths, depth);

  std::vector<KernelWorkspace> workspaces(std::max(1, opts.threads));

  for (int t = 1; t <= depth; ++t) {
    const bool want_score = want.count(t) > 0;
    const bool want_msgs = t < depth;
    if (!want_score && !want_msgs) continue;
    ScoreMatrix scores(want_score ? n : 0, t);

    parallel_for(n, opts.threads, [&](int i, int worker) {
      KernelWorkspace& ws = workspaces[worker];
      const auto& arcs_a = ia.in_arcs[i];
      const int la = static_cast<int>(arcs_a.size());
      for (int i2 = 0; i2 < n; ++i2) {
        const auto& arcs_b = ib.in_arcs[i2];
        const int lb = static_cast<int>(arcs_b.size());
        check_cap(la, lb, opts.degree_cap, i, i2, "message passing");

        ws.gather.assign(la, lb);
        for (int a = 0; a < la; ++a) {
          const double* row =
              ms.prev.data() + static_cast<std::size_t>(arcs_a[a].second) * ms.mb2;
          for (int b = 0; b < lb; ++b)
            ws.gather.at(a, b) = row[arcs_b[b].second];
        }

        if (want_score)
          scores.at(i, i2) = log_lr_combine_er(la, lb, ws.gather, lambda, s,
                                               opts.degree_cap, ws);

        if (want_msgs && la > 0 && lb > 0) {
          for (int a = 0; a < la; ++a) {
            const int out_a = arcs_a[a].second ^ 1;
            double* dst = ms.cur.data() + static_cast<std::size_t>(out_a) * ms.mb2;
            for (int b = 0; b < lb; ++b) {
              ws.sub.assign(la - 1, lb - 1);
              for (int a2 = 0, ar = 0; a2 < la; ++a2) {
                if (a2 == a) continue;
                for (int b2 = 0, bc = 0; b2 < lb; ++b2) {
                  if (b2 == b) continue;
                  ws.sub.at(ar, bc++) = ws.gather.at(a2, b2);
                }
                ++ar;
              }
              dst[arcs_b[b].second ^ 1] = log_lr_combine_er(
                  la - 1, lb - 1, ws.sub, lambda, s, opts.degree_cap, ws);
            }
          }
        }
      }
    });

    if (want_score) cb(t, scores);
    if (want_msgs) ms.swap_buffers();
  }
}

ScoreMatrix run_mp_er(const GraphPairInstance& instance, double lambda,
                      double s, int depth, const AlignOptions& opts) {
  ScoreMatrix out;
  run_mp_er_scan(instance, lambda, s, depth, opts, {depth},
                 [&](int, const ScoreMatrix& m) { out = m; });
  return out;
}

namespace {

/// Shared engine for the generalized and weighted runners. Weight
/// offsets are empty for the unweighted case.
struct GeneralEngine {
  const GraphPairInstance& instance;
  const DegreeTripleLaw& q;
  const SizeBiasedLaws& sb;
  const AlignOptions& opts;
  const WeightModel* model;  // null = unweighted

  void run(int depth, const std::vector<int>& depths, const DepthCallback& cb) {
    const Graph& A = instance.graph_a;
    const Graph& B = instance.graph_b;
    const int n = A.n;
    const Incidence ia(A), ib(B);
    const std::set<int> want = wanted_set(depths, depth);

    // per directed-edge weight log-densities
    std::vector<double> rho_a, rho_b;  // marginal, indexed by directed edge
    if (model != nullptr) {
      rho_a.resize(2 * A.num_edges());
      rho_b.resize(2 * B.num_edges());
      for (int k = 0; k < A.num_edges(); ++k)
        rho_a[2 * k] = rho_a[2 * k + 1] =
            model->log_marginal_density((*instance.weights_a)[k]);
      for (int k = 0; k < B.num_edges(); ++k)
        rho_b[2 * k] = rho_b[2 * k + 1] =
            model->log_marginal_density((*instance.weights_b)[k]);
    }

    MessageState ms(A, B);
    if (model != nullptr) {
      // initial pair messages carry the joint density of their edge pair
      for (int ea = 0; ea < ms.ma2; ++ea) {
        const double wa = (*instance.weights_a)[ea / 2];
        double* row = ms.prev.data() + static_cast<std::size_t>(ea) * ms.mb2;
        for (int eb = 0; eb < ms.mb2; ++eb)
          row[eb] = model->log_density(wa, (*instance.weights_b)[eb / 2]);
      }
    }

    // scalar messages per directed edge, double buffered
    std::vector<double> hat_a_prev(ms.ma2, 0.0), til_a_prev(ms.ma2, 0.0);
    std::vector<double> hat_b_prev(ms.mb2, 0.0), til_b_prev(ms.mb2, 0.0);
    if (model != nullptr) {
      hat_a_prev = rho_a;
      til_a_prev = rho_a;
      hat_b_prev = rho_b;
      til_b_prev = rho_b;
    }
    std::vector<double> hat_a_cur(ms.ma2), til_a_cur(ms.ma2);
    std::vector<double> hat_b_cur(ms.mb2), til_b_cur(ms.mb2);

    std::vector<double> den_a(n), den_b(n);
    std::vector<KernelWorkspace> workspaces(std::max(1, opts.threads));

    auto gather_scalars = [](const std::vector<std::pair<int, int>>& arcs,
                             const std::vector<double>& hat,
                             const std::vector<double>& til, int skip,
                             std::vector<double>& u, std::vector<double>& v) {
      u.clear();
      v.clear();
      for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        if (a == skip) continue;
        u.push_back(hat[arcs[a].second]);
        v.push_back(til[arcs[a].second]);
      }
    };

    for (int t = 1; t <= depth; ++t) {
      const bool want_score = want.count(t) > 0;
      const bool want_msgs = t < depth;
      if (!want_score && !want_msgs) continue;
      ScoreMatrix scores(want_score ? n : 0, t);

      // marginal denominators from the previous round's scalars
      if (want_score) {
        parallel_for(n, opts.threads, [&](int i, int worker) {
          KernelWorkspace& ws = workspaces[worker];
          gather_scalars(ia.in_arcs[i], hat_a_prev, til_a_prev, -1, ws.vec_u,
                         ws.vec_v);
          den_a[i] = log_marginal_combine(
              q, static_cast<int>(ws.vec_u.size()), ws.vec_u.data(),
              ws.vec_v.data(), ws);
          gather_scalars(ib.in_arcs[i], hat_b_prev, til_b_prev, -1, ws.vec_u,
                         ws.vec_v);
          den_b[i] = log_marginal_combine(
              q, static_cast<int>(ws.vec_u.size()), ws.vec_u.data(),
              ws.vec_v.data(), ws);
        });
      }

      // new scalar messages
      if (want_msgs) {
        auto update_scalars = [&](const Incidence& inc,
                                  const std::vector<double>& hat_prev,
                                  const std::vector<double>& til_prev,
                                  const std::vector<double>& rho,
                                  std::vector<double>& hat_cur,
                                  std::vector<double>& til_cur) {
          parallel_for(static_cast<int>(inc.in_arcs.size()), opts.threads,
                       [&](int i, int worker) {
                         KernelWorkspace& ws = workspaces[worker];
                         const auto& arcs = inc.in_arcs[i];
                         for (int a = 0; a < static_cast<int>(arcs.size());
                              ++a) {
                           const int out_id = arcs[a].second ^ 1;
                           gather_scalars(arcs, hat_prev, til_prev, a, ws.vec_u,
                                          ws.vec_v);
                           const int l = static_cast<int>(ws.vec_u.size());
                           const double off =
                               rho.empty() ? 0.0 : rho[out_id];
                           hat_cur[out_id] =
                               off + log_marginal_combine(sb.hat(), l,
                                                          ws.vec_u.data(),
                                                          ws.vec_v.data(), ws);
                           til_cur[out_id] =
                               off + log_marginal_combine(sb.tilde(), l,
                                                          ws.vec_u.data(),
                                                          ws.vec_v.data(), ws);
                         }
                       });
        };
        update_scalars(ia, hat_a_prev, til_a_prev, rho_a, hat_a_cur, til_a_cur);
        update_scalars(ib, hat_b_prev, til_b_prev, rho_b, hat_b_cur, til_b_cur);
      }

      // pair messages and scores
      parallel_for(n, opts.threads, [&](int i, int worker) {
        KernelWorkspace& ws = workspaces[worker];
        const auto& arcs_a = ia.in_arcs[i];
        const int la = static_cast<int>(arcs_a.size());
        std::vector<double>& ua = ws.vec_u;
        std::vector<double>& ub = ws.vec_v;
        for (int i2 = 0; i2 < n; ++i2) {
          const auto& arcs_b = ib.in_arcs[i2];
          const int lb = static_cast<int>(arcs_b.size());
          check_cap(la, lb, opts.degree_cap, i, i2, "message passing");

          ws.gather.assign(la, lb);
          for (int a = 0; a < la; ++a) {
            const double* row = ms.prev.data() +
                                static_cast<std::size_t>(arcs_a[a].second) *
                                    ms.mb2;
            for (int b = 0; b < lb; ++b)
              ws.gather.at(a, b) = row[arcs_b[b].second];
          }

          if (want_score) {
            ua.clear();
            ub.clear();
            for (int a = 0; a < la; ++a)
              ua.push_back(til_a_prev[arcs_a[a].second]);
            for (int b = 0; b < lb; ++b)
              ub.push_back(til_b_prev[arcs_b[b].second]);
            const double num =
                log_joint_combine(q, la, lb, ws.gather, ua.data(), ub.data(),
                                  opts.degree_cap, ws);
            scores.at(i, i2) =
                num == kNegInf ? kNegInf : num - den_a[i] - den_b[i2];
          }

          if (want_msgs && la > 0 && lb > 0) {
            for (int a = 0; a < la; ++a) {
              const int out_a = arcs_a[a].second ^ 1;
              double* dst =
                  ms.cur.data() + static_cast<std::size_t>(out_a) * ms.mb2;
              ua.clear();
              for (int a2 = 0; a2 < la; ++a2)
                if (a2 != a) ua.push_back(til_a_prev[arcs_a[a2].second]);
              for (int b = 0; b < lb; ++b) {
                const int out_b = arcs_b[b].second ^ 1;
                ws.sub.assign(la - 1, lb - 1);
                for (int a2 = 0, ar = 0; a2 < la; ++a2) {
                  if (a2 == a) continue;
                  for (int b2 = 0, bc = 0; b2 < lb; ++b2) {
                    if (b2 == b) continue;
                    ws.sub.at(ar, bc++) = ws.gather.at(a2, b2);
                  }
                  ++ar;
                }
                ub.clear();
                for (int b2 = 0; b2 < lb; ++b2)
                  if (b2 != b) ub.push_back(til_b_prev[arcs_b[b2].second]);
                const double off =
                    model == nullptr
                        ? 0.0
                        : model->log_density((*instance.weights_a)[out_a / 2],
                                             (*instance.weights_b)[out_b / 2]);
                const double val = log_joint_combine(
                    sb.hat(), la - 1, lb - 1, ws.sub, ua.data(), ub.data(),
                    opts.degree_cap, ws);
                dst[out_b] = val == kNegInf || off == kNegInf ? kNegInf
                                                              : off + val;
              }
            }
          }
        }
      });

      if (want_score) cb(t, scores);
      if (want_msgs) {
        ms.swap_buffers();
        std::swap(hat_a_prev, hat_a_cur);
        std::swap(til_a_prev, til_a_cur);
        std::swap(hat_b_prev, hat_b_cur);
        std::swap(til_b_prev, til_b_cur);
      }
    }
  }
};

}  // namespace

void run_mp_general_scan(const GraphPairInstance& instance,
                         const DegreeTripleLaw& q, int depth,
                         const AlignOptions& opts,
                         const std::vector<int>& depths,
                         const DepthCallback& cb) {
  validate_common(instance, depth);
  if (instance.weighted())
    throw DataError(
        "run_mp_general: weighted instance, use the weighted runner");
  const SizeBiasedLaws sb = size_bias(q);
  GeneralEngine engine{instance, q, sb, opts, nullptr};
  engine.run(depth, depths, cb);
}

ScoreMatrix run_mp_general(const GraphPairInstance& instance,
                           const DegreeTripleLaw& q, int depth,
                           const AlignOptions& opts) {
  ScoreMatrix out;
  run_mp_general_scan(instance, q, depth, opts, {depth},
                      [&](int, const ScoreMatrix& m) { out = m; });
  return out;
}

WeightedBase WeightedBase::er(double lambda, double s) {
  WeightedBase b;
  b.is_er = true;
  b.lambda = lambda;
  b.s = s;
  return b;
}

WeightedBase WeightedBase::general(DegreeTripleLaw law) {
  WeightedBase b;
  b.is_er = false;
  b.law = std::move(law);
  return b;
}

double weighted_initial_pair_message(const WeightModel& model, double w,
                                     double w2) {
  return model.log_density(w, w2);
}

void run_mp_weighted_scan(const GraphPairInstance& instance,
                          const WeightedBase& base, const WeightModel& model,
                          int depth, const AlignOptions& opts,
                          const std::vector<int>& depths,
                          const DepthCallback& cb) {
  validate_common(instance, depth);
  if (!instance.weighted())
    throw DataError("run_mp_weighted: instance has no weights");

  DegreeTripleLaw q;
  if (base.is_er) {
    if (!(base.lambda > 0.0) || base.s < 0.0 || base.s > 1.0)
      throw ConfigError("run_mp_weighted: invalid lambda or s");
    q = DegreeTripleLaw::poisson_product(base.lambda * (1.0 - base.s),
                                         base.lambda * base.s);
  } else {
    q = *base.law;
  }
  const SizeBiasedLaws sb = size_bias(q);
  GeneralEngine engine{instance, q, sb, opts, &model};
  engine.run(depth, depths, cb);
}

ScoreMatrix run_mp_weighted(const GraphPairInstance& instance,
                            const WeightedBase& base, const WeightModel& model,
                            int depth, const AlignOptions& opts) {
  ScoreMatrix out;
  run_mp_weighted_scan(instance, base, model, depth, opts, {depth},
                       [&](int, const ScoreMatrix& m) { out = m; });
  return out;
}

void save_scores(const ScoreMatrix& scores, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write score file '" + path + "'");
  out << scores.n() << ' ' << scores.depth() << '\n';
  char buf[40];
  for (int i = 0; i < scores.n(); ++i) {
    for (int j = 0; j < scores.n(); ++j) {
      if (j) out << ' ';
      const double v = scores.at(i, j);
      if (v == kNegInf) {
        out << "-inf";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
      }
    }
    out << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

ScoreMatrix load_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score file '" + path + "'");
  int n, depth;
  if (!(in >> n >> depth) || n < 1)
    throw DataError(path + ": bad score file header");
  ScoreMatrix out(n, depth);
  std::string tok;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!(in >> tok)) throw DataError(path + ": truncated score file");
      out.at(i, j) = tok == "-inf" ? kNegInf : std::stod(tok);
    }
  return out;
}

}  // namespace graphalign
