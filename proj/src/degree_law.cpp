// SPDX-License-Identifier: Apache-2.0
#include "graphalign/degree_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphalign/errors.hpp"

namespace graphalign {

namespace {
constexpr double kNormTol = 1e-12;
}

double& DegreeTripleLaw::cell(int b, int r, int i) {
  return table_[(static_cast<std::size_t>(b) * (max_red_ + 1) + r) *
                    (max_bi_ + 1) +
                i];
}

double DegreeTripleLaw::cell(int b, int r, int i) const {
  return table_[(static_cast<std::size_t>(b) * (max_red_ + 1) + r) *
                    (max_bi_ + 1) +
                i];
}

double DegreeTripleLaw::prob(int blue, int red, int bicolored) const {
  if (blue < 0 || red < 0 || bicolored < 0 || blue > max_blue_ ||
      red > max_red_ || bicolored > max_bi_)
    return 0.0;
  return cell(blue, red, bicolored);
}

double DegreeTripleLaw::pair_marginal(int mono, int bicolored) const {
  const int max_mono = std::max(max_blue_, max_red_);
  if (mono < 0 || bicolored < 0 || mono > max_mono || bicolored > max_bi_)
    return 0.0;
  return pair_marginal_[static_cast<std::size_t>(mono) * (max_bi_ + 1) +
                        bicolored];
}

double DegreeTripleLaw::degree_prob(int degree) const {
  if (degree < 0 || degree >= static_cast<int>(degree_.size())) return 0.0;
  return degree_[degree];
}

int DegreeTripleLaw::max_degree() const {
  for (int l = static_cast<int>(degree_.size()) - 1; l >= 0; --l)
    if (degree_[l] > 0.0) return l;
  return 0;
}

DegreeTriple DegreeTripleLaw::sample(Rng& rng) const {
  const double u = rng.next_unit();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
  if (idx >= table_.size()) idx = table_.size() - 1;
  const int bi = static_cast<int>(idx % (max_bi_ + 1));
  const int r = static_cast<int>((idx / (max_bi_ + 1)) % (max_red_ + 1));
  const int b = static_cast<int>(idx / ((max_bi_ + 1) * (max_red_ + 1)));
  return {b, r, bi};
}

std::vector<DegreeTripleLaw::Entry> DegreeTripleLaw::entries() const {
  std::vector<Entry> out;
  for (int b = 0; b <= max_blue_; ++b)
    for (int r = 0; r <= max_red_; ++r)
      for (int i = 0; i <= max_bi_; ++i)
        if (cell(b, r, i) > 0.0) out.emplace_back(b, r, i, cell(b, r, i));
  return out;
}

DegreeTripleLaw DegreeTripleLaw::from_raw(int mb, int mr, int mi,
                                          std::vector<double> table) {
  DegreeTripleLaw law;
  law.max_blue_ = mb;
  law.max_red_ = mr;
  law.max_bi_ = mi;
  law.table_ = std::move(table);
  law.finalize();
  return law;
}

void DegreeTripleLaw::finalize() {
  double total = 0.0;
  for (double p : table_) total += p;
  if (!(total > 0.0)) throw ConfigError("degree law has zero total mass");
  for (double& p : table_) p /= total;

  mean_blue_ = mean_red_ = mean_bi_ = 0.0;
  for (int b = 0; b <= max_blue_; ++b)
    for (int r = 0; r <= max_red_; ++r)
      for (int i = 0; i <= max_bi_; ++i) {
        const double p = cell(b, r, i);
        mean_blue_ += b * p;
        mean_red_ += r * p;
        mean_bi_ += i * p;
      }

  const int max_mono = std::max(max_blue_, max_red_);
  pair_marginal_.assign(static_cast<std::size_t>(max_mono + 1) * (max_bi_ + 1),
                        0.0);
  for (int b = 0; b <= max_blue_; ++b)
    for (int r = 0; r <= max_red_; ++r)
      for (int i = 0; i <= max_bi_; ++i)
        pair_marginal_[static_cast<std::size_t>(b) * (max_bi_ + 1) + i] +=
            cell(b, r, i);

  degree_.assign(max_mono + max_bi_ + 1, 0.0);
  for (int mono = 0; mono <= max_mono; ++mono)
    for (int i = 0; i <= max_bi_; ++i)
      degree_[mono + i] +=
          pair_marginal_[static_cast<std::size_t>(mono) * (max_bi_ + 1) + i];

  cum_.resize(table_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < table_.size(); ++k) {
    acc += table_[k];
    cum_[k] = acc;
  }
  cum_.back() = 1.0;
}

DegreeTripleLaw DegreeTripleLaw::from_entries(
    const std::vector<Entry>& entries, bool require_symmetry) {
  if (entries.empty()) throw ConfigError("degree law: empty table");
  int mb = 0, mr = 0, mi = 0;
  double total = 0.0;
  for (const auto& [b, r, i, p] : entries) {
    if (b < 0 || r < 0 || i < 0)
      throw ConfigError("degree law: negative half-edge count");
    if (p < 0.0) throw ConfigError("degree law: negative probability");
    mb = std::max(mb, b);
    mr = std::max(mr, r);
    mi = std::max(mi, i);
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol)
    throw ConfigError("degree law: probabilities sum to " +
                      std::to_string(total) + ", expected 1");

  std::vector<double> table(
      static_cast<std::size_t>(mb + 1) * (mr + 1) * (mi + 1), 0.0);
  auto at = [&](int b, int r, int i) -> double& {
    return table[(static_cast<std::size_t>(b) * (mr + 1) + r) * (mi + 1) + i];
  };
  for (const auto& [b, r, i, p] : entries) {
    if (at(b, r, i) != 0.0)
      throw ConfigError("degree law: duplicate entry (" + std::to_string(b) +
                        ", " + std::to_string(r) + ", " + std::to_string(i) +
                        ")");
    at(b, r, i) = p;
  }

  if (require_symmetry) {
    if (mb != mr)
      throw ConfigError("degree law: table not blue/red symmetric");
    for (int b = 0; b <= mb; ++b)
      for (int r = 0; r <= mr; ++r)
        for (int i = 0; i <= mi; ++i)
          if (std::abs(at(b, r, i) - at(r, b, i)) > kNormTol)
            throw ConfigError("degree law: table not blue/red symmetric");
  }

  return from_raw(mb, mr, mi, std::move(table));
}

DegreeTripleLaw DegreeTripleLaw::poisson_product(double mono_mean,
                                                 double bi_mean,
                                                 double tail_cut) {
  if (mono_mean < 0.0 || bi_mean < 0.0)
    throw ConfigError("poisson_product: negative mean");

  auto pmf_upto = [tail_cut](double mean) {
    std::vector<double> pmf;
    double p = std::exp(-mean);
    double cdf = p;
    pmf.push_back(p);
    int k = 0;
    while (1.0 - cdf > tail_cut && k < 2000) {
      ++k;
      p *= mean / k;
      cdf += p;
      pmf.push_back(p);
    }
    return pmf;
  };

  const std::vector<double> mono = pmf_upto(mono_mean);
  const std::vector<double> bi = pmf_upto(bi_mean);
  const int mm = static_cast<int>(mono.size()) - 1;
  const int mi = static_cast<int>(bi.size()) - 1;

  std::vector<double> table(
      static_cast<std::size_t>(mm + 1) * (mm + 1) * (mi + 1), 0.0);
  std::size_t idx = 0;
  for (int b = 0; b <= mm; ++b)
    for (int r = 0; r <= mm; ++r)
      for (int i = 0; i <= mi; ++i) table[idx++] = mono[b] * mono[r] * bi[i];

  return from_raw(mm, mm, mi, std::move(table));
}

const DegreeTripleLaw& SizeBiasedLaws::get(
    const std::optional<DegreeTripleLaw>& law, const char* color) {
  if (!law.has_value())
    throw DegenerateLawError(std::string("size_bias: law puts no mass on ") +
                             color + " half-edges");
  return *law;
}

SizeBiasedLaws size_bias(const DegreeTripleLaw& q) {
  const int mb = q.max_blue(), mr = q.max_red(), mi = q.max_bicolored();

  auto build = [&](int which) -> std::optional<DegreeTripleLaw> {
    // which: 0 -> hat (reweight by bicolored), 1 -> tilde (by blue),
    //        2 -> dot = tilde with blue and red exchanged
    const double denom = which == 0 ? q.mean_bicolored() : q.mean_blue();
    if (!(denom > 0.0)) return std::nullopt;
    const int nb = which == 0 ? mb : which == 1 ? std::max(mb - 1, 0) : mr;
    const int nr = which == 0 ? mr : which == 1 ? mr : std::max(mb - 1, 0);
    const int ni = which == 0 ? std::max(mi - 1, 0) : mi;
    std::vector<double> table(
        static_cast<std::size_t>(nb + 1) * (nr + 1) * (ni + 1), 0.0);
    std::size_t idx = 0;
    for (int b = 0; b <= nb; ++b)
      for (int r = 0; r <= nr; ++r)
        for (int i = 0; i <= ni; ++i) {
          double v = 0.0;
          if (which == 0)
            v = (i + 1) * q.prob(b, r, i + 1);
          else if (which == 1)
            v = (b + 1) * q.prob(b + 1, r, i);
          else
            v = (r + 1) * q.prob(r + 1, b, i);
          table[idx++] = v / denom;
        }
    return DegreeTripleLaw::from_raw(nb, nr, ni, std::move(table));
  };

  SizeBiasedLaws out;
  out.hat_ = build(0);
  out.tilde_ = build(1);
  out.dot_ = build(2);
  return out;
}

}  // namespace graphalign
