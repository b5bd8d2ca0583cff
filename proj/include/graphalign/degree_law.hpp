// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "graphalign/rng.hpp"

namespace graphalign {

struct DegreeTriple {
  int blue = 0;
  int red = 0;
  int bicolored = 0;
};

struct SizeBiasedLaws;

/// Finite joint law of the per-vertex half-edge counts (blue, red,
/// bicolored). Stored as a dense table; lookups outside the support
/// return 0. The base law of an ensemble must be symmetric under the
/// exchange of blue and red; size-biased variants are not.
class DegreeTripleLaw {
 public:
  using Entry = std::tuple<int, int, int, double>;  // (blue, red, bi, prob)

  DegreeTripleLaw() = default;

  /// Builds from explicit entries; validates normalization within 1e-12
  /// and, when `require_symmetry`, blue/red exchange symmetry.
  static DegreeTripleLaw from_entries(const std::vector<Entry>& entries,
                                      bool require_symmetry = true);

  /// Product of Poisson laws Po(mono) x Po(mono) x Po(bi), truncated at
  /// a tail mass of `tail_cut` per axis and renormalized.
  static DegreeTripleLaw poisson_product(double mono_mean, double bi_mean,
                                         double tail_cut = 1e-14);

  double prob(int blue, int red, int bicolored) const;
  /// Marginal over the opposite monochromatic slot: sum_r q(b, r, bi).
  double pair_marginal(int mono, int bicolored) const;
  /// Degree distribution of a projected graph: P(l) = sum_bi q2(l-bi, bi).
  double degree_prob(int degree) const;

  int max_blue() const { return max_blue_; }
  int max_red() const { return max_red_; }
  int max_bicolored() const { return max_bi_; }
  /// Largest projected degree with positive probability.
  int max_degree() const;

  double mean_blue() const { return mean_blue_; }
  double mean_red() const { return mean_red_; }
  double mean_bicolored() const { return mean_bi_; }

  DegreeTriple sample(Rng& rng) const;

  std::vector<Entry> entries() const;

 private:
  double& cell(int b, int r, int i);
  double cell(int b, int r, int i) const;
  void finalize();

  int max_blue_ = -1, max_red_ = -1, max_bi_ = -1;
  std::vector<double> table_;          // (max_blue+1)*(max_red+1)*(max_bi+1)
  std::vector<double> pair_marginal_;  // (max_mono+1)*(max_bi+1)
  std::vector<double> degree_;         // P(l)
  std::vector<double> cum_;            // cumulative over table_ for sampling
  double mean_blue_ = 0, mean_red_ = 0, mean_bi_ = 0;

  friend SizeBiasedLaws size_bias(const DegreeTripleLaw& q);
  static DegreeTripleLaw from_raw(int mb, int mr, int mi,
                                  std::vector<double> table);
};

/// The three size-biased companions of a base law: `hat` reweighted by the
/// bicolored count, `tilde` by the blue count, `dot` by the red count
/// (equal to `tilde` with blue and red swapped). A variant whose
/// reweighting denominator vanishes stays absent; requesting it throws
/// DegenerateLawError.
class SizeBiasedLaws {
 public:
  const DegreeTripleLaw& hat() const { return get(hat_, "bicolored"); }
  const DegreeTripleLaw& tilde() const { return get(tilde_, "blue"); }
  const DegreeTripleLaw& dot() const { return get(dot_, "red"); }

  bool has_hat() const { return hat_.has_value(); }
  bool has_tilde() const { return tilde_.has_value(); }
  bool has_dot() const { return dot_.has_value(); }

 private:
  static const DegreeTripleLaw& get(const std::optional<DegreeTripleLaw>& law,
                                    const char* color);
  std::optional<DegreeTripleLaw> hat_, tilde_, dot_;
  friend SizeBiasedLaws size_bias(const DegreeTripleLaw& q);
};

SizeBiasedLaws size_bias(const DegreeTripleLaw& q);

}  // namespace graphalign
