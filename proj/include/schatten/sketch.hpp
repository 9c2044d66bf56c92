#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "schatten/spectrum.hpp"

namespace schatten {

/// Seed of replicate `index` derived from a master seed: the SplitMix64
/// finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
/// Counter-based, so replicate streams do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// n x d matrix of i.i.d. N(0, 1) entries.
///
/// The stream is std::mt19937_64 seeded with `stream_seed`; entries are
/// filled row-major, two at a time, by the Box-Muller transform on 53-bit
/// uniforms u1 = (b1 >> 11 + 1) 2^-53 in (0, 1] and u2 = (b2 >> 11) 2^-53.
Eigen::MatrixXd sample_sketch(int n, int d, std::uint64_t stream_seed);

/// V = C(n,p)^{-1} sum over increasing p-cycles of prod_l W_{i_l i_{l+1}},
/// W = X S X^T, with the closing factor W_{i_p i_1}.
/// Throws InputError when n < p or the shapes disagree.
double estimate_vpn(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S, int p);
double estimate_vpn(const Eigen::MatrixXd& X, const Spectrum& spectrum, int p);

struct SketchConfig {
  int p = 2;
  int n = 2;
  std::uint64_t seed = 0;
  int reps = 1;
  Spectrum spectrum{std::vector<double>{1.0}};
  /// Dense Gram matrix to use instead of diag(spectrum), e.g. B^T B.
  std::optional<Eigen::MatrixXd> gram;

  int d() const { return static_cast<int>(spectrum.dimension()); }
  void validate() const;
};

struct EstimateStats {
  double empirical_mean = 0.0;
  std::optional<double> empirical_variance;  ///< divisor reps - 1; absent for reps = 1
  std::optional<double> stderr_mean;
  std::optional<double> stderr_variance;  ///< batch means; absent for reps < 60
  int batches = 0;
  int reps = 0;
};

/// Summary statistics of a replicate sequence, computed in index order.
/// Batch standard error of the variance uses 50 equal batches when
/// reps >= 100 and 30 when 60 <= reps < 100; trailing replicates that do
/// not fill a batch are left out of the batch estimate only.
EstimateStats summarize(const std::vector<double>& values);

/// reps estimator draws; replicate r uses sample_sketch(n, d, derive_seed(seed, r)).
/// Output is bit-identical for any thread count.
std::vector<double> run_replicates(const SketchConfig& config, unsigned threads = 1);

EstimateStats run_experiment(const SketchConfig& config, unsigned threads = 1);

}  // namespace schatten
