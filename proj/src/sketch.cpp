#include "schatten/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "schatten/combinatorics.hpp"
#include "schatten/errors.hpp"
#include "schatten/summation.hpp"

namespace schatten {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::MatrixXd sample_sketch(int n, int d, std::uint64_t stream_seed) {
  if (n < 1 || d < 1) throw InputError("sketch dimensions must be positive");
  std::mt19937_64 gen(stream_seed);
  constexpr double kScale = 0x1.0p-53;
  Eigen::MatrixXd X(n, d);
  const Eigen::Index total = static_cast<Eigen::Index>(n) * d;
  for (Eigen::Index idx = 0; idx < total; idx += 2) {
    const double u1 = static_cast<double>((gen() >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(gen() >> 11) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    X(idx / d, idx % d) = radius * std::cos(angle);
    if (idx + 1 < total) X((idx + 1) / d, (idx + 1) % d) = radius * std::sin(angle);
  }
  return X;
}

namespace {

// Depth-first walk over increasing cycles carrying the partial product.
void accumulate_cycles(const Eigen::MatrixXd& W, int p, int depth, int first, int last,
                       double partial, CompensatedSum& sum) {
  const int n = static_cast<int>(W.rows());
  if (depth == p) {
    sum.add(partial * W(last, first));
    return;
  }
  for (int next = last + 1; next <= n - (p - depth); ++next) {
    accumulate_cycles(W, p, depth + 1, first, next, partial * W(last, next), sum);
  }
}

}  // namespace

double estimate_vpn(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S, int p) {
  const int n = static_cast<int>(X.rows());
  if (p < 1) throw InputError("p must be >= 1");
  if (n < p) throw InputError("n must be >= p");
  if (S.rows() != X.cols() || S.cols() != X.cols()) {
    throw InputError("S must be d x d with d = number of sketch columns");
  }
  const Eigen::MatrixXd W = X * S * X.transpose();
  CompensatedSum sum;
  for (int first = 0; first <= n - p; ++first) {
    accumulate_cycles(W, p, 1, first, first, 1.0, sum);
  }
  return sum.value() / binomial(n, p).convert_to<double>();
}

double estimate_vpn(const Eigen::MatrixXd& X, const Spectrum& spectrum, int p) {
  return estimate_vpn(X, spectrum.as_diagonal(), p);
}

void SketchConfig::validate() const {
  if (p < 1) throw InputError("p must be >= 1");
  if (n < p) throw InputError("n must be >= p");
  if (reps < 1) throw InputError("reps must be >= 1");
  if (gram && (gram->rows() != d() || gram->cols() != d())) {
    throw InputError("Gram matrix dimension does not match the spectrum");
  }
}

EstimateStats summarize(const std::vector<double>& values) {
  EstimateStats s;
  s.reps = static_cast<int>(values.size());
  if (values.empty()) throw InputError("no replicates to summarize");

  auto mean_of = [&](std::size_t begin, std::size_t end) {
    CompensatedSum acc;
    for (std::size_t i = begin; i < end; ++i) acc.add(values[i]);
    return acc.value() / static_cast<double>(end - begin);
  };
  auto var_of = [&](std::size_t begin, std::size_t end, double mean) {
    CompensatedSum acc;
    for (std::size_t i = begin; i < end; ++i) acc.add((values[i] - mean) * (values[i] - mean));
    return acc.value() / static_cast<double>(end - begin - 1);
  };

  const std::size_t reps = values.size();
  s.empirical_mean = mean_of(0, reps);
  if (reps < 2) return s;
  s.empirical_variance = var_of(0, reps, s.empirical_mean);
  s.stderr_mean = std::sqrt(*s.empirical_variance / static_cast<double>(reps));

  const std::size_t batches = reps >= 100 ? 50 : (reps >= 60 ? 30 : 0);
  if (batches == 0) return s;
  const std::size_t size = reps / batches;
  std::vector<double> batch_var(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = b * size;
    batch_var[b] = var_of(begin, begin + size, mean_of(begin, begin + size));
  }
  CompensatedSum bm;
  for (double v : batch_var) bm.add(v);
  const double mean_bv = bm.value() / static_cast<double>(batches);
  CompensatedSum bs;
  for (double v : batch_var) bs.add((v - mean_bv) * (v - mean_bv));
  const double sd = std::sqrt(bs.value() / static_cast<double>(batches - 1));
  s.stderr_variance = sd / std::sqrt(static_cast<double>(batches));
  s.batches = static_cast<int>(batches);
  return s;
}

std::vector<double> run_replicates(const SketchConfig& config, unsigned threads) {
  config.validate();
  const Eigen::MatrixXd S = config.gram ? *config.gram : config.spectrum.as_diagonal();
  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<double> values(reps);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Eigen::MatrixXd X = sample_sketch(config.n, config.d(), derive_seed(config.seed, r));
      values[r] = estimate_vpn(X, S, config.p);
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  if (workers == 1) {
    run(0, reps);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (reps + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(reps, w * chunk);
      pool.emplace_back(run, begin, std::min(reps, begin + chunk));
    }
  }
  return values;
}

EstimateStats run_experiment(const SketchConfig& config, unsigned threads) {
  return summarize(run_replicates(config, threads));
}

}  // namespace schatten
