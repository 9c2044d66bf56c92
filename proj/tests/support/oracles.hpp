#pragma once

// Independent reference computations used as expected values in tests.
// Nothing here calls into the library under test.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;

inline double power_sum(const std::vector<double>& lambda, int k) {
  long double s = 0;
  for (double v : lambda) s += std::pow(static_cast<long double>(v), k);
  return static_cast<double>(s);
}

inline cpp_int choose(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  cpp_int r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Variance at p = 2 from the second-moment expansion over disjoint,
// one-shared and identical index pairs.
inline double variance_p2(int n, const std::vector<double>& lambda) {
  const long double s2 = power_sum(lambda, 2);
  const long double s4 = power_sum(lambda, 4);
  const long double c = static_cast<long double>(choose(n, 2).convert_to<double>());
  const long double c4 = choose(n, 4).convert_to<long double>();
  const long double c3 = choose(n, 3).convert_to<long double>();
  const long double second =
      (c4 * 6 * s2 * s2 + c3 * 6 * (2 * s4 + s2 * s2) + c * (6 * s4 + 3 * s2 * s2)) / (c * c);
  return static_cast<double>(second - s2 * s2);
}

// p = 1: average of n independent quadratic forms, each with variance 2 Tr(S^2).
inline double variance_p1(int n, const std::vector<double>& lambda) {
  return 2.0 * power_sum(lambda, 2) / n;
}

// Ordered pairs of p-subsets of [n] by intersection size, by bitmask enumeration.
inline std::vector<cpp_int> pair_counts_by_enumeration(int n, int p) {
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 0; s < (1U << n); ++s) {
    if (std::popcount(s) == p) subsets.push_back(s);
  }
  std::vector<cpp_int> counts(static_cast<std::size_t>(p) + 1, 0);
  for (auto a : subsets) {
    for (auto b : subsets) counts[static_cast<std::size_t>(std::popcount(a & b))] += 1;
  }
  return counts;
}

// Estimator value by enumerating p-subsets as bitmasks.
inline double estimator_by_subsets(const Eigen::MatrixXd& W, int p) {
  const int n = static_cast<int>(W.rows());
  long double total = 0;
  long count = 0;
  for (std::uint32_t s = 0; s < (1U << n); ++s) {
    if (std::popcount(s) != p) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (s & (1U << i)) idx.push_back(i);
    }
    long double prod = 1;
    for (int l = 0; l < p; ++l) prod *= W(idx[l], idx[(l + 1) % p]);
    total += prod;
    ++count;
  }
  return static_cast<double>(total / count);
}

// Comparison bound evaluated directly in 50-digit floating point.
inline double kv_bound_reference(int p, int n, int d, double kappa, double trace_p) {
  using F = boost::multiprecision::cpp_bin_float_50;
  const F P = p;
  const F N = n;
  const F D = d;
  const F first = pow(D, P - 2) / pow(N, P);
  const F second = pow(D, F(0.5) - 1 / P) / N;
  const F value = pow(F(2), 12 * P) * pow(P, 6 * P) * pow(F(kappa), P) * (first > second ? first : second) *
                  F(trace_p) * F(trace_p);
  return value.convert_to<double>();
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Spectrum with entries uniform on (0, 1].
inline std::vector<double> random_spectrum(std::mt19937_64& gen, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(d));
  for (auto& v : out) v = 1.0 - u(gen);
  return out;
}

}  // namespace oracle
