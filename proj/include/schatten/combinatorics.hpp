#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace schatten {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// C(n, k) with the convention C(n, k) = 0 outside 0 <= k <= n.
BigInt binomial(long n, long k);

/// Strictly increasing index tuple (1-based), the support of one cycle
/// product W_{i1 i2} W_{i2 i3} ... W_{ip i1}.
class IncreasingCycle {
 public:
  /// Throws InputError unless the indices are >= 1 and strictly increasing.
  explicit IncreasingCycle(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  int length() const { return static_cast<int>(indices_.size()); }
  int front() const { return indices_.front(); }

  auto operator<=>(const IncreasingCycle&) const = default;

 private:
  std::vector<int> indices_;
};

/// How two increasing p-cycles sigma, tau interleave around their common
/// elements gamma_1 < ... < gamma_q.
///
/// k[i] counts elements of sigma in the window [gamma_i, gamma_{i+1}) for
/// 1 <= i < q, k[q] those >= gamma_q and k[0] those < gamma_1; m likewise for
/// tau. When q = 0, k = {p} and m = {p}.
struct OverlapPattern {
  int q = 0;
  std::vector<int> k;
  std::vector<int> m;
  /// Number of ordered pairs over [1, n] that realise this pattern.
  BigInt multiplicity = 1;

  int p() const;

  /// K_{i,j} = k_i + ... + k_j, zero when i > j.
  int K(int i, int j) const;
  /// M_{i,j} = m_i + ... + m_j, zero when i > j.
  int M(int i, int j) const;

  /// (k_1, ..., k_{q-1}, k_q + k_0): the first-pass exponents of the trace
  /// form of the pair expectation. Requires q >= 1.
  std::vector<int> folded_k() const;
  /// (m_1, ..., m_{q-1}, m_q + m_0). Requires q >= 1.
  std::vector<int> folded_m() const;

  /// Throws InputError if the structural invariants do not hold for order p.
  void check(int p) const;

  /// Ordering by q, then k, then m. Multiplicity is ignored.
  std::strong_ordering operator<=>(const OverlapPattern& other) const;
  bool operator==(const OverlapPattern& other) const;
};

/// All C(n, p) increasing p-cycles over [1, n] in lexicographic order.
/// Empty when p > n. Throws InputError for p < 1.
std::vector<IncreasingCycle> enumerate_increasing_cycles(int n, int p);

/// Overlap statistics of an ordered pair; roles are swapped first when
/// sigma_1 > tau_1. Multiplicity is 1.
OverlapPattern overlap_decompose(const IncreasingCycle& sigma, const IncreasingCycle& tau);

enum class PatternEnumeration {
  /// Pairs over the compressed support [1, 2p - q], weighted by C(n, 2p - q).
  Canonical,
  /// Every ordered pair over [1, n]. Quadratic in C(n, p); kept as a reference.
  AllPairs,
};

/// Distinct overlap patterns with multiplicities summing to C(n, p)^2,
/// sorted by (q, k, m).
std::vector<OverlapPattern> enumerate_pattern_classes(
    int n, int p, PatternEnumeration mode = PatternEnumeration::Canonical);

/// C(n, 2p-q) C(2p-q, q) C(2p-2q, p-q): ordered pairs of increasing p-cycles
/// over [1, n] sharing exactly q indices.
BigInt pair_count(int n, int p, int q);

/// pair_count(n, p, q) / C(n, p), computed by exact division. Throws
/// NumericalError if the division leaves a remainder.
BigInt pair_count_ratio(int n, int p, int q);

/// C(n-p, p-q) C(p, q), the closed form of pair_count_ratio.
BigInt pair_count_ratio_closed_form(int n, int p, int q);

/// Exact evaluation of C(n-p, p-q) / C(n, p) against
/// min(((n-p)/(n-q))^{p-q}, (p/n)^q).
struct PairRatioBound {
  BigRational ratio;
  BigRational first;
  BigRational second;
  bool holds;
};

/// Requires 0 <= q <= p and n > q.
PairRatioBound pair_ratio_bound(int n, int p, int q);

}  // namespace schatten
