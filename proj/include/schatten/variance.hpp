#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "schatten/combinatorics.hpp"
#include "schatten/moments.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

/// Pairs with exactly q shared indices: how many, and the sum of their
/// pair expectations.
struct QContribution {
  int q = 0;
  BigInt count = 0;
  double sum = 0.0;
};

struct VarianceReport {
  int p = 0;
  int n = 0;
  std::size_t d = 0;
  double mean = 0.0;           ///< Tr(S^p)
  double second_moment = 0.0;  ///< E[V^2]
  double variance = 0.0;       ///< second_moment - mean^2
  std::vector<QContribution> per_q;

  BigInt total_pairs() const;
};

struct VarianceOptions {
  PatternEnumeration enumeration = PatternEnumeration::Canonical;
  /// Worker threads for the pattern-class loop; 0 means 1. The result does
  /// not depend on this value.
  unsigned threads = 1;
};

/// E[(XSX^T)_[sigma] (XSX^T)_[tau]] for a pair realising `pattern`:
/// Tr(S^p)^2 when disjoint, otherwise M(q; folded k | folded m).
double pair_expectation(const OverlapPattern& pattern, MomentEngine& engine, int p);
double pair_expectation(const OverlapPattern& pattern, const TracePowerTable& table, int p);

/// Exact variance of the order-p estimator from n sketch rows.
/// Needs table.k_max() >= 2p. Throws InputError unless 1 <= p <= n.
VarianceReport exact_variance(int p, int n, const TracePowerTable& table,
                              const VarianceOptions& options = {});

/// Closed form for p = 2:
///   C(n,2)^{-2} [ 6 C(n,4) T2^2 + 6 C(n,3)(2 T4 + T2^2) + C(n,2)(6 T4 + 3 T2^2) ] - T2^2
double exact_variance_closed_p2(int n, const TracePowerTable& table);

struct LiteralVarianceReport {
  VarianceReport literal;
  double normative_variance = 0.0;
  double discrepancy = 0.0;  ///< literal.variance - normative_variance
  std::string convention;
};

/// The variance representation evaluated term by term, with each q >= 2 pair
/// contributing sum_{t=1}^{q-1} 2^{t-1} (star sum over beta^{q-t}).
/// Diagnostic; it inherits the single-sum M expression and so differs from
/// exact_variance whenever q >= 2 pairs exist.
LiteralVarianceReport variance_single_sum(int p, int n, const TracePowerTable& table);

inline constexpr double kBruteMaxPairs = 1e6;
inline constexpr double kBruteMaxTuplesPerPair = 1e7;
inline constexpr double kBruteMaxWork = 1e8;

/// Throws SizeGuardError unless C(n,p)^2 <= 1e6, d^{2p} <= 1e7 and their
/// product <= 1e8.
void check_brute_guard(int p, int n, std::size_t d);

/// Reference variance: every ordered pair of increasing p-cycles over [1, n]
/// is expanded as a product of two traces over all of its sketch rows and
/// evaluated by the Isserlis oracle. Uses neither overlap statistics nor
/// the moment recursions.
VarianceReport brute_variance(int p, int n, const Spectrum& spectrum);

}  // namespace schatten
