#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schatten/moments.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

/// Four-term variance bound (B1 + B2 + B3 + B4) Tr(S^p)^2 next to the
/// earlier bound for kappa-bounded fourth moments.
struct BoundReport {
  int p = 0;
  int n = 0;
  int d = 0;
  double trace_p = 0.0;  ///< Tr(S^p)
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
  double new_bound = 0.0;  ///< (b1 + b2 + b3 + b4) * trace_p^2
  double kappa = 3.0;
  std::optional<double> kv_bound;  ///< absent for p < 2
  std::optional<double> ratio;     ///< new_bound / kv_bound
  std::optional<double> exact_variance;
  std::optional<double> slack;  ///< new_bound - exact_variance

  double factor_sum() const { return b1 + b2 + b3 + b4; }
  void attach_exact(double variance);
};

/// 2^{12p} p^{6p} kappa^p max(d^{p-2}/n^p, d^{1/2-1/p}/n) Tr(S^p)^2,
/// accumulated in log space. May return +inf. Requires p >= 2, n >= p,
/// d >= 1, kappa > 0.
double kv_bound(int p, int n, int d, double kappa, double trace_p);

/// Requires p >= 1, n >= p, d >= 1. B1 = B2 = 0 for n < 2p.
BoundReport new_bound(int p, int n, int d, double trace_p, double kappa = 3.0);

/// One two-sided bracket for a moment: whether its case condition applies
/// to the query and whether the computed value lies inside.
struct SandwichEntry {
  std::string name;
  std::string condition;
  bool condition_holds = false;
  Interval interval{};
  bool contains = false;
};

struct SandwichReport {
  MomentKind kind = MomentKind::M;
  int q = 0;
  int p = 0;
  double value = 0.0;
  std::vector<int> letters;  ///< alpha_0..alpha_q (N queries only)
  std::vector<SandwichEntry> entries;
};

/// Evaluates both case branches of the N sandwich (all alpha_j <= p or not)
/// or of the M sandwich (q <= p/2 or not) and records containment. No claim
/// is asserted; the report is descriptive.
SandwichReport moment_sandwich_check(const MomentQuery& query, const TracePowerTable& table, int p);

}  // namespace schatten
