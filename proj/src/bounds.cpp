#include "schatten/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "schatten/combinatorics.hpp"
#include "schatten/errors.hpp"
#include "schatten/summation.hpp"

namespace schatten {

void BoundReport::attach_exact(double variance) {
  exact_variance = variance;
  slack = new_bound - variance;
}

double kv_bound(int p, int n, int d, double kappa, double trace_p) {
  if (p < 2 || n < p || d < 1 || !(kappa > 0.0)) {
    throw InputError("kv_bound needs p >= 2, n >= p, d >= 1, kappa > 0");
  }
  if (trace_p < 0.0) throw InputError("Tr(S^p) must be non-negative");
  if (trace_p == 0.0) return 0.0;
  const double P = p;
  const double ln_d = std::log(static_cast<double>(d));
  const double ln_n = std::log(static_cast<double>(n));
  const double first = (P - 2.0) * ln_d - P * ln_n;
  const double second = (0.5 - 1.0 / P) * ln_d - ln_n;
  const double log_value = 12.0 * P * std::log(2.0) + 6.0 * P * std::log(P) + P * std::log(kappa) +
                           std::max(first, second) + 2.0 * std::log(trace_p);
  return std::exp(log_value);
}

BoundReport new_bound(int p, int n, int d, double trace_p, double kappa) {
  if (p < 1 || n < p || d < 1) throw InputError("new_bound needs p >= 1, n >= p, d >= 1");
  BoundReport r;
  r.p = p;
  r.n = n;
  r.d = d;
  r.trace_p = trace_p;
  r.kappa = kappa;

  if (n >= 2 * p) {
    // (n-p)!^2 / (n! (n-2p)!) = prod_{k<p} (n-k-p)/(n-k), kept exact.
    BigRational disjoint = 1;
    for (int k = 0; k < p; ++k) disjoint *= BigRational(n - k - p, n - k);
    r.b1 = (disjoint - 1).convert_to<double>();
    r.b2 = (disjoint * BigRational(p * p, n - 2 * p + 1)).convert_to<double>();
  }

  const double D = d;
  const double x = 3.0 * p * D / n;
  // (x + 1)^p - p x - 1 expanded as sum_{q>=2} C(p,q) x^q to avoid cancellation.
  CompensatedSum tail;
  for (int q = 2; q <= p; ++q) {
    tail.add(binomial(p, q).convert_to<double>() * std::pow(x, q));
  }
  r.b3 = 2.0 / (3.0 * D * D) * tail.value();
  r.b4 = std::ldexp(1.0, p) * (D - 1.0) / (3.0 * D * D) * std::pow(D, p / 2.0) *
         std::pow(3.0 * p / n, p / 2.0);

  r.new_bound = r.factor_sum() * trace_p * trace_p;
  if (p >= 2) {
    r.kv_bound = kv_bound(p, n, d, kappa, trace_p);
    if (*r.kv_bound > 0.0) r.ratio = r.new_bound / *r.kv_bound;
  }
  return r;
}

SandwichReport moment_sandwich_check(const MomentQuery& query, const TracePowerTable& table, int p) {
  query.validate();
  if (p < 1) throw InputError("p must be >= 1");
  SandwichReport rep;
  rep.kind = query.kind;
  rep.q = query.q();
  rep.p = p;
  MomentEngine engine(table);
  rep.value = engine.evaluate(query);

  const double sp2 = table[p] * table[p];
  const double D = static_cast<double>(table.dimension());
  const int q = rep.q;
  const double pow3q = std::pow(3.0, q);

  auto add = [&](std::string name, std::string condition, bool holds, Interval iv) {
    SandwichEntry e;
    e.name = std::move(name);
    e.condition = std::move(condition);
    e.condition_holds = holds;
    e.interval = iv;
    e.contains = iv.contains(rep.value);
    rep.entries.push_back(std::move(e));
  };

  if (query.kind == MomentKind::N) {
    rep.letters = n_moment_letters(query.k, query.m);
    const bool small =
        std::all_of(rep.letters.begin(), rep.letters.end(), [p](int a) { return a <= p; });
    add("n_all_letters_small", "all alpha_j <= p", small,
        Interval{sp2 * pow3q, sp2 * std::pow(D, q - 1) * pow3q});
    add("n_some_letter_large", "some alpha_j > p", !small,
        Interval{sp2 * pow3q / D, sp2 * std::pow(D, q) * pow3q});
  } else {
    const double ratio = 2.0 / (3.0 * D);
    const double geometric = (1.0 - std::pow(ratio, q - 1)) / (1.0 - ratio);
    const double lower_num = pow3q - 4.0;
    const bool first_case = 2 * q <= p;
    add("m_few_shared", "q <= p/2", first_case,
        Interval{lower_num / (D * D) * sp2, sp2 * std::pow(3.0, q - 1) * std::pow(D, q - 1) * geometric});
    add("m_many_shared", "q > p/2", !first_case,
        Interval{lower_num / D * sp2, sp2 * std::pow(3.0, q - 1) * std::pow(D, q - 2) * geometric});
  }
  return rep;
}

}  // namespace schatten
