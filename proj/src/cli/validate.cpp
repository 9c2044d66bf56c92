#include "schatten/cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schatten/bounds.hpp"
#include "schatten/combinatorics.hpp"
#include "schatten/errors.hpp"
#include "schatten/isserlis.hpp"
#include "schatten/moments.hpp"
#include "schatten/sketch.hpp"
#include "schatten/variance.hpp"

namespace schatten::cli {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "skip";
}

bool ValidationResult::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

namespace {

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

std::string fmt(double v) { return format_number(v); }

CheckResult make(std::string name, bool ok, std::string detail) {
  return CheckResult{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

CheckResult skip(std::string name, std::string detail) {
  return CheckResult{std::move(name), CheckStatus::Skip, std::move(detail)};
}

std::string describe(const MomentQuery& q) {
  std::ostringstream s;
  s << (q.kind == MomentKind::M ? "M(" : "N(") << q.q() << ";";
  for (std::size_t i = 0; i < q.k.size(); ++i) s << (i ? "," : "") << q.k[i];
  s << "|";
  for (std::size_t i = 0; i < q.m.size(); ++i) s << (i ? "," : "") << q.m[i];
  s << ")";
  return s.str();
}

// All queries with q <= q_max and entries in {1, 2}.
std::vector<MomentQuery> small_queries(int q_max) {
  std::vector<MomentQuery> out;
  for (int q = 1; q <= q_max; ++q) {
    const int slots = 2 * q;
    for (int mask = 0; mask < (1 << slots); ++mask) {
      MomentQuery mq;
      for (int i = 0; i < q; ++i) mq.k.push_back(1 + ((mask >> i) & 1));
      for (int i = 0; i < q; ++i) mq.m.push_back(1 + ((mask >> (q + i)) & 1));
      mq.kind = MomentKind::M;
      out.push_back(mq);
      mq.kind = MomentKind::N;
      out.push_back(mq);
    }
  }
  return out;
}

}  // namespace

ValidationResult run_validation(const ValidateOptions& o, const Spectrum& spectrum) {
  if (o.p < 1) throw InputError("p must be >= 1");
  if (o.n < o.p) throw InputError("n must be >= p");
  if (o.reps < 1) throw InputError("reps must be >= 1");

  ValidationResult res;
  const int p = o.p;
  const int n = o.n;
  const std::size_t d = spectrum.dimension();
  const TracePowerTable table(spectrum, std::max(4 * p, 8));
  VarianceOptions vopts;
  vopts.threads = o.threads;
  const VarianceReport exact = exact_variance(p, n, table, vopts);
  const double tp2 = table[p] * table[p];

  res.checks.push_back(make("variance_nonnegative", exact.variance >= -1e-9 * tp2,
                            "variance = " + fmt(exact.variance)));
  res.checks.push_back(make("pair_count_total", exact.total_pairs() == binomial(n, p) * binomial(n, p),
                            "sum of class multiplicities = " + exact.total_pairs().str()));

  if (p == 2) {
    const double closed = exact_variance_closed_p2(n, table);
    const double e = rel_err(exact.variance, closed);
    res.checks.push_back(make("closed_form_p2", e <= 1e-12,
                              "recursion " + fmt(exact.variance) + " vs closed form " + fmt(closed) +
                                  ", rel err " + fmt(e)));
  } else {
    res.checks.push_back(skip("closed_form_p2", "closed form applies to p = 2 only"));
  }

  {
    const double s2 = table[2];
    const double s4 = table[4];
    // One shared index at p = 2 folds to M(1;2|2); identical 2-cycles give M(2;1,1|1,1).
    const double m1 = m_moment({MomentKind::M, {2}, {2}}, table);
    const double m2 = m_moment({MomentKind::M, {1, 1}, {1, 1}}, table);
    const double e1 = rel_err(m1, 2 * s4 + s2 * s2);
    const double e2 = rel_err(m2, 6 * s4 + 3 * s2 * s2);
    res.checks.push_back(make("moment_values", std::max(e1, e2) <= 1e-12,
                              "M(1;2|2) = " + fmt(m1) + ", M(2;1,1|1,1) = " + fmt(m2)));
  }

  {
    const int q_max = std::min(p, 2);
    int compared = 0;
    int skipped = 0;
    double worst = 0.0;
    std::string worst_query;
    for (const auto& q : small_queries(q_max)) {
      if (std::pow(static_cast<double>(d), isserlis_query(q).link_count()) > 1e5) {
        ++skipped;
        continue;
      }
      const double oracle = isserlis_moment(q, spectrum);
      const double engine =
          q.kind == MomentKind::M ? m_moment(q, table) : n_moment(q, table);
      double e = rel_err(engine, oracle);
      if (q.kind == MomentKind::N) e = std::max(e, rel_err(n_moment_closed(q, table), oracle));
      if (e > worst) {
        worst = e;
        worst_query = describe(q);
      }
      ++compared;
    }
    if (compared == 0) {
      res.checks.push_back(skip("moment_oracle", "every query exceeds the oracle size limit"));
    } else {
      std::string detail = std::to_string(compared) + " queries, max rel err " + fmt(worst);
      if (!worst_query.empty()) detail += " at " + worst_query;
      if (skipped) detail += "; " + std::to_string(skipped) + " skipped by size limit";
      res.checks.push_back(make("moment_oracle", worst <= 1e-10, detail));
    }
  }

  try {
    const VarianceReport brute = brute_variance(p, n, spectrum);
    const double e = rel_err(brute.variance, exact.variance);
    res.checks.push_back(make("brute_variance", e <= 1e-10,
                              "oracle " + fmt(brute.variance) + " vs recursion " + fmt(exact.variance) +
                                  ", rel err " + fmt(e)));
  } catch (const SizeGuardError& ex) {
    res.checks.push_back(skip("brute_variance", std::string("skipped: ") + ex.what()));
  }

  {
    bool ok = true;
    std::string detail = "pair counts and cycle-count ratio identities exact for q = 0.." + std::to_string(p);
    for (int q = 0; q <= p; ++q) {
      if (pair_count_ratio(n, p, q) != pair_count_ratio_closed_form(n, p, q)) {
        ok = false;
        detail = "ratio identity fails at q = " + std::to_string(q);
      }
    }
    if (n >= 2 * p) {
      for (int q = 0; q <= p; ++q) {
        if (!pair_ratio_bound(n, p, q).holds) {
          ok = false;
          detail = "ratio inequality fails at q = " + std::to_string(q);
        }
      }
      if (ok) detail += "; ratio inequality holds";
    }
    res.checks.push_back(make("counting_identities", ok, detail));
  }

  {
    SketchConfig cfg;
    cfg.p = p;
    cfg.n = n;
    cfg.seed = o.seed;
    cfg.reps = o.reps;
    cfg.spectrum = spectrum;
    const EstimateStats st = run_experiment(cfg, o.threads);
    if (st.stderr_mean) {
      const double dev = std::abs(st.empirical_mean - table[p]);
      res.checks.push_back(make("monte_carlo_mean", dev <= 4.0 * *st.stderr_mean,
                                "mean " + fmt(st.empirical_mean) + " vs " + fmt(table[p]) +
                                    ", 4 se = " + fmt(4.0 * *st.stderr_mean)));
    } else {
      res.checks.push_back(skip("monte_carlo_mean", "needs reps >= 2"));
    }
    if (st.stderr_variance) {
      const double dev = std::abs(*st.empirical_variance - exact.variance);
      const double tol = std::max(4.0 * *st.stderr_variance, 0.05 * exact.variance);
      res.checks.push_back(make("monte_carlo_variance", dev <= tol,
                                "empirical " + fmt(*st.empirical_variance) + " vs exact " +
                                    fmt(exact.variance) + ", tolerance " + fmt(tol)));
    } else {
      res.checks.push_back(skip("monte_carlo_variance", "needs reps >= 60"));
    }
  }

  {
    BoundReport b = new_bound(p, n, static_cast<int>(d), table[p]);
    b.attach_exact(exact.variance);
    const bool ok = exact.variance <= b.new_bound;
    res.checks.push_back(make("bound_soundness", ok,
                              "exact " + fmt(exact.variance) + " vs bound " + fmt(b.new_bound)));
    if (!ok) {
      res.errata.push_back({"bound_soundness", b.new_bound, exact.variance, false,
                            "four-term bound is below the exact variance"});
    }
  }

  {
    // Report-only: containment is recorded, never asserted.
    res.sandwiches.push_back(moment_sandwich_check({MomentKind::N, {1}, {1}}, table, p));
    res.sandwiches.push_back(moment_sandwich_check({MomentKind::M, {1, 1}, {1, 1}}, table, p));
    if (p >= 3) {
      res.sandwiches.push_back(
          moment_sandwich_check({MomentKind::M, std::vector<int>(2, p / 2), std::vector<int>(2, p - p / 2)},
                                table, p));
    }
  }

  {
    const MomentQuery q{MomentKind::M, {1, 1}, {1, 1}};
    const double literal = m_moment_single_sum(q, table);
    const double normative = m_moment(q, table);
    res.errata.push_back({"m_moment_single_sum", literal, normative, true,
                          "single-sum expression for M(2;1,1|1,1) gives 2 S4 + S2^2; "
                          "the recursion and the Wick oracle give 6 S4 + 3 S2^2"});
    if (p >= 2) {
      const auto lit = variance_single_sum(p, n, table);
      res.errata.push_back({"variance_single_sum", lit.literal.variance, lit.normative_variance, true,
                            "variance assembled from the single-sum expression; convention: " +
                                lit.convention});
    }
  }
  return res;
}

Json ValidationResult::to_json() const {
  Json j;
  j["passed"] = passed();
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name}, {"status", cli::to_string(c.status)}, {"detail", c.detail}});
  }
  j["checks"] = cs;
  Json sw = Json::array();
  for (const auto& s : sandwiches) {
    Json e = Json::array();
    for (const auto& en : s.entries) {
      e.push_back({{"name", en.name},
                   {"condition", en.condition},
                   {"condition_holds", en.condition_holds},
                   {"lower", en.interval.lo},
                   {"upper", en.interval.hi},
                   {"contains", en.contains}});
    }
    sw.push_back({{"kind", s.kind == MomentKind::M ? "M" : "N"},
                  {"q", s.q},
                  {"value", s.value},
                  {"entries", e}});
  }
  j["sandwich"] = sw;
  Json er = Json::array();
  for (const auto& e : errata) {
    er.push_back({{"name", e.name},
                  {"literal", e.literal},
                  {"normative", e.normative},
                  {"difference", e.literal - e.normative},
                  {"expected", e.expected},
                  {"detail", e.detail}});
  }
  j["errata"] = er;
  return j;
}

}  // namespace schatten::cli
