#include "schatten/variance.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "schatten/errors.hpp"
#include "schatten/isserlis.hpp"
#include "schatten/summation.hpp"
#include "schatten/word_algebra.hpp"

namespace schatten {

namespace {

void check_order(int p, int n) {
  if (p < 1) throw InputError("p must be >= 1");
  if (n < p) throw InputError("n must be >= p");
}

void check_table(const TracePowerTable& table, int p) {
  if (table.k_max() < 2 * p) {
    throw RangeError("trace power table must reach k = 2p = " + std::to_string(2 * p));
  }
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }
double to_double(const BigRational& v) { return v.convert_to<double>(); }

// Assembles a report from per-class values in class order.
VarianceReport assemble(int p, int n, const TracePowerTable& table,
                        const std::vector<OverlapPattern>& classes,
                        const std::vector<double>& values) {
  const BigInt denom = binomial(n, p) * binomial(n, p);
  VarianceReport report;
  report.p = p;
  report.n = n;
  report.d = table.dimension();
  report.mean = table[p];

  std::vector<CompensatedSum> q_sums(static_cast<std::size_t>(p) + 1);
  report.per_q.resize(static_cast<std::size_t>(p) + 1);
  for (int q = 0; q <= p; ++q) report.per_q[static_cast<std::size_t>(q)].q = q;

  CompensatedSum second;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& cls = classes[i];
    if (cls.multiplicity == 0) continue;
    const auto qi = static_cast<std::size_t>(cls.q);
    report.per_q[qi].count += cls.multiplicity;
    q_sums[qi].add(to_double(cls.multiplicity) * values[i]);
    second.add(to_double(BigRational(cls.multiplicity, denom)) * values[i]);
  }
  for (std::size_t q = 0; q < q_sums.size(); ++q) report.per_q[q].sum = q_sums[q].value();
  report.second_moment = second.value();
  report.variance = report.second_moment - report.mean * report.mean;
  return report;
}

}  // namespace

BigInt VarianceReport::total_pairs() const {
  BigInt total = 0;
  for (const auto& c : per_q) total += c.count;
  return total;
}

double pair_expectation(const OverlapPattern& pattern, MomentEngine& engine, int p) {
  const auto& t = engine.table();
  if (pattern.q == 0) return t[p] * t[p];
  if (pattern.q == 1) {
    // Folded exponents are (p | p) for any single shared index.
    return 2.0 * t[2 * p] + t[p] * t[p];
  }
  return engine.m_moment(pattern.folded_k(), pattern.folded_m());
}

double pair_expectation(const OverlapPattern& pattern, const TracePowerTable& table, int p) {
  pattern.check(p);
  check_table(table, p);
  MomentEngine engine(table);
  return pair_expectation(pattern, engine, p);
}

VarianceReport exact_variance(int p, int n, const TracePowerTable& table,
                              const VarianceOptions& options) {
  check_order(p, n);
  check_table(table, p);
  const auto classes = enumerate_pattern_classes(n, p, options.enumeration);
  std::vector<double> values(classes.size(), 0.0);

  const unsigned workers =
      std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(classes.size())));
  auto run = [&](std::size_t begin, std::size_t end) {
    MomentEngine engine(table);
    for (std::size_t i = begin; i < end; ++i) {
      if (classes[i].multiplicity != 0) values[i] = pair_expectation(classes[i], engine, p);
    }
  };
  if (workers == 1) {
    run(0, classes.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (classes.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(classes.size(), w * chunk);
      const std::size_t end = std::min(classes.size(), begin + chunk);
      pool.emplace_back(run, begin, end);
    }
  }
  return assemble(p, n, table, classes, values);
}

double exact_variance_closed_p2(int n, const TracePowerTable& table) {
  if (n < 2) throw InputError("the p = 2 closed form needs n >= 2");
  check_table(table, 2);
  const double t2 = table[2];
  const double t4 = table[4];
  const BigInt denom = binomial(n, 2) * binomial(n, 2);
  const double c_disjoint = to_double(BigRational(6 * binomial(n, 4), denom));
  const double c_single = to_double(BigRational(6 * binomial(n, 3), denom));
  const double c_same = to_double(BigRational(binomial(n, 2), denom));
  const double second = c_disjoint * t2 * t2 + c_single * (2.0 * t4 + t2 * t2) +
                        c_same * (6.0 * t4 + 3.0 * t2 * t2);
  return second - t2 * t2;
}

LiteralVarianceReport variance_single_sum(int p, int n, const TracePowerTable& table) {
  check_order(p, n);
  check_table(table, p);
  const auto classes = enumerate_pattern_classes(n, p);
  const double tp = table[p];
  std::vector<double> values(classes.size(), 0.0);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& cls = classes[i];
    if (cls.q == 0) {
      values[i] = tp * tp;
    } else if (cls.q == 1) {
      values[i] = 2.0 * table[2 * p] + tp * tp;
    } else {
      const auto k = cls.folded_k();
      const auto m = cls.folded_m();
      const int q = cls.q;
      CompensatedSum s;
      for (int t = 1; t <= q - 1; ++t) {
        const int r = q - t;
        std::vector<int> beta(static_cast<std::size_t>(r) + 1);
        int tail = 0;
        for (int l = r + 1; l <= q; ++l) {
          tail += k[static_cast<std::size_t>(l - 1)] + m[static_cast<std::size_t>(l - 1)];
        }
        beta[0] = tail;
        for (int i2 = 1; i2 <= r; ++i2) {
          beta[static_cast<std::size_t>(i2)] =
              k[static_cast<std::size_t>(i2 - 1)] + m[static_cast<std::size_t>(i2 - 1)];
        }
        s.add(std::ldexp(star_sum(beta, table), t - 1));
      }
      values[i] = s.value();
    }
  }
  LiteralVarianceReport out;
  out.literal = assemble(p, n, table, classes, values);
  out.normative_variance = exact_variance(p, n, table).variance;
  out.discrepancy = out.literal.variance - out.normative_variance;
  out.convention =
      "beta^{q-t} built from folded overlap statistics (k_q + k_0, m_q + m_0); "
      "beta_0 = K_{q-t+1,q} + M_{q-t+1,q}, beta_i = k_i + m_i for 1 <= i <= q-t";
  return out;
}

void check_brute_guard(int p, int n, std::size_t d) {
  const double pairs = std::pow(to_double(binomial(n, p)), 2);
  const double tuples = std::pow(static_cast<double>(d), 2 * p);
  if (pairs > kBruteMaxPairs || tuples > kBruteMaxTuplesPerPair || pairs * tuples > kBruteMaxWork) {
    throw SizeGuardError("brute-force variance limits: C(n,p)^2 <= 1e6, d^(2p) <= 1e7, product <= 1e8; "
                         "requested C(n,p)^2 = " + std::to_string(pairs) +
                         ", d^(2p) = " + std::to_string(tuples));
  }
}

VarianceReport brute_variance(int p, int n, const Spectrum& spectrum) {
  check_order(p, n);
  check_brute_guard(p, n, spectrum.dimension());
  const auto cycles = enumerate_increasing_cycles(n, p);

  VarianceReport report;
  report.p = p;
  report.n = n;
  report.d = spectrum.dimension();
  CompensatedSum mean;
  for (double lambda : spectrum.eigenvalues()) mean.add(std::pow(lambda, p));
  report.mean = mean.value();
  report.per_q.resize(static_cast<std::size_t>(p) + 1);
  for (int q = 0; q <= p; ++q) report.per_q[static_cast<std::size_t>(q)].q = q;
  std::vector<CompensatedSum> q_sums(static_cast<std::size_t>(p) + 1);

  CompensatedSum total;
  for (const auto& sigma : cycles) {
    for (const auto& tau : cycles) {
      IsserlisQuery query;
      TraceChain a;
      TraceChain b;
      for (int v : sigma.indices()) a.push_back({v, 1});
      for (int v : tau.indices()) b.push_back({v, 1});
      query.chains = {std::move(a), std::move(b)};
      const double e = isserlis_expectation(query, spectrum);

      std::vector<int> shared;
      std::set_intersection(sigma.indices().begin(), sigma.indices().end(), tau.indices().begin(),
                            tau.indices().end(), std::back_inserter(shared));
      const auto q = shared.size();
      report.per_q[q].count += 1;
      q_sums[q].add(e);
      total.add(e);
    }
  }
  for (std::size_t q = 0; q < q_sums.size(); ++q) report.per_q[q].sum = q_sums[q].value();
  const double pairs = to_double(binomial(n, p) * binomial(n, p));
  report.second_moment = total.value() / pairs;
  report.variance = report.second_moment - report.mean * report.mean;
  return report;
}

}  // namespace schatten
