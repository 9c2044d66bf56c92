#include "schatten/isserlis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "schatten/errors.hpp"
#include "schatten/summation.hpp"

namespace schatten {

namespace {

// Sum over perfect matchings of coords[0..n) of prod delta(coords[a], coords[b]).
long wick_pairings(int* coords, int n) {
  if (n == 0) return 1;
  if (n % 2 != 0) return 0;
  long total = 0;
  for (int j = 1; j < n; ++j) {
    if (coords[0] != coords[j]) continue;
    // Remove positions 0 and j, recurse on the rest.
    std::array<int, 16> rest{};
    int r = 0;
    for (int t = 1; t < n; ++t) {
      if (t != j) rest[static_cast<std::size_t>(r++)] = coords[t];
    }
    total += wick_pairings(rest.data(), r);
  }
  return total;
}

// Same pairing sum with a covariance matrix in place of delta.
double wick_pairings_cov(const std::array<int, 4>& idx, const Eigen::VectorXd& var) {
  auto cov = [&](int a, int b) { return a == b ? var(a) : 0.0; };
  return cov(idx[0], idx[1]) * cov(idx[2], idx[3]) + cov(idx[0], idx[2]) * cov(idx[1], idx[3]) +
         cov(idx[0], idx[3]) * cov(idx[1], idx[2]);
}

}  // namespace

int IsserlisQuery::link_count() const {
  int total = 0;
  for (const auto& c : chains) total += static_cast<int>(c.size());
  return total;
}

double isserlis_expectation(const IsserlisQuery& query, const Spectrum& spectrum,
                            double tuple_limit) {
  const int links = query.link_count();
  const int d = static_cast<int>(spectrum.dimension());
  if (links == 0) return 1.0;
  if (std::pow(static_cast<double>(d), links) > tuple_limit) {
    throw SizeGuardError("Isserlis enumeration needs d^" + std::to_string(links) + " = " +
                         std::to_string(std::pow(static_cast<double>(d), links)) +
                         " tuples, above the limit of " + std::to_string(tuple_limit));
  }

  // Flatten: link t carries index j_t and weight lambda_{j_t}^{e_t}; factor t
  // reads coordinates j_{prev(t)} and j_t of its vector.
  std::vector<int> exponent(static_cast<std::size_t>(links));
  std::map<int, std::vector<int>> coords_of;  // vector id -> link ids
  int max_exponent = 0;
  int offset = 0;
  for (const auto& chain : query.chains) {
    const int len = static_cast<int>(chain.size());
    for (int t = 0; t < len; ++t) {
      const auto& f = chain[static_cast<std::size_t>(t)];
      if (f.exponent < 0) throw InputError("chain exponents must be non-negative");
      exponent[static_cast<std::size_t>(offset + t)] = f.exponent;
      max_exponent = std::max(max_exponent, f.exponent);
      const int prev = offset + (t + len - 1) % len;
      auto& c = coords_of[f.vector];
      c.push_back(prev);
      c.push_back(offset + t);
    }
    offset += len;
  }
  std::vector<std::vector<int>> groups;
  for (auto& [id, c] : coords_of) {
    if (c.size() > 16) throw InputError("a vector may occur at most 8 times in an Isserlis query");
    groups.push_back(c);
  }

  const auto eig = spectrum.eigenvalues();
  std::vector<std::vector<double>> powers(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(max_exponent) + 1));
  for (int j = 0; j < d; ++j) {
    double v = 1.0;
    for (int e = 0; e <= max_exponent; ++e) {
      powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] = v;
      v *= eig[static_cast<std::size_t>(j)];
    }
  }

  std::vector<int> tuple(static_cast<std::size_t>(links), 0);
  std::array<int, 16> buf{};
  CompensatedSum sum;
  while (true) {
    long wick = 1;
    for (const auto& g : groups) {
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] = tuple[static_cast<std::size_t>(g[i])];
      wick *= wick_pairings(buf.data(), static_cast<int>(g.size()));
      if (wick == 0) break;
    }
    if (wick != 0) {
      double weight = static_cast<double>(wick);
      for (int t = 0; t < links; ++t) {
        weight *= powers[static_cast<std::size_t>(tuple[static_cast<std::size_t>(t)])]
                        [static_cast<std::size_t>(exponent[static_cast<std::size_t>(t)])];
      }
      sum.add(weight);
    }
    // Odometer step, last link fastest.
    int pos = links - 1;
    while (pos >= 0 && ++tuple[static_cast<std::size_t>(pos)] == d) {
      tuple[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return sum.value();
}

IsserlisQuery isserlis_query(const MomentQuery& query) {
  query.validate();
  const int q = query.q();
  TraceChain chain;
  chain.reserve(static_cast<std::size_t>(2 * q));
  for (int i = 0; i < q; ++i) chain.push_back({i, query.k[static_cast<std::size_t>(i)]});
  if (query.kind == MomentKind::M) {
    for (int i = 0; i < q; ++i) chain.push_back({i, query.m[static_cast<std::size_t>(i)]});
  } else {
    for (int i = q - 1; i >= 0; --i) chain.push_back({i, query.m[static_cast<std::size_t>(i)]});
  }
  return IsserlisQuery{{std::move(chain)}};
}

double isserlis_moment(const MomentQuery& query, const Spectrum& spectrum) {
  return isserlis_expectation(isserlis_query(query), spectrum);
}

Eigen::MatrixXd wick_quartic_expectation(const Eigen::MatrixXd& A, const Eigen::VectorXd& lambda) {
  const Eigen::Index d = lambda.size();
  if (A.rows() != d || A.cols() != d) throw InputError("A must be d x d");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      CompensatedSum s;
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          // (X X^T A X X^T)_{ab} = X_a X_c A_{ce} X_e X_b
          s.add(A(c, e) * wick_pairings_cov({a, c, e, b}, lambda));
        }
      }
      out(a, b) = s.value();
    }
  }
  return out;
}

double quartic_identity_residual(const Eigen::MatrixXd& A, const Spectrum& lambda) {
  const auto d = static_cast<Eigen::Index>(lambda.dimension());
  if (d > 6) throw InputError("quartic identity check is limited to d <= 6");
  Eigen::VectorXd diag(d);
  for (Eigen::Index i = 0; i < d; ++i) diag(i) = lambda.eigenvalues()[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd L = diag.asDiagonal();
  const Eigen::MatrixXd lhs = wick_quartic_expectation(A, diag);
  const Eigen::MatrixXd rhs = L * (A + A.transpose()) * L + (A * L).trace() * L;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace schatten
