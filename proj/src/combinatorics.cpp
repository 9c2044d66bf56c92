#include "schatten/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "schatten/errors.hpp"

namespace schatten {

namespace {

// Calls f(indices) for every k-subset of {0, ..., n-1} in lexicographic order.
template <typename F>
void for_each_combination(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

BigRational rational_pow(const BigRational& base, int exponent) {
  BigRational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (long i = 1; i <= k; ++i) {
    out *= (n - k + i);
    out /= i;
  }
  return out;
}

IncreasingCycle::IncreasingCycle(std::vector<int> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw InputError("a cycle needs at least one index");
  if (indices_.front() < 1) throw InputError("cycle indices are 1-based");
  for (std::size_t i = 1; i < indices_.size(); ++i) {
    if (indices_[i] <= indices_[i - 1]) {
      throw InputError("cycle indices must be strictly increasing");
    }
  }
}

int OverlapPattern::p() const {
  int total = 0;
  for (int v : k) total += v;
  return total;
}

int OverlapPattern::K(int i, int j) const {
  int total = 0;
  for (int l = i; l <= j; ++l) total += k.at(static_cast<std::size_t>(l));
  return total;
}

int OverlapPattern::M(int i, int j) const {
  int total = 0;
  for (int l = i; l <= j; ++l) total += m.at(static_cast<std::size_t>(l));
  return total;
}

std::vector<int> OverlapPattern::folded_k() const {
  if (q < 1) throw InputError("folded exponents need at least one shared index");
  std::vector<int> out(k.begin() + 1, k.end());
  out.back() += k.front();
  return out;
}

std::vector<int> OverlapPattern::folded_m() const {
  if (q < 1) throw InputError("folded exponents need at least one shared index");
  std::vector<int> out(m.begin() + 1, m.end());
  out.back() += m.front();
  return out;
}

void OverlapPattern::check(int order) const {
  if (q < 0) throw InputError("overlap size must be non-negative");
  if (q == 0) {
    if (k != std::vector<int>{order} || m != std::vector<int>{order}) {
      throw InputError("disjoint pattern must have k_0 = m_0 = p");
    }
    return;
  }
  if (k.size() != static_cast<std::size_t>(q) + 1 || m.size() != k.size()) {
    throw InputError("pattern vectors must have q + 1 entries");
  }
  int sk = 0;
  int sm = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0 || m[i] < 0) throw InputError("pattern counts must be non-negative");
    if (i >= 1 && (k[i] < 1 || m[i] < 1)) {
      throw InputError("windows after a shared index must contain it");
    }
    sk += k[i];
    sm += m[i];
  }
  if (sk != order || sm != order) throw InputError("pattern counts must sum to p");
}

std::strong_ordering OverlapPattern::operator<=>(const OverlapPattern& other) const {
  if (auto c = q <=> other.q; c != 0) return c;
  if (auto c = k <=> other.k; c != 0) return c;
  return m <=> other.m;
}

bool OverlapPattern::operator==(const OverlapPattern& other) const {
  return q == other.q && k == other.k && m == other.m;
}

std::vector<IncreasingCycle> enumerate_increasing_cycles(int n, int p) {
  if (p < 1) throw InputError("cycle length p must be >= 1");
  std::vector<IncreasingCycle> out;
  if (p > n) return out;
  for_each_combination(n, p, [&](const std::vector<int>& idx) {
    std::vector<int> one_based(idx);
    for (int& v : one_based) ++v;
    out.emplace_back(std::move(one_based));
  });
  return out;
}

OverlapPattern overlap_decompose(const IncreasingCycle& sigma_in, const IncreasingCycle& tau_in) {
  if (sigma_in.length() != tau_in.length()) {
    throw InputError("cycles must have equal length");
  }
  const bool swap = sigma_in.front() > tau_in.front();
  const auto& sigma = swap ? tau_in.indices() : sigma_in.indices();
  const auto& tau = swap ? sigma_in.indices() : tau_in.indices();
  const int p = sigma_in.length();

  std::vector<int> gamma;
  std::set_intersection(sigma.begin(), sigma.end(), tau.begin(), tau.end(),
                        std::back_inserter(gamma));

  OverlapPattern pat;
  pat.q = static_cast<int>(gamma.size());
  if (pat.q == 0) {
    pat.k = {p};
    pat.m = {p};
    return pat;
  }

  auto windows = [&](const std::vector<int>& cyc) {
    std::vector<int> counts(gamma.size() + 1, 0);
    for (int j : cyc) {
      // Number of gamma elements <= j selects the window.
      const auto w = std::upper_bound(gamma.begin(), gamma.end(), j) - gamma.begin();
      ++counts[static_cast<std::size_t>(w)];
    }
    return counts;
  };
  pat.k = windows(sigma);
  pat.m = windows(tau);
  return pat;
}

std::vector<OverlapPattern> enumerate_pattern_classes(int n, int p, PatternEnumeration mode) {
  if (p < 1 || p > n) {
    throw InputError("pattern classes need 1 <= p <= n (got p = " + std::to_string(p) +
                     ", n = " + std::to_string(n) + ")");
  }
  std::map<OverlapPattern, BigInt> counts;

  if (mode == PatternEnumeration::AllPairs) {
    const auto cycles = enumerate_increasing_cycles(n, p);
    for (const auto& sigma : cycles) {
      for (const auto& tau : cycles) ++counts[overlap_decompose(sigma, tau)];
    }
    std::vector<OverlapPattern> out;
    out.reserve(counts.size());
    for (auto& [pat, c] : counts) {
      OverlapPattern cls = pat;
      cls.multiplicity = c;
      out.push_back(std::move(cls));
    }
    return out;
  }

  std::map<OverlapPattern, BigInt> weighted;
  for (int q = 0; q <= p; ++q) {
    const int s = 2 * p - q;
    const BigInt embeddings = binomial(n, s);
    std::map<OverlapPattern, BigInt> local;
    // sigma is any p-subset of [1, s]; tau must cover the complement and
    // share exactly q elements of sigma.
    for_each_combination(s, p, [&](const std::vector<int>& sig) {
      std::vector<int> in_sigma(static_cast<std::size_t>(s), 0);
      for (int v : sig) in_sigma[static_cast<std::size_t>(v)] = 1;
      std::vector<int> complement;
      for (int v = 0; v < s; ++v) {
        if (!in_sigma[static_cast<std::size_t>(v)]) complement.push_back(v + 1);
      }
      std::vector<int> sigma1(sig);
      for (int& v : sigma1) ++v;
      const IncreasingCycle sigma(sigma1);
      for_each_combination(p, q, [&](const std::vector<int>& shared) {
        std::vector<int> tau(complement);
        for (int i : shared) tau.push_back(sigma1[static_cast<std::size_t>(i)]);
        std::sort(tau.begin(), tau.end());
        ++local[overlap_decompose(sigma, IncreasingCycle(tau))];
      });
    });
    for (auto& [pat, c] : local) weighted[pat] += c * embeddings;
  }
  std::vector<OverlapPattern> out;
  out.reserve(weighted.size());
  for (auto& [pat, c] : weighted) {
    OverlapPattern cls = pat;
    cls.multiplicity = c;
    out.push_back(std::move(cls));
  }
  return out;
}

BigInt pair_count(int n, int p, int q) {
  if (q < 0 || q > p || p < 0) return 0;
  return binomial(n, 2 * p - q) * binomial(2 * p - q, q) * binomial(2 * p - 2 * q, p - q);
}

BigInt pair_count_ratio(int n, int p, int q) {
  const BigInt denom = binomial(n, p);
  if (denom == 0) throw InputError("pair count ratio needs n >= p >= 0");
  const BigInt num = pair_count(n, p, q);
  if (num % denom != 0) {
    throw NumericalError("pair count is not divisible by C(n, p)");
  }
  return num / denom;
}

BigInt pair_count_ratio_closed_form(int n, int p, int q) {
  return binomial(n - p, p - q) * binomial(p, q);
}

PairRatioBound pair_ratio_bound(int n, int p, int q) {
  if (q < 0 || q > p || n <= q || n < p) {
    throw InputError("pair ratio bound needs 0 <= q <= p <= n and n > q");
  }
  PairRatioBound out;
  out.ratio = BigRational(binomial(n - p, p - q), binomial(n, p));
  out.first = rational_pow(BigRational(n - p, n - q), p - q);
  out.second = rational_pow(BigRational(p, n), q);
  out.holds = out.ratio <= std::min(out.first, out.second);
  return out;
}

}  // namespace schatten
