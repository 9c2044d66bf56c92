#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "oracles.hpp"
#include "schatten/combinatorics.hpp"
#include "schatten/errors.hpp"

using namespace schatten;

TEST_CASE("increasing cycles") {
  const auto c = enumerate_increasing_cycles(3, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0].indices() == std::vector<int>{1, 2});
  CHECK(c[1].indices() == std::vector<int>{1, 3});
  CHECK(c[2].indices() == std::vector<int>{2, 3});
  CHECK(enumerate_increasing_cycles(4, 4).size() == 1);
  CHECK(enumerate_increasing_cycles(5, 2).size() == 10);
  CHECK(enumerate_increasing_cycles(2, 3).empty());
  CHECK_THROWS_AS(IncreasingCycle({2, 2}), InputError);
  CHECK_THROWS_AS(IncreasingCycle({0, 1}), InputError);
}

TEST_CASE("overlap statistics of the worked example") {
  const auto pat = overlap_decompose(IncreasingCycle({1, 3, 5, 7, 9}), IncreasingCycle({3, 4, 5, 6, 7}));
  CHECK(pat.q == 3);
  CHECK(pat.k == std::vector<int>{1, 1, 1, 2});
  CHECK(pat.m == std::vector<int>{0, 2, 2, 1});
  CHECK(pat.K(1, 3) == 4);
  CHECK(pat.M(0, 1) == 2);
  CHECK(pat.K(3, 2) == 0);
}

TEST_CASE("overlap statistics of small pairs") {
  const auto same = overlap_decompose(IncreasingCycle({2, 5}), IncreasingCycle({2, 5}));
  CHECK(same.q == 2);
  CHECK(same.k == std::vector<int>{0, 1, 1});
  CHECK(same.m == std::vector<int>{0, 1, 1});

  const auto disjoint = overlap_decompose(IncreasingCycle({1, 2}), IncreasingCycle({3, 4}));
  CHECK(disjoint.q == 0);
  CHECK(disjoint.k == std::vector<int>{2});
  CHECK(disjoint.m == std::vector<int>{2});

  // Roles swap so that the first cycle starts first.
  const auto a = overlap_decompose(IncreasingCycle({2, 4}), IncreasingCycle({1, 4}));
  const auto b = overlap_decompose(IncreasingCycle({1, 4}), IncreasingCycle({2, 4}));
  CHECK(a == b);

  CHECK_THROWS_AS(overlap_decompose(IncreasingCycle({1, 2}), IncreasingCycle({1, 2, 3})), InputError);
}

TEST_CASE("overlap invariants on random pairs") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 14);
    const int p = 1 + static_cast<int>(gen() % static_cast<unsigned>(n));
    auto draw = [&] {
      std::vector<int> all(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
      std::shuffle(all.begin(), all.end(), gen);
      std::vector<int> pick(all.begin(), all.begin() + p);
      std::sort(pick.begin(), pick.end());
      return IncreasingCycle(pick);
    };
    const IncreasingCycle s = draw();
    const IncreasingCycle t = draw();
    const auto pat = overlap_decompose(s, t);
    std::vector<int> shared;
    std::set_intersection(s.indices().begin(), s.indices().end(), t.indices().begin(), t.indices().end(),
                          std::back_inserter(shared));
    REQUIRE(pat.q == static_cast<int>(shared.size()));
    REQUIRE_NOTHROW(pat.check(p));
    REQUIRE(pat.K(0, pat.q) == p);
    REQUIRE(pat.M(0, pat.q) == p);
    for (int i = 1; i <= pat.q; ++i) {
      REQUIRE(pat.k[static_cast<std::size_t>(i)] >= 1);
      REQUIRE(pat.m[static_cast<std::size_t>(i)] >= 1);
    }
  }
}

TEST_CASE("pattern classes of n = 3, p = 2") {
  const auto classes = enumerate_pattern_classes(3, 2);
  BigInt by_q[3] = {0, 0, 0};
  for (const auto& c : classes) by_q[c.q] += c.multiplicity;
  CHECK(by_q[2] == 3);
  CHECK(by_q[1] == 6);
  CHECK(by_q[0] == 0);
}

TEST_CASE("pattern classes reproduce all ordered pairs") {
  for (int p = 1; p <= 4; ++p) {
    for (int n = p; n <= 12; ++n) {
      const auto counts = oracle::pair_counts_by_enumeration(n, p);
      std::vector<BigInt> by_q(static_cast<std::size_t>(p) + 1, 0);
      BigInt total = 0;
      for (const auto& c : enumerate_pattern_classes(n, p)) {
        by_q[static_cast<std::size_t>(c.q)] += c.multiplicity;
        total += c.multiplicity;
      }
      CAPTURE(n);
      CAPTURE(p);
      REQUIRE(total == binomial(n, p) * binomial(n, p));
      for (int q = 0; q <= p; ++q) {
        REQUIRE(by_q[static_cast<std::size_t>(q)] == counts[static_cast<std::size_t>(q)]);
        REQUIRE(pair_count(n, p, q) == counts[static_cast<std::size_t>(q)]);
      }
    }
  }
}

TEST_CASE("canonical and all-pairs enumeration agree") {
  for (int p = 1; p <= 3; ++p) {
    for (int n = p; n <= 7; ++n) {
      const auto a = enumerate_pattern_classes(n, p, PatternEnumeration::Canonical);
      const auto b = enumerate_pattern_classes(n, p, PatternEnumeration::AllPairs);
      std::map<OverlapPattern, BigInt> ma;
      std::map<OverlapPattern, BigInt> mb;
      for (const auto& c : a) if (c.multiplicity != 0) ma[c] += c.multiplicity;
      for (const auto& c : b) mb[c] += c.multiplicity;
      REQUIRE(ma == mb);
    }
  }
}

TEST_CASE("disjoint pair count at n = 2p") {
  for (int p = 1; p <= 5; ++p) {
    CHECK(pair_count(2 * p, p, 0) == oracle::choose(2 * p, p));
  }
}

TEST_CASE("pair counts") {
  CHECK(pair_count(6, 2, 1) == 120);
  CHECK(pair_count(3, 2, 2) == 3);
  CHECK(pair_count(3, 2, 0) == 0);
  for (int p = 1; p <= 6; ++p) {
    for (int n = p; n <= 20; ++n) {
      BigInt total = 0;
      for (int q = 0; q <= p; ++q) total += pair_count(n, p, q);
      REQUIRE(total == oracle::choose(n, p) * oracle::choose(n, p));
    }
  }
}

TEST_CASE("pair count ratio") {
  CHECK(pair_count_ratio(6, 2, 1) == 8);
  CHECK(pair_count_ratio(9, 5, 0) == 0);
  CHECK(pair_count_ratio(10, 3, 3) == 1);
  for (int p = 1; p <= 6; ++p)
    for (int n = p; n <= 20; ++n)
      for (int q = 0; q <= p; ++q) REQUIRE(pair_count_ratio(n, p, q) == oracle::choose(n - p, p - q) * oracle::choose(p, q));
}

TEST_CASE("pair count ratio inequality") {
  for (int n = 2; n <= 30; ++n)
    for (int p = 1; 2 * p <= n; ++p)
      for (int q = 0; q <= p; ++q) {
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(q);
        REQUIRE(pair_ratio_bound(n, p, q).holds);
      }
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}
