#include "schatten/moments.hpp"

#include <cmath>

#include "schatten/errors.hpp"
#include "schatten/summation.hpp"
#include "schatten/word_algebra.hpp"

namespace schatten {

void MomentQuery::validate() const {
  if (k.empty()) throw InputError("moment query needs q >= 1");
  if (k.size() != m.size()) throw InputError("moment query needs |k| == |m| == q");
  for (int v : k) {
    if (v < 0) throw InputError("moment exponents must be non-negative");
  }
  for (int v : m) {
    if (v < 0) throw InputError("moment exponents must be non-negative");
  }
}

std::vector<int> n_moment_letters(const std::vector<int>& k, const std::vector<int>& m) {
  const std::size_t q = k.size();
  std::vector<int> letters(q + 1);
  letters[0] = m[0];
  for (std::size_t i = 1; i < q; ++i) letters[i] = k[i - 1] + m[i];
  letters[q] = k[q - 1];
  return letters;
}

double MomentEngine::base(int k, int m) const {
  return 2.0 * table_[k + m] + table_[k] * table_[m];
}

double MomentEngine::n_moment(const std::vector<int>& k, const std::vector<int>& m) {
  const std::size_t q = k.size();
  if (q == 1) return base(k[0], m[0]);

  Key key{k, m};
  if (auto it = n_memo_.find(key); it != n_memo_.end()) return it->second;

  // Integrate out X_q, which sits between the two passes:
  // E[X X^T A X X^T] = 2A + Tr(A) I for symmetric A = S^{k_q}.
  const int kq = k[q - 1];
  const int mq = m[q - 1];
  std::vector<int> k_merge(k.begin(), k.end() - 1);
  std::vector<int> k_trace(k_merge);
  k_merge.back() += kq + mq;
  k_trace.back() += mq;
  const std::vector<int> m_rest(m.begin(), m.end() - 1);

  const double value = 2.0 * n_moment(k_merge, m_rest) + table_[kq] * n_moment(k_trace, m_rest);
  n_memo_.emplace(std::move(key), value);
  return value;
}

double MomentEngine::m_moment(const std::vector<int>& k, const std::vector<int>& m) {
  const std::size_t q = k.size();
  if (q == 1) return base(k[0], m[0]);

  Key key{k, m};
  if (auto it = m_memo_.find(key); it != m_memo_.end()) return it->second;

  // Integrate out the last vector X_{q}; with r = q - 1 remaining vectors:
  //   M(r; k_1..k_r + k_q | m_1..m_r + m_q)
  // + N(r; k_1..k_r + m_r | m_{r-1}..m_1, k_q + m_q)      (written order)
  // + M(r; k_1..k_r + m_q | m_1..m_r + k_q)
  const std::size_t r = q - 1;
  const int k_last = k[r];
  const int m_last = m[r];

  std::vector<int> k1(k.begin(), k.end() - 1);
  std::vector<int> m1(m.begin(), m.end() - 1);
  k1.back() += k_last;
  m1.back() += m_last;

  std::vector<int> kn(k.begin(), k.end() - 1);
  kn.back() += m[r - 1];
  // Index order for N: X_1 carries k_q + m_q, X_i carries m_{i-1} for i >= 2.
  std::vector<int> mn(r);
  mn[0] = k_last + m_last;
  for (std::size_t i = 1; i < r; ++i) mn[i] = m[i - 1];

  std::vector<int> k3(k.begin(), k.end() - 1);
  std::vector<int> m3(m.begin(), m.end() - 1);
  k3.back() += m_last;
  m3.back() += k_last;

  const double value = m_moment(k1, m1) + n_moment(kn, mn) + m_moment(k3, m3);
  m_memo_.emplace(std::move(key), value);
  return value;
}

double MomentEngine::evaluate(const MomentQuery& query) {
  query.validate();
  return query.kind == MomentKind::M ? m_moment(query.k, query.m) : n_moment(query.k, query.m);
}

double base_moment(int k, int m, const TracePowerTable& table) {
  if (k < 0 || m < 0) throw InputError("moment exponents must be non-negative");
  return MomentEngine(table).base(k, m);
}

double n_moment(const MomentQuery& query, const TracePowerTable& table) {
  if (query.kind != MomentKind::N) throw InputError("n_moment expects an N query");
  MomentEngine engine(table);
  return engine.evaluate(query);
}

double n_moment_closed(const MomentQuery& query, const TracePowerTable& table) {
  if (query.kind != MomentKind::N) throw InputError("n_moment_closed expects an N query");
  query.validate();
  return star_sum(n_moment_letters(query.k, query.m), table);
}

double m_moment(const MomentQuery& query, const TracePowerTable& table) {
  if (query.kind != MomentKind::M) throw InputError("m_moment expects an M query");
  MomentEngine engine(table);
  return engine.evaluate(query);
}

double m_moment_single_sum(const MomentQuery& query, const TracePowerTable& table) {
  if (query.kind != MomentKind::M) throw InputError("m_moment_single_sum expects an M query");
  query.validate();
  const int q = query.q();
  if (q < 2) throw InputError("the single-sum M expression is stated for q >= 2");

  const auto& k = query.k;
  const auto& m = query.m;
  auto at = [](const std::vector<int>& v, int one_based) {
    return v[static_cast<std::size_t>(one_based - 1)];
  };

  MomentEngine engine(table);
  CompensatedSum sum;
  for (int t = 1; t <= q - 1; ++t) {
    const int r = q - t;
    int tail = 0;
    for (int l = r + 1; l <= q; ++l) tail += at(k, l) + at(m, l);

    std::vector<int> kn(static_cast<std::size_t>(r));
    for (int i = 1; i <= r; ++i) kn[static_cast<std::size_t>(i - 1)] = at(k, i);
    kn.back() += at(m, r);
    // Written order m_{r-1}, ..., m_1, tail  ->  index order tail, m_1, ..., m_{r-1}.
    std::vector<int> mn(static_cast<std::size_t>(r));
    mn[0] = tail;
    for (int i = 2; i <= r; ++i) mn[static_cast<std::size_t>(i - 1)] = at(m, i - 1);

    sum.add(std::ldexp(engine.n_moment(kn, mn), t - 1));
  }
  return sum.value();
}

}  // namespace schatten
