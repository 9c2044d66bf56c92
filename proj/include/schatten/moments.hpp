#pragma once

#include <map>
#include <utility>
#include <vector>

#include "schatten/spectrum.hpp"

namespace schatten {

enum class MomentKind { M, N };

/// Gaussian moment trace over q i.i.d. standard normal vectors X_1..X_q.
///
///   M(q; k | m) = E Tr( prod_i X_i X_i^T S^{k_i}  prod_i X_i X_i^T S^{m_i} )
///   N(q; k | m) = E Tr( prod_i X_i X_i^T S^{k_i}  prod_i X_{q+1-i} X_{q+1-i}^T S^{m_{q+1-i}} )
///
/// Both vectors are stored in index order: m[i-1] is always the exponent
/// following X_i in the second pass. For N the second pass visits
/// X_q, ..., X_1, so the conventional written form N(q; k_1..k_q | m_q..m_1)
/// lists `m` back to front.
struct MomentQuery {
  MomentKind kind = MomentKind::M;
  std::vector<int> k;
  std::vector<int> m;

  int q() const { return static_cast<int>(k.size()); }
  /// Throws InputError on empty or mismatched vectors or negative entries.
  void validate() const;
};

/// Letters (alpha_0, ..., alpha_q) = (m_1, k_1 + m_2, ..., k_{q-1} + m_q, k_q)
/// whose star sum equals N(q; k | m).
std::vector<int> n_moment_letters(const std::vector<int>& k, const std::vector<int>& m);

/// Recursive evaluator with a memo keyed on (kind, k, m). Not thread-safe;
/// use one engine per worker.
class MomentEngine {
 public:
  explicit MomentEngine(const TracePowerTable& table) : table_(table) {}

  /// 2 S_{k+m} + S_k S_m, the q = 1 value shared by M and N.
  double base(int k, int m) const;

  /// N through the one-vector-at-a-time recursion down to q = 1.
  double n_moment(const std::vector<int>& k, const std::vector<int>& m);

  /// M through the three-term recursion (one M-merge, one N, one M-swap).
  double m_moment(const std::vector<int>& k, const std::vector<int>& m);

  double evaluate(const MomentQuery& query);

  const TracePowerTable& table() const { return table_; }
  std::size_t memo_size() const { return n_memo_.size() + m_memo_.size(); }

 private:
  using Key = std::pair<std::vector<int>, std::vector<int>>;
  const TracePowerTable& table_;
  std::map<Key, double> n_memo_;
  std::map<Key, double> m_memo_;
};

double base_moment(int k, int m, const TracePowerTable& table);

/// Normative N evaluation (recursion). Requires kind == N.
double n_moment(const MomentQuery& query, const TracePowerTable& table);

/// N via the star sum over n_moment_letters. Requires kind == N.
double n_moment_closed(const MomentQuery& query, const TracePowerTable& table);

/// Normative M evaluation (recursion). Requires kind == M.
double m_moment(const MomentQuery& query, const TracePowerTable& table);

/// The single-sum expression
///   sum_{t=1}^{q-1} 2^{t-1} N(q-t; k_1, ..., k_{q-t} + m_{q-t} | m_{q-t-1}, ..., m_1, K + M)
/// with K + M = sum_{l=q-t+1}^{q} (k_l + m_l), evaluated as written.
/// Diagnostic only: it omits the M branches of the recursion and so
/// disagrees with m_moment for q >= 2. Requires kind == M and q >= 2.
double m_moment_single_sum(const MomentQuery& query, const TracePowerTable& table);

}  // namespace schatten
