#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace schatten {

/// Eigenvalues of the Gram matrix S = B^T B, stored non-increasing.
///
/// Every eigenvalue is finite and non-negative; the dimension d is the
/// number of stored values (zeros included).
class Spectrum {
 public:
  /// Throws InputError for an empty list, a non-finite value or a negative value.
  explicit Spectrum(std::vector<double> eigenvalues);

  std::span<const double> eigenvalues() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double largest() const { return values_.front(); }

  /// Spectrum of c*S for c >= 0.
  Spectrum scaled(double c) const;

  /// The diagonal matrix diag(lambda) in the stored order.
  Eigen::MatrixXd as_diagonal() const;

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<double> values_;
};

/// Power sums S_k = Tr(S^k) for k = 0..k_max.
class TracePowerTable {
 public:
  TracePowerTable(const Spectrum& spectrum, int k_max);

  /// S_k; throws RangeError when k is negative or above k_max().
  double operator[](int k) const;

  int k_max() const { return static_cast<int>(values_.size()) - 1; }
  std::size_t dimension() const { return dimension_; }

 private:
  std::vector<double> values_;
  std::size_t dimension_;
};

/// Closed interval [lo, hi] with a relative containment tolerance.
struct Interval {
  double lo;
  double hi;

  bool contains(double x, double rel_tol = 1e-12) const {
    const double slack = rel_tol * std::max({std::abs(lo), std::abs(hi), std::abs(x)});
    return x >= lo - slack && x <= hi + slack;
  }
};

/// Spectrum of S = B^T B for an r x d matrix B (d = number of columns).
///
/// Uses a symmetric eigensolve of B^T B. Eigenvalues in
/// [-1e-10 * max(1, lambda_max), 0) are clamped to zero; anything more
/// negative raises NumericalError. Non-finite entries raise InputError.
Spectrum gram_spectrum(const Eigen::MatrixXd& B);

TracePowerTable trace_powers(const Spectrum& spectrum, int k_max);

/// ||B||_p = (sum_j sigma_j^p)^{1/p}, reading the eigenvalues as sigma_j^2.
double schatten_norm(const Spectrum& spectrum, int p);

/// Tr(S^p) = ||B||_{2p}^{2p}, the quantity the sketch estimator targets.
double schatten_2p_power(const Spectrum& spectrum, int p);

/// Hölder sandwich for Tr(S^beta) in terms of Tr(S^p) and d:
///   beta <= p:  Tr(S^p)^{beta/p} <= Tr(S^beta) <= Tr(S^p)^{beta/p} d^{1-beta/p}
///   beta >= p:  Tr(S^p)^{beta/p} d^{1-beta/p} <= Tr(S^beta) <= Tr(S^p)^{beta/p}
Interval holder_interval(const TracePowerTable& table, int beta, int p);

/// One row per line, comma-separated decimal numbers. Throws InputError on
/// ragged rows, empty input or unparsable fields.
Eigen::MatrixXd read_matrix_csv(std::istream& in);

/// A JSON array of non-negative numbers.
Spectrum read_spectrum_json(std::istream& in);

}  // namespace schatten
