#pragma once

#include <vector>

#include <Eigen/Dense>

#include "schatten/moments.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

/// One rank-one factor X_v X_v^T followed by S^exponent inside a trace.
struct ChainFactor {
  int vector;
  int exponent;
};

/// Tr( prod_t X_{v_t} X_{v_t}^T S^{e_t} ), read cyclically.
using TraceChain = std::vector<ChainFactor>;

/// E[ prod_c Tr(chain_c) ] over independent standard normal vectors.
///
/// With S diagonal each trace expands to
///   sum_{j_1..j_L} prod_t X_{v_t}[j_{t-1}] lambda_{j_t}^{e_t} X_{v_t}[j_t]
/// so every vector contributes two coordinates per occurrence, and its
/// expectation is the Wick pairing sum over those coordinates. Rotational
/// invariance of N(0, I) makes the diagonal form exact for any S.
struct IsserlisQuery {
  std::vector<TraceChain> chains;

  int link_count() const;
};

/// Default cap on the number of coordinate tuples d^{links}.
inline constexpr double kIsserlisTupleLimit = 1e7;

/// Exact expectation by exhaustive tuple enumeration. Throws SizeGuardError
/// when d^{links} exceeds tuple_limit.
double isserlis_expectation(const IsserlisQuery& query, const Spectrum& spectrum,
                            double tuple_limit = kIsserlisTupleLimit);

/// The single-trace chain of an M or N query.
IsserlisQuery isserlis_query(const MomentQuery& query);

double isserlis_moment(const MomentQuery& query, const Spectrum& spectrum);

/// E[X X^T A X X^T] for X ~ N(0, diag(lambda)), entrywise by the Wick rule.
Eigen::MatrixXd wick_quartic_expectation(const Eigen::MatrixXd& A, const Eigen::VectorXd& lambda);

/// max |E[X X^T A X X^T] - (L(A + A^T)L + Tr(AL)L)| with L = diag(lambda),
/// using the spectrum's stored order for the diagonal. Requires d <= 6.
double quartic_identity_residual(const Eigen::MatrixXd& A, const Spectrum& lambda);

}  // namespace schatten
