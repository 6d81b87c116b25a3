#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aftrack/linalg.hpp"

namespace aftrack::sdp {

enum class Sense { maximize, minimize };

/// One linear functional tr(X * matrix) compared against `bound`.
struct LinearTerm {
  linalg::HermitianMatrix matrix;
  double bound;
};

/// Trace-constrained semidefinite program over Hermitian X >= 0:
///   optimize tr(X C)
///   s.t.     tr(X A_k)  = b_k   (eq)
///            tr(X G_j) <= c_j   (ineq)
struct SdpProblem {
  int dim;
  Sense sense;
  linalg::HermitianMatrix objective;
  std::vector<LinearTerm> eq;
  std::vector<LinearTerm> ineq;
};

enum class SolveStatus { optimal, infeasible, numerical_failure };

/// Objectives and residuals of one interior-point iterate, in the caller's
/// sign convention. Iterates are exposed for the weak-duality property
/// tests; residuals qualify how feasible each iterate is.
struct IterateStat {
  double primal_objective;
  double dual_objective;
  double primal_residual;  // relative
  double dual_residual;    // relative
  double mu;
};

struct SdpSolution {
  linalg::HermitianMatrix x;
  /// Multipliers, eq constraints first then ineq (ineq duals >= 0). The
  /// dual slack is  sum_k z_k A_k + sum_j y_j G_j - C  for max problems and
  /// C - sum_k z_k A_k + sum_j y_j G_j  for min problems.
  Eigen::VectorXd duals;
  double objective_value;
  double dual_objective;
  double gap;  // absolute duality gap
  SolveStatus status;
  int iterations;
  std::vector<IterateStat> history;
  std::string diagnostics;
};

struct SolveOptions {
  double tol = 1e-10;  // relative feasibility/gap target
  int max_iter = 200;
  /// Optional strictly feasible primal start (e.g. the diagonal point the
  /// individual-power problem admits).
  std::optional<Eigen::MatrixXcd> initial_x;
};

/// Primal-dual path-following solve. Complex Hermitian data is handled via
/// the real symmetric embedding of doubled dimension.
SdpSolution solve(const SdpProblem& problem, const SolveOptions& options = {});

struct CertificateReport {
  double max_primal_residual;       // worst absolute constraint violation
  double min_x_eigenvalue;          // of the primal X
  double dual_slack_min_eigenvalue; // of G
  double complementary_slackness;   // |tr(X G)|
  double duality_gap;               // absolute
  Eigen::MatrixXcd dual_slack;      // G
};

/// Primal/dual feasibility residuals, complementary slackness and gap for
/// an optimal solution.
CertificateReport check_certificate(const SdpProblem& problem,
                                    const SdpSolution& solution);

/// Debug dump of a problem instance (matrices split into real/imag parts)
/// for cross-checking against external solvers. Not a stable format.
std::string dump_json(const SdpProblem& problem);

namespace detail {

/// Real symmetric embedding [[Re A, -Im A], [Im A, Re A]] of a Hermitian
/// matrix; satisfies tr(embed(X) embed(A)) = 2 tr(X A).
Eigen::MatrixXd embed(const Eigen::MatrixXcd& a);

/// Averages the two conjugate blocks back into a Hermitian matrix.
Eigen::MatrixXcd unembed(const Eigen::MatrixXd& y);

}  // namespace detail

}  // namespace aftrack::sdp
