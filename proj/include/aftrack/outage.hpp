#pragma once

#include <utility>
#include <vector>

#include "aftrack/allocate.hpp"
#include "aftrack/linalg.hpp"
#include "aftrack/model.hpp"

namespace aftrack::outage {

using allocate::MseTarget;

/// Ingredients of the equal-power MSE outage probability: the indefinite
/// quadratic-form matrix R, its spectrum and the threshold the weighted
/// chi-square sum is compared against.
struct OutageInstance {
  double beta;                     // (prior - eps) / (eps * prior)
  linalg::HermitianMatrix r_matrix;
  Eigen::VectorXd eigenvalues;     // descending; at most one positive
  double threshold;                // beta * sigma_w^2 / P_T
};

OutageInstance build_instance(const NetworkScenario& scenario,
                              const MseTarget& target);

/// Exact P{filtered MSE > epsilon} under equal-power transmission.
/// Returns 1 when no channel realization can meet epsilon (lambda_1 <= 0);
/// infeasible epsilon is a valid input here.
double outage_probability(const NetworkScenario& scenario,
                          const MseTarget& target);

/// Limit of the outage probability as P_T grows without bound.
double outage_limit_high_power(const NetworkScenario& scenario,
                               const MseTarget& target);

/// Eigenvalue sandwich for the spectrum of R from Weyl's inequality:
/// bounds for lambda_1 and for each lambda_i, i >= 2.
struct WeylBounds {
  double lambda1_lo;
  double lambda1_hi;
  std::vector<std::pair<double, double>> tail_bounds;  // i = 2..N
};
WeylBounds weyl_bounds(const NetworkScenario& scenario, const MseTarget& target);

}  // namespace aftrack::outage
