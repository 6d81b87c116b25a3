#pragma once

#include "aftrack/model.hpp"

namespace aftrack::allocate {

enum class Feasibility {
  infeasible,       // epsilon below the finite-power floor
  lower_boundary,   // epsilon exactly at the floor (infeasible at finite power)
  feasible,
  upper_boundary,   // epsilon == prior_mse (zero-power solution)
};

/// An MSE constraint together with the prediction MSE it refers to.
struct MseTarget {
  double epsilon;
  double prior_mse;
  Feasibility feasibility;
};

/// Classifies epsilon against
///   prior/(1 + (sum_i 1/sigma_{v,i}^2) prior) <= epsilon <= prior.
/// Boundary flags use exact equality within 1e-12 relative.
MseTarget check_feasibility(const NetworkScenario& scenario, double prior_mse,
                            double epsilon);

/// Filtered-MSE floor achievable as transmit power grows without bound.
struct LowerBound {
  double value;
  bool degenerate;  // some sigma_{v,i}^2 == 0; the floor collapses to 0
};
LowerBound mse_lower_bound(const NetworkScenario& scenario, double prior_mse);

/// Minimizes the filtered MSE subject to total transmit power P_T.
/// Closed form: the budget is always used exactly.
GainAllocation min_mse_sum_power(const NetworkScenario& scenario,
                                 const ChannelRealization& channel,
                                 double prior_mse);

/// Minimizes the filtered MSE subject to per-sensor budgets P_{T,i}, via
/// the rank-relaxed semidefinite program whose solution is provably
/// rank-one in its leading block.
GainAllocation min_mse_individual_power(const NetworkScenario& scenario,
                                        const ChannelRealization& channel,
                                        double prior_mse);

/// Minimizes total transmit power subject to filtered MSE <= epsilon.
/// Closed form through the top eigenpair of D^{-1/2} E D^{-1/2}.
GainAllocation min_sum_power_mse(const NetworkScenario& scenario,
                                 const ChannelRealization& channel,
                                 const MseTarget& target);

/// Minimizes the largest per-sensor transmit power subject to filtered
/// MSE <= epsilon, via the rank-relaxed semidefinite program.
GainAllocation min_max_power_mse(const NetworkScenario& scenario,
                                 const ChannelRealization& channel,
                                 const MseTarget& target);

/// Every sensor spends P_T/N: gains sqrt(P_T/N)/sqrt(sigma_theta^2 +
/// sigma_{v,i}^2), zero phase. achieved_mse is NaN until a channel is
/// applied; use the channel overload when the MSE is wanted.
GainAllocation equal_power_allocation(const NetworkScenario& scenario,
                                      double prior_mse);
GainAllocation equal_power_allocation(const NetworkScenario& scenario,
                                      const ChannelRealization& channel,
                                      double prior_mse);

enum class SnrRegime { high_snr, low_snr };

/// Limiting forms of the sum-power solution. high_snr requires
/// sigma_{v,i}^2 > 0 and h_i != 0 for all i; low_snr scales the
/// noise-dominated direction to sum power P_T.
GainAllocation asymptotic_gains(const NetworkScenario& scenario,
                                const ChannelRealization& channel,
                                SnrRegime regime, double prior_mse);

/// Sandwich bounds and the large-N approximation for the minimum sum
/// power that achieves epsilon. valid is false when zeta >= 1 (the upper
/// bound degenerates for that draw; small-N regime).
struct SumPowerBounds {
  double lower;
  double upper;
  double xi;
  double zeta;
  double approx;
  bool valid;
};
SumPowerBounds sum_power_bounds(const NetworkScenario& scenario,
                                const ChannelRealization& channel,
                                const MseTarget& target);

}  // namespace aftrack::allocate
