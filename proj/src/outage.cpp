#include "aftrack/outage.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace aftrack::outage {

namespace {

void require_target(const NetworkScenario& scenario, const MseTarget& target) {
  (void)scenario;
  if (!(target.prior_mse > 0.0) || !std::isfinite(target.prior_mse)) {
    throw ValidationError("prior_mse: must be finite and > 0");
  }
  if (!(target.epsilon > 0.0) || target.epsilon > target.prior_mse * (1.0 + 1e-12)) {
    throw ValidationError("epsilon: must satisfy 0 < epsilon <= prior_mse");
  }
}

Eigen::VectorXd path_loss(const NetworkScenario& scenario) {
  return scenario.distances.array().pow(-scenario.path_loss_exp);
}

}  // namespace

OutageInstance build_instance(const NetworkScenario& scenario, const MseTarget& target) {
  require_target(scenario, target);
  const int n = scenario.n_sensors;
  const double beta = (target.prior_mse - target.epsilon) /
                      (target.epsilon * target.prior_mse);

  // Normalized equal-power gains, matching equal_power_allocation bit for bit.
  const Eigen::VectorXd a_e =
      allocate::equal_power_allocation(scenario, target.prior_mse).gains.real() /
      std::sqrt(scenario.sum_power);
  const Eigen::VectorXd m = path_loss(scenario);
  const Eigen::VectorXd q = scenario.meas_noise_vars.cwiseProduct(m.cwiseAbs2())
                                .cwiseQuotient(scenario.power_weights()) /
                            static_cast<double>(n);

  const Eigen::VectorXd ma = m.cwiseProduct(a_e);
  Eigen::MatrixXd r = ma * ma.transpose();
  r.diagonal() -= beta * q;
  linalg::HermitianMatrix rm{r.cast<Complex>()};
  Eigen::VectorXd values = linalg::herm_eig(rm).values;

  // Weyl: only the top eigenvalue can be positive.
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  if (n > 1 && values[1] > 1e-12 * scale) {
    throw NumericalError("outage: second eigenvalue positive, spectrum invariant violated");
  }
  return OutageInstance{beta, std::move(rm), std::move(values),
                        beta * scenario.fc_noise_var / scenario.sum_power};
}

namespace {

// 1 - prod_l lambda1/(lambda1 - lambda_l) * exp(-threshold/lambda1), valid
// for lambda_1 > 0 >= lambda_l. Near-coincident lambda_l are symmetrically
// split apart; the formula is singular there although its limit exists.
double tail_formula(const OutageInstance& inst, bool with_exponential) {
  const Eigen::VectorXd& lam = inst.eigenvalues;
  double lambda1 = lam[0];
  if (!(lambda1 > 0.0)) return 1.0;

  const double scale = lam.cwiseAbs().maxCoeff();
  double ratio = 1.0;
  for (Eigen::Index l = 1; l < lam.size(); ++l) {
    double low = lam[l];
    double top = lambda1;
    if (top - low < 1e-10 * scale) {
      std::fprintf(stderr,
                   "aftrack: outage eigenvalue gap %.3e is numerically singular; "
                   "applying symmetric 1e-8 relative perturbation\n",
                   top - low);
      top += 0.5e-8 * scale;
      low -= 0.5e-8 * scale;
    }
    ratio *= top / (top - low);
  }
  double out = 1.0 - ratio * (with_exponential ? std::exp(-inst.threshold / lambda1) : 1.0);
  if (out < -1e-9 || out > 1.0 + 1e-9) {
    throw NumericalError("outage: probability " + std::to_string(out) + " outside [0,1]");
  }
  return std::clamp(out, 0.0, 1.0);
}

}  // namespace

double outage_probability(const NetworkScenario& scenario, const MseTarget& target) {
  return tail_formula(build_instance(scenario, target), true);
}

double outage_limit_high_power(const NetworkScenario& scenario, const MseTarget& target) {
  return tail_formula(build_instance(scenario, target), false);
}

WeylBounds weyl_bounds(const NetworkScenario& scenario, const MseTarget& target) {
  const OutageInstance inst = build_instance(scenario, target);
  const int n = scenario.n_sensors;

  const Eigen::VectorXd m = path_loss(scenario);
  Eigen::VectorXd q = scenario.meas_noise_vars.cwiseProduct(m.cwiseAbs2())
                          .cwiseQuotient(scenario.power_weights()) /
                      static_cast<double>(n);
  std::sort(q.data(), q.data() + q.size(), std::greater<double>());  // e_1 >= ... >= e_N

  // a~^H M^2 a~ = sum_i 1 / (N (sigma_theta^2 + sigma_v^2) d^{2 gamma}).
  const double ama =
      (m.cwiseAbs2().cwiseQuotient(scenario.power_weights())).sum() / n;

  WeylBounds out;
  out.lambda1_lo = ama - inst.beta * q[0];
  out.lambda1_hi = ama - inst.beta * q[n - 1];
  out.tail_bounds.reserve(std::max(n - 1, 0));
  for (int i = 2; i <= n; ++i) {
    out.tail_bounds.emplace_back(-inst.beta * q[n - i],      // e_{N-i+1}
                                 -inst.beta * q[n - i + 1]); // e_{N-i+2}
  }
  return out;
}

}  // namespace aftrack::outage
