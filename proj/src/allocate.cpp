#include "aftrack/allocate.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "aftrack/linalg.hpp"
#include "aftrack/sdp.hpp"
#include "aftrack/track.hpp"

namespace aftrack::allocate {

namespace {

constexpr double kRankOneTol = 1e-6;
constexpr double kRankOneRetryTol = 1e-3;

void require_channel(const NetworkScenario& scenario, const ChannelRealization& channel) {
  if (channel.gains.size() != scenario.n_sensors) {
    throw ValidationError("channel: length does not match n_sensors");
  }
  if (!channel.gains.allFinite()) throw ValidationError("channel: nonfinite entries");
  if (channel.gains.isZero(0.0)) {
    throw ValidationError("channel: zero channel vector (degenerate input)");
  }
}

void require_prior(double prior_mse) {
  if (!(prior_mse > 0.0) || !std::isfinite(prior_mse)) {
    throw ValidationError("prior_mse: must be finite and > 0");
  }
}

// diag(|h_i|^2 sigma_{v,i}^2): the measurement-noise covariance seen
// through the channel.
Eigen::VectorXd channel_noise_diag(const NetworkScenario& scenario,
                                   const ChannelRealization& channel) {
  return channel.gains.cwiseAbs2().cwiseProduct(scenario.meas_noise_vars);
}

GainAllocation finish(const NetworkScenario& scenario, const ChannelRealization& channel,
                      Eigen::VectorXcd gains, double prior_mse) {
  const double mse = track::filtered_mse(prior_mse, scenario, channel, gains);
  return make_allocation(scenario, std::move(gains), mse);
}

// Extracts the rank-one factor of the leading N x N block of an SDP
// solution, retrying once with a tightened tolerance when the second
// eigenvalue is suspiciously large.
struct RankOne {
  Eigen::VectorXcd factor;  // block = factor factor^H
  double corner;            // (N+1, N+1) entry
};

RankOne extract_rank_one(const sdp::SdpProblem& problem, const sdp::SolveOptions& options,
                         const char* who) {
  sdp::SdpSolution sol = sdp::solve(problem, options);
  if (sol.status == sdp::SolveStatus::infeasible) {
    throw NumericalError(std::string(who) + ": SDP reported infeasible");
  }
  if (sol.status != sdp::SolveStatus::optimal) {
    throw NumericalError(std::string(who) + ": SDP failed: " + sol.diagnostics);
  }
  const int n = problem.dim - 1;
  auto factor_block = [&](const sdp::SdpSolution& s, double& ratio) {
    const linalg::HermitianMatrix block(s.x.entries().topLeftCorner(n, n).eval());
    const linalg::EigenDecomposition eig = linalg::herm_eig(block);
    ratio = n > 1 ? std::max(0.0, eig.values[1]) / std::max(eig.values[0], 1e-300) : 0.0;
    return (std::sqrt(std::max(eig.values[0], 0.0)) * eig.vectors.col(0)).eval();
  };
  double ratio = 0.0;
  Eigen::VectorXcd a = factor_block(sol, ratio);
  if (ratio > kRankOneTol && ratio <= kRankOneRetryTol) {
    sdp::SolveOptions tighter = options;
    tighter.tol = options.tol * 1e-2;
    sdp::SdpSolution retry = sdp::solve(problem, tighter);
    if (retry.status == sdp::SolveStatus::optimal) {
      double retry_ratio = 0.0;
      Eigen::VectorXcd b = factor_block(retry, retry_ratio);
      if (retry_ratio < ratio) {
        ratio = retry_ratio;
        a = std::move(b);
        sol = std::move(retry);
      }
    }
  }
  if (ratio > kRankOneTol) {
    std::ostringstream os;
    os << who << ": rank-one extraction failed: lambda2/lambda1 = " << ratio
       << " exceeds " << kRankOneTol;
    throw NumericalError(os.str());
  }
  return RankOne{std::move(a), sol.x.entries()(n, n).real()};
}

}  // namespace

LowerBound mse_lower_bound(const NetworkScenario& scenario, double prior_mse) {
  require_prior(prior_mse);
  if ((scenario.meas_noise_vars.array() <= 0.0).any()) {
    return LowerBound{0.0, true};
  }
  const double info = scenario.meas_noise_vars.cwiseInverse().sum();
  return LowerBound{prior_mse / (1.0 + info * prior_mse), false};
}

MseTarget check_feasibility(const NetworkScenario& scenario, double prior_mse,
                            double epsilon) {
  require_prior(prior_mse);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("epsilon: must be finite and > 0");
  }
  const double floor = mse_lower_bound(scenario, prior_mse).value;
  Feasibility f;
  if (std::abs(epsilon - prior_mse) <= 1e-12 * prior_mse) {
    f = Feasibility::upper_boundary;
  } else if (epsilon > prior_mse) {
    f = Feasibility::infeasible;
  } else if (floor > 0.0 && std::abs(epsilon - floor) <= 1e-12 * floor) {
    f = Feasibility::lower_boundary;
  } else if (epsilon < floor) {
    f = Feasibility::infeasible;
  } else {
    f = Feasibility::feasible;
  }
  return MseTarget{epsilon, prior_mse, f};
}

GainAllocation min_mse_sum_power(const NetworkScenario& scenario,
                                 const ChannelRealization& channel, double prior_mse) {
  require_channel(scenario, channel);
  require_prior(prior_mse);
  const Eigen::VectorXcd& h = channel.gains;
  const Eigen::VectorXd weights = scenario.power_weights();

  // B = H V H^H + (sigma_w^2 / P_T) D.
  const Eigen::VectorXd b_diag =
      channel_noise_diag(scenario, channel) +
      (scenario.fc_noise_var / scenario.sum_power) * weights;
  const linalg::HermitianMatrix b = linalg::HermitianMatrix::diagonal(b_diag);
  const Eigen::VectorXcd u = linalg::solve_hpd(b, h);
  const double scale_sq = (u.cwiseAbs2().cwiseProduct(weights)).sum();  // h^H B^-1 D B^-1 h
  // Translated to unconjugated storage: gains = conj(scale * B^-1 h).
  Eigen::VectorXcd gains = std::sqrt(scenario.sum_power / scale_sq) * u.conjugate();
  return finish(scenario, channel, std::move(gains), prior_mse);
}

GainAllocation min_mse_individual_power(const NetworkScenario& scenario,
                                        const ChannelRealization& channel,
                                        double prior_mse) {
  require_channel(scenario, channel);
  require_prior(prior_mse);
  const int n = scenario.n_sensors;
  const Eigen::VectorXcd& h = channel.gains;
  const Eigen::VectorXd weights = scenario.power_weights();

  // Bordered matrices of the relaxed problem.
  Eigen::MatrixXcd hbar = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  hbar.topLeftCorner(n, n) = h * h.adjoint();
  Eigen::VectorXd cbar_diag(n + 1);
  cbar_diag.head(n) = channel_noise_diag(scenario, channel);
  cbar_diag[n] = scenario.fc_noise_var;

  sdp::SdpProblem problem{
      n + 1,
      sdp::Sense::maximize,
      linalg::HermitianMatrix(hbar),
      {{linalg::HermitianMatrix::diagonal(cbar_diag), 1.0}},
      {}};
  problem.ineq.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd di = Eigen::VectorXd::Zero(n + 1);
    di[i] = weights[i];
    di[n] = -scenario.indiv_powers[i];
    problem.ineq.push_back({linalg::HermitianMatrix::diagonal(di), 0.0});
  }

  // Strictly feasible diagonal start.
  const double a0 = 0.5 * (scenario.indiv_powers.array() / weights.array()).minCoeff();
  const double b0 =
      1.0 / (a0 * channel_noise_diag(scenario, channel).sum() + scenario.fc_noise_var);
  Eigen::VectorXd start(n + 1);
  start.head(n).setConstant(a0 * b0);
  start[n] = b0;
  sdp::SolveOptions options;
  options.initial_x = Eigen::MatrixXcd(start.cast<Complex>().asDiagonal());

  const RankOne r = extract_rank_one(problem, options, "min_mse_individual_power");
  if (!(r.corner > 0.0)) {
    throw NumericalError("min_mse_individual_power: corner entry of the SDP solution is not positive");
  }
  Eigen::VectorXcd gains = (r.factor / std::sqrt(r.corner)).conjugate();
  return finish(scenario, channel, std::move(gains), prior_mse);
}

namespace {

// E = prior h h^H - (prior/eps - 1) H V H^H, the matrix whose top
// generalized eigenpair against D solves both power-minimization problems.
Eigen::MatrixXcd mse_constraint_matrix(const NetworkScenario& scenario,
                                       const ChannelRealization& channel,
                                       const MseTarget& target) {
  const Eigen::VectorXcd& h = channel.gains;
  const double ratio = target.prior_mse / target.epsilon - 1.0;
  Eigen::MatrixXcd e = target.prior_mse * (h * h.adjoint());
  e -= Eigen::MatrixXcd(
      (ratio * channel_noise_diag(scenario, channel)).cast<Complex>().asDiagonal());
  return e;
}

void require_feasible(const MseTarget& target, const char* who) {
  switch (target.feasibility) {
    case Feasibility::feasible:
    case Feasibility::upper_boundary:
      return;
    case Feasibility::lower_boundary:
      throw ValidationError(std::string(who) +
                            ": epsilon sits exactly on the infinite-power floor "
                            "prior/(1 + sum(1/sigma_v^2) prior); unreachable at finite power");
    case Feasibility::infeasible:
      throw ValidationError(std::string(who) +
                            ": infeasible epsilon; it must satisfy "
                            "prior/(1 + sum(1/sigma_v^2) prior) < eps <= prior");
  }
}

GainAllocation zero_allocation(const NetworkScenario& scenario, double prior_mse) {
  return make_allocation(scenario, Eigen::VectorXcd::Zero(scenario.n_sensors), prior_mse);
}

}  // namespace

GainAllocation min_sum_power_mse(const NetworkScenario& scenario,
                                 const ChannelRealization& channel,
                                 const MseTarget& target) {
  require_channel(scenario, channel);
  require_prior(target.prior_mse);
  require_feasible(target, "min_sum_power_mse");
  if (target.feasibility == Feasibility::upper_boundary) {
    return zero_allocation(scenario, target.prior_mse);
  }

  const linalg::HermitianMatrix e(mse_constraint_matrix(scenario, channel, target));
  const linalg::HermitianMatrix d =
      linalg::HermitianMatrix::diagonal(scenario.power_weights());
  const linalg::RayleighMax top = linalg::rayleigh_max(e, d);
  if (!(top.value > 0.0)) {
    throw NumericalError(
        "min_sum_power_mse: top eigenvalue is not positive, which contradicts the "
        "feasibility interval check");
  }
  const double needed = (target.prior_mse / target.epsilon - 1.0) * scenario.fc_noise_var;
  const double dx = top.vector.cwiseAbs2().dot(scenario.power_weights());
  Eigen::VectorXcd gains = (std::sqrt(needed / (top.value * dx)) * top.vector).conjugate();
  GainAllocation alloc = finish(scenario, channel, std::move(gains), target.prior_mse);
  if (std::abs(alloc.achieved_mse - target.epsilon) > 1e-8 * target.epsilon) {
    throw NumericalError("min_sum_power_mse: achieved MSE deviates from the target");
  }
  return alloc;
}

GainAllocation min_max_power_mse(const NetworkScenario& scenario,
                                 const ChannelRealization& channel,
                                 const MseTarget& target) {
  require_channel(scenario, channel);
  require_prior(target.prior_mse);
  require_feasible(target, "min_max_power_mse");
  if (target.feasibility == Feasibility::upper_boundary) {
    return zero_allocation(scenario, target.prior_mse);
  }
  const int n = scenario.n_sensors;
  const Eigen::VectorXd weights = scenario.power_weights();
  const double needed = (target.prior_mse / target.epsilon - 1.0) * scenario.fc_noise_var;

  Eigen::MatrixXcd etilde = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  etilde.topLeftCorner(n, n) = mse_constraint_matrix(scenario, channel, target);
  Eigen::VectorXd t_diag = Eigen::VectorXd::Zero(n + 1);
  t_diag[n] = 1.0;

  sdp::SdpProblem problem{
      n + 1,
      sdp::Sense::minimize,
      linalg::HermitianMatrix::diagonal(t_diag),
      {},
      {}};
  // MSE constraint tr(A E) >= needed, folded as <=.
  problem.ineq.push_back({linalg::HermitianMatrix(-etilde), -needed});
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd fi = Eigen::VectorXd::Zero(n + 1);
    fi[i] = weights[i];
    fi[n] = -1.0;
    problem.ineq.push_back({linalg::HermitianMatrix::diagonal(fi), 0.0});
  }

  const RankOne r = extract_rank_one(problem, {}, "min_max_power_mse");
  Eigen::VectorXcd gains = r.factor.conjugate();
  GainAllocation alloc = finish(scenario, channel, std::move(gains), target.prior_mse);
  if (alloc.achieved_mse > target.epsilon * (1.0 + 1e-8)) {
    throw NumericalError("min_max_power_mse: achieved MSE exceeds the target");
  }
  return alloc;
}

GainAllocation equal_power_allocation(const NetworkScenario& scenario, double prior_mse) {
  require_prior(prior_mse);
  const Eigen::VectorXd weights = scenario.power_weights();
  const double per = scenario.sum_power / scenario.n_sensors;
  Eigen::VectorXcd gains =
      (std::sqrt(per) * weights.cwiseSqrt().cwiseInverse()).cast<Complex>();
  return make_allocation(scenario, std::move(gains),
                         std::numeric_limits<double>::quiet_NaN());
}

GainAllocation equal_power_allocation(const NetworkScenario& scenario,
                                      const ChannelRealization& channel,
                                      double prior_mse) {
  GainAllocation alloc = equal_power_allocation(scenario, prior_mse);
  alloc.achieved_mse = track::filtered_mse(prior_mse, scenario, channel, alloc.gains);
  return alloc;
}

GainAllocation asymptotic_gains(const NetworkScenario& scenario,
                                const ChannelRealization& channel, SnrRegime regime,
                                double prior_mse) {
  require_channel(scenario, channel);
  require_prior(prior_mse);
  const int n = scenario.n_sensors;
  const Eigen::VectorXcd& h = channel.gains;
  const Eigen::VectorXd weights = scenario.power_weights();

  Eigen::VectorXcd gains(n);
  if (regime == SnrRegime::high_snr) {
    for (int i = 0; i < n; ++i) {
      if (!(scenario.meas_noise_vars[i] > 0.0)) {
        throw ValidationError(
            "asymptotic_gains: high_snr requires sigma_{v,i}^2 > 0 for every sensor");
      }
      if (h[i] == Complex{0.0, 0.0}) {
        throw ValidationError("asymptotic_gains: high_snr requires h_i != 0 for every sensor");
      }
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sv = scenario.meas_noise_vars[i];
      s += weights[i] / (sv * sv * std::norm(h[i]));
    }
    for (int i = 0; i < n; ++i) {
      gains[i] = std::sqrt(scenario.sum_power / s) / (h[i] * scenario.meas_noise_vars[i]);
    }
  } else {
    // Noise-dominated limit: gains follow the conjugate channel weighted by
    // 1/(sigma_theta^2 + sigma_v^2), scaled to spend the whole budget.
    Eigen::VectorXcd dir = h.conjugate().cwiseQuotient(weights.cast<Complex>());
    const double used = dir.cwiseAbs2().dot(weights);
    gains = std::sqrt(scenario.sum_power / used) * dir;
  }
  return finish(scenario, channel, std::move(gains), prior_mse);
}

SumPowerBounds sum_power_bounds(const NetworkScenario& scenario,
                                const ChannelRealization& channel,
                                const MseTarget& target) {
  require_channel(scenario, channel);
  require_prior(target.prior_mse);
  require_feasible(target, "sum_power_bounds");

  const double prior = target.prior_mse;
  const double eps = target.epsilon;
  const double ratio = prior / eps - 1.0;
  const Eigen::VectorXd weights = scenario.power_weights();
  const Eigen::VectorXd snr_terms =
      channel_noise_diag(scenario, channel).cwiseQuotient(weights);
  const double quad = prior * channel.gains.cwiseAbs2().cwiseQuotient(weights).sum();

  SumPowerBounds out{};
  out.xi = ratio * snr_terms.minCoeff();
  out.zeta = ratio * snr_terms.maxCoeff() / quad;
  out.approx = (prior - eps) * scenario.fc_noise_var / (eps * quad);
  out.lower = (prior - eps) * scenario.fc_noise_var / (eps * (quad - out.xi));
  out.valid = out.zeta < 1.0;
  out.upper = out.valid
                  ? (prior - eps) * scenario.fc_noise_var / (eps * quad * (1.0 - out.zeta))
                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace aftrack::allocate
