#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "aftrack/errors.hpp"
#include "aftrack/rng.hpp"

namespace aftrack {

using Complex = std::complex<double>;

/// First-order Gauss-Markov law of the tracked parameter:
/// theta_n = alpha * theta_{n-1} + u_n, u_n ~ CN(0, sigma_u_sq).
struct GaussMarkovModel {
  Complex alpha{0.9, 0.0};
  double sigma_u_sq = 0.19;

  /// Stationary variance sigma_u^2 / (1 - |alpha|^2).
  double sigma_theta_sq() const { return sigma_u_sq / (1.0 - std::norm(alpha)); }

  /// Throws ValidationError unless |alpha| < 1 and sigma_u_sq >= 0.
  void validate() const;
};

/// Static description of the network: sensor geometry, noise levels and
/// power budgets. Immutable after construction via make().
struct NetworkScenario {
  int n_sensors = 0;
  Eigen::VectorXd distances;        // d_i > 0
  double path_loss_exp = 1.0;       // gamma >= 0
  Eigen::VectorXd meas_noise_vars;  // sigma_{v,i}^2 >= 0
  double fc_noise_var = 0.5;        // sigma_w^2 > 0
  double sum_power = 300.0;         // P_T > 0
  Eigen::VectorXd indiv_powers;     // P_{T,i} > 0
  GaussMarkovModel model;

  /// Per-sensor transmit-power weights sigma_theta^2 + sigma_{v,i}^2,
  /// i.e. the diagonal of the power matrix.
  Eigen::VectorXd power_weights() const;

  /// Fully validated construction; throws ValidationError naming the
  /// offending field. indiv_powers of size 0 defaults to sum_power/N each.
  static NetworkScenario make(int n_sensors, Eigen::VectorXd distances,
                              double path_loss_exp, Eigen::VectorXd meas_noise_vars,
                              double fc_noise_var, double sum_power,
                              Eigen::VectorXd indiv_powers, GaussMarkovModel model);
};

/// One draw of the complex channel vector h.
struct ChannelRealization {
  Eigen::VectorXcd gains;
};

/// A complex gain vector with power accounting. `gains` stores the actual
/// per-sensor multipliers (unconjugated); the received signal is
/// y = sum_i h_i * gains_i * s_i + w.
struct GainAllocation {
  Eigen::VectorXcd gains;
  Eigen::VectorXd per_sensor_power;  // |gains_i|^2 * (sigma_theta^2 + sigma_{v,i}^2)
  double sum_power = 0.0;
  double achieved_mse = 0.0;
};

/// Builds a GainAllocation with consistent power accounting.
/// achieved_mse may be NaN when no channel has been applied yet.
GainAllocation make_allocation(const NetworkScenario& scenario,
                               Eigen::VectorXcd gains, double achieved_mse);

/// h_i = htilde_i / d_i^gamma with htilde_i ~ CN(0,1). Deterministic for a
/// fixed Rng state.
ChannelRealization sample_channel(const NetworkScenario& scenario, Rng& rng);

/// Parses and validates a scenario from the documented JSON schema (see
/// README). Unspecified fields take the `paper-sec7` preset defaults.
NetworkScenario load_scenario(const std::filesystem::path& path);

/// Same, from an in-memory JSON document.
NetworkScenario scenario_from_json(const std::string& text);

/// Bounds of the uniform distributions used to draw sensor geometry.
struct GeometryDistribution {
  double distance_lo = 2.0;
  double distance_hi = 8.0;
  double meas_noise_lo = 0.0;
  double meas_noise_hi = 0.5;
};

/// Named presets. "paper-sec7": d_i ~ U[2,8], gamma = 1,
/// sigma_{v,i}^2 ~ U[0,0.5], sigma_w^2 = 0.5, sigma_theta^2 = 1, P_T = 300,
/// P_{T,i} = P_T/N. "paper-fig5": same but sigma_{v,i}^2 ~ U[0.4,0.5].
NetworkScenario preset_scenario(const std::string& name, int n_sensors,
                                std::uint64_t geometry_seed);

/// Distribution bounds associated with a preset name.
GeometryDistribution preset_geometry(const std::string& name);

/// Redraws distances and measurement-noise variances in place.
NetworkScenario redraw_geometry(const NetworkScenario& base,
                                const GeometryDistribution& dist, int n_sensors,
                                Rng& rng);

/// Prediction MSE the paper's experiments start from.
inline constexpr double kDefaultPriorMse = 0.5;

}  // namespace aftrack
