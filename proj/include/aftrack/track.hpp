#pragma once

#include "aftrack/model.hpp"

namespace aftrack::track {

/// Kalman state for one tracked trajectory. filt_mse is the error variance
/// after the most recent measurement update, pred_mse the one-step-ahead
/// prediction variance.
struct TrackState {
  Complex estimate{0.0, 0.0};
  double pred_mse = kDefaultPriorMse;
  double filt_mse = kDefaultPriorMse;
  int step = 0;
};

/// Initial state before the first measurement: zero estimate, prediction
/// MSE equal to the supplied prior.
TrackState initial_state(double prior_mse);

/// Time update: estimate scaled by alpha,
/// pred_mse = |alpha|^2 filt_mse + sigma_u^2. The step counter advances on
/// update(), not here.
TrackState predict(const TrackState& state, const GaussMarkovModel& model);

/// Filtered MSE for the given gains: pred / (1 + pred * q) with
/// q = |h^T g|^2 / (sum_i |h_i g_i|^2 sigma_{v,i}^2 + sigma_w^2).
/// Evaluated both through the Kalman-gain form and the q form; the two are
/// cross-checked to 1e-12.
double filtered_mse(double pred_mse, const NetworkScenario& scenario,
                    const ChannelRealization& channel,
                    const Eigen::VectorXcd& gains);

/// Measurement update with the received scalar observation.
TrackState update(const TrackState& state, const GaussMarkovModel& model,
                  const NetworkScenario& scenario, const ChannelRealization& channel,
                  const Eigen::VectorXcd& gains, Complex observation);

/// theta_n = alpha * theta_{n-1} + u_n with fresh process noise.
Complex evolve(Complex theta, const GaussMarkovModel& model, Rng& rng);

/// Forms y = sum_i h_i g_i (theta + v_i) + w with fresh measurement and FC
/// noise drawn from the caller's stream.
Complex observe(Complex theta, const NetworkScenario& scenario,
                const ChannelRealization& channel, const Eigen::VectorXcd& gains,
                Rng& rng);

}  // namespace aftrack::track
