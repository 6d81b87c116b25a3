#include "aftrack/track.hpp"

#include <cmath>
#include <sstream>

namespace aftrack::track {

TrackState initial_state(double prior_mse) {
  if (!(prior_mse > 0.0) || !std::isfinite(prior_mse)) {
    throw ValidationError("prior_mse: must be finite and > 0");
  }
  return TrackState{Complex{0.0, 0.0}, prior_mse, prior_mse, 0};
}

TrackState predict(const TrackState& state, const GaussMarkovModel& model) {
  model.validate();
  TrackState out = state;
  out.estimate = model.alpha * state.estimate;
  out.pred_mse = std::norm(model.alpha) * state.filt_mse + model.sigma_u_sq;
  return out;
}

namespace {

struct Moments {
  Complex coherent;   // c = sum_i h_i g_i
  double noise;       // sum_i |h_i g_i|^2 sigma_{v,i}^2 + sigma_w^2
};

Moments moments(const NetworkScenario& scenario, const ChannelRealization& channel,
                const Eigen::VectorXcd& gains) {
  if (channel.gains.size() != scenario.n_sensors || gains.size() != scenario.n_sensors) {
    throw ValidationError("filtered_mse: channel/gains length mismatch");
  }
  if (!channel.gains.allFinite() || !gains.allFinite()) {
    throw ValidationError("filtered_mse: nonfinite inputs");
  }
  const Eigen::VectorXcd hg = channel.gains.cwiseProduct(gains);
  return Moments{hg.sum(), hg.cwiseAbs2().dot(scenario.meas_noise_vars) + scenario.fc_noise_var};
}

Complex kalman_gain(double pred_mse, const Moments& m) {
  return pred_mse * std::conj(m.coherent) /
         (m.noise + pred_mse * std::norm(m.coherent));
}

}  // namespace

double filtered_mse(double pred_mse, const NetworkScenario& scenario,
                    const ChannelRealization& channel, const Eigen::VectorXcd& gains) {
  if (!(pred_mse > 0.0) || !std::isfinite(pred_mse)) {
    throw ValidationError("filtered_mse: pred_mse must be finite and > 0");
  }
  const Moments m = moments(scenario, channel, gains);

  // Kalman-gain form: (1 - k c) * pred.
  const Complex k = kalman_gain(pred_mse, m);
  const double form_gain = (1.0 - (k * m.coherent).real()) * pred_mse;

  // Information form: pred / (1 + pred q).
  const double q = std::norm(m.coherent) / m.noise;
  const double form_q = pred_mse / (1.0 + pred_mse * q);

  if (std::abs(form_gain - form_q) > 1e-12 * pred_mse) {
    std::ostringstream os;
    os << "filtered_mse: algebraic forms disagree: " << form_gain << " vs " << form_q;
    throw NumericalError(os.str());
  }
  return form_q;
}

TrackState update(const TrackState& state, const GaussMarkovModel& model,
                  const NetworkScenario& scenario, const ChannelRealization& channel,
                  const Eigen::VectorXcd& gains, Complex observation) {
  (void)model;
  const Moments m = moments(scenario, channel, gains);
  const Complex k = kalman_gain(state.pred_mse, m);
  TrackState out = state;
  out.estimate = state.estimate + k * (observation - m.coherent * state.estimate);
  out.filt_mse = filtered_mse(state.pred_mse, scenario, channel, gains);
  out.step = state.step + 1;
  return out;
}

Complex evolve(Complex theta, const GaussMarkovModel& model, Rng& rng) {
  return model.alpha * theta + std::sqrt(model.sigma_u_sq) * rng.complex_normal();
}

Complex observe(Complex theta, const NetworkScenario& scenario,
                const ChannelRealization& channel, const Eigen::VectorXcd& gains,
                Rng& rng) {
  Complex y{0.0, 0.0};
  for (int i = 0; i < scenario.n_sensors; ++i) {
    const Complex v = std::sqrt(scenario.meas_noise_vars[i]) * rng.complex_normal();
    y += channel.gains[i] * gains[i] * (theta + v);
  }
  y += std::sqrt(scenario.fc_noise_var) * rng.complex_normal();
  return y;
}

}  // namespace aftrack::track
