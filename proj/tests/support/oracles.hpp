// Test-side oracles, independent of the library's solution paths: grid and
// local-search maximizers for the gain-design objectives, an exhaustive
// Spearman permutation test, and builders for the bordered SDP instances.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "aftrack/model.hpp"
#include "aftrack/rng.hpp"
#include "aftrack/sdp.hpp"

namespace aftrack::testing {

// SNR-style objective |sum h_i g_i|^2 / (sum |h_i g_i|^2 sigma_v_i^2 + sigma_w^2)
// in terms of the actual (unconjugated) gains.
inline double qcrq_objective(const NetworkScenario& sc, const ChannelRealization& ch,
                             const Eigen::VectorXcd& gains) {
  const Eigen::VectorXcd hg = ch.gains.cwiseProduct(gains);
  const double noise = hg.cwiseAbs2().dot(sc.meas_noise_vars) + sc.fc_noise_var;
  return std::norm(hg.sum()) / noise;
}

// Bordered matrices of the individual-power problem, built here so the SDP
// tests do not depend on the allocator's encoding.
inline sdp::SdpProblem individual_power_sdp(const NetworkScenario& sc,
                                            const ChannelRealization& ch) {
  const int n = sc.n_sensors;
  const Eigen::VectorXd w = sc.power_weights();
  Eigen::MatrixXcd hbar = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  hbar.topLeftCorner(n, n) = ch.gains * ch.gains.adjoint();
  Eigen::VectorXd cbar(n + 1);
  cbar.head(n) = ch.gains.cwiseAbs2().cwiseProduct(sc.meas_noise_vars);
  cbar[n] = sc.fc_noise_var;
  sdp::SdpProblem problem{n + 1,
                          sdp::Sense::maximize,
                          linalg::HermitianMatrix(hbar),
                          {{linalg::HermitianMatrix::diagonal(cbar), 1.0}},
                          {}};
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd di = Eigen::VectorXd::Zero(n + 1);
    di[i] = w[i];
    di[n] = -sc.indiv_powers[i];
    problem.ineq.push_back({linalg::HermitianMatrix::diagonal(di), 0.0});
  }
  return problem;
}

// The strictly feasible diagonal start the bordered problem admits.
inline Eigen::MatrixXcd individual_power_start(const NetworkScenario& sc,
                                               const ChannelRealization& ch) {
  const int n = sc.n_sensors;
  const Eigen::VectorXd w = sc.power_weights();
  const double a0 = 0.5 * (sc.indiv_powers.array() / w.array()).minCoeff();
  const double b0 =
      1.0 / (a0 * ch.gains.cwiseAbs2().dot(sc.meas_noise_vars) + sc.fc_noise_var);
  Eigen::VectorXd d(n + 1);
  d.head(n).setConstant(a0 * b0);
  d[n] = b0;
  return Eigen::MatrixXcd(d.cast<std::complex<double>>().asDiagonal());
}

struct GridResult {
  double value = -1e300;
  Eigen::VectorXcd gains;
};

// Exhaustive magnitude/phase grid over the per-sensor box (first phase
// pinned to zero), followed by shrinking random refinement around the
// incumbent; maximizes an arbitrary objective of the gain vector.
template <typename Objective>
GridResult grid_maximize(const Eigen::VectorXd& mag_caps, int mag_steps,
                         int phase_steps, Objective&& objective,
                         std::uint64_t refine_seed, int refine_rounds = 8000) {
  const int n = static_cast<int>(mag_caps.size());
  GridResult best;
  std::vector<int> idx(2 * n - 1, 0);  // n magnitudes, n-1 phases
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::VectorXcd g(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      const double mag = mag_caps[i] * idx[i] / (mag_steps - 1);
      const double phase = i == 0 ? 0.0 : two_pi * idx[n + i - 1] / phase_steps;
      g[i] = std::polar(mag, phase);
    }
    const double v = objective(g);
    if (v > best.value) {
      best.value = v;
      best.gains = g;
    }
    int pos = 0;
    for (; pos < 2 * n - 1; ++pos) {
      const int lim = pos < n ? mag_steps : phase_steps;
      if (++idx[pos] < lim) break;
      idx[pos] = 0;
    }
    if (pos == 2 * n - 1) break;
  }

  // Local refinement keeps the result inside the same box.
  Rng rng(refine_seed);
  double radius = 1.0 / mag_steps;
  while (radius > 1e-9) {
    bool improved = false;
    for (int k = 0; k < refine_rounds; ++k) {
      Eigen::VectorXcd cand = best.gains;
      for (int i = 0; i < n; ++i) {
        cand[i] += radius * mag_caps[i] * rng.complex_normal();
        const double m = std::abs(cand[i]);
        if (m > mag_caps[i]) cand[i] *= mag_caps[i] / m;
      }
      const double v = objective(cand);
      if (v > best.value) {
        best.value = v;
        best.gains = cand;
        improved = true;
      }
    }
    if (!improved) radius *= 0.5;
  }
  return best;
}

// Multi-start projected gradient ascent for the sum-power problem, working
// in whitened coordinates where the power ellipsoid is a ball.
inline double projected_gradient_max(const NetworkScenario& sc,
                                     const ChannelRealization& ch, double p_t,
                                     int starts, std::uint64_t seed) {
  const int n = sc.n_sensors;
  const Eigen::VectorXd w = sc.power_weights();
  const Eigen::VectorXd root_w = w.cwiseSqrt();
  const Eigen::VectorXcd hw = ch.gains.cwiseQuotient(root_w.cast<std::complex<double>>());
  const Eigen::VectorXd noise_diag =
      ch.gains.cwiseAbs2().cwiseProduct(sc.meas_noise_vars).cwiseQuotient(w);

  // f(z) = |hw^H z|^2 / (z^H diag(noise) z + sigma_w^2), ||z||^2 <= P_T.
  auto value = [&](const Eigen::VectorXcd& z) {
    const std::complex<double> c = hw.dot(z);  // hw^H z
    const double den = noise_diag.dot(z.cwiseAbs2()) + sc.fc_noise_var;
    return std::norm(c) / den;
  };

  double best = -1e300;
  Rng rng(seed);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.complex_normal();
    z *= std::sqrt(p_t) / z.norm();
    double fz = value(z);
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
      const std::complex<double> c = hw.dot(z);
      const double den = noise_diag.dot(z.cwiseAbs2()) + sc.fc_noise_var;
      // Wirtinger gradient of the ratio with respect to conj(z).
      Eigen::VectorXcd grad =
          (hw * c) / den - (std::norm(c) / (den * den)) *
                               noise_diag.cast<std::complex<double>>().cwiseProduct(z);
      Eigen::VectorXcd cand;
      double fc = -1e300;
      for (; step > 1e-14; step *= 0.5) {
        cand = z + step * grad / std::max(grad.norm(), 1e-300);
        const double over = cand.norm();
        if (over * over > p_t) cand *= std::sqrt(p_t) / over;
        fc = value(cand);
        if (fc > fz) break;
      }
      if (fc <= fz) break;
      z = cand;
      fz = fc;
      step = std::min(step * 4.0, 1.0);
    }
    best = std::max(best, fz);
  }
  return best;
}

// Exact permutation p-value for a perfectly monotone Spearman trend:
// P(|rho| >= observed) under the null, enumerating all n! rank orders.
inline double spearman_p_value(const std::vector<double>& ys, bool increasing) {
  const int n = static_cast<int>(ys.size());
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(),
            [&](int a, int b) { return ys[a] < ys[b]; });
  std::vector<int> r(n);
  for (int i = 0; i < n; ++i) r[rank[i]] = i;

  auto d2 = [&](const std::vector<int>& perm) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = perm[i] - i;
      acc += d * d;
    }
    return acc;
  };
  std::vector<int> obs = r;
  if (!increasing) std::reverse(obs.begin(), obs.end());
  const double observed = d2(obs);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0, total = 0;
  do {
    if (d2(perm) <= observed) ++count;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(count) / total;
}

}  // namespace aftrack::testing
