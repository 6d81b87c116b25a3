#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "aftrack/allocate.hpp"
#include "aftrack/model.hpp"

namespace aftrack::harness {

enum class Strategy { equal, sum_constraint, individual_constraint, lower_bound };

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

enum class SweepVariable { n_sensors, sum_power, epsilon };

SweepVariable variable_from_name(const std::string& name);
std::string variable_name(SweepVariable v);

/// Monte Carlo sweep description. values must be nonempty and strictly
/// monotone. redraw_geometry redraws d_i and sigma_{v,i}^2 per trial;
/// otherwise geometry is drawn once per grid value.
struct SweepSpec {
  SweepVariable variable = SweepVariable::n_sensors;
  std::vector<double> values;
  int trials = 300;
  std::uint64_t seed = 0;
  bool redraw_geometry = false;

  void validate() const;
};

/// Scenario template a sweep instantiates per grid value: scalar fields
/// come from `base`; geometry is redrawn from `geometry` whenever the
/// value changes the sensor count (or redraw_geometry is set).
struct ScenarioTemplate {
  NetworkScenario base;
  GeometryDistribution geometry;
  double prior_mse = kDefaultPriorMse;
};

struct SweepCell {
  double mean = 0.0;
  double std_error = 0.0;
  int used = 0;
  int failed = 0;
};

struct SweepRow {
  double value = 0.0;
  double epsilon = 0.0;  // power sweeps only
  std::vector<SweepCell> cells;
};

struct SweepResult {
  std::vector<std::string> columns;  // one per cell
  std::vector<SweepRow> rows;
  std::string config_json;  // resolved configuration, hashed into the CSV header
  bool has_epsilon_column = false;
};

/// Mean achieved filtered MSE per strategy over channel draws.
/// variable must be n_sensors or sum_power.
SweepResult run_mse_sweep(const ScenarioTemplate& tmpl, const SweepSpec& spec,
                          const std::vector<Strategy>& strategies);

/// Mean required transmit powers (sum-optimal, min-max optimal and its sum)
/// plus the sandwich bounds and large-N approximation, per epsilon.
/// variable must be n_sensors. Infeasible draws are counted as failed.
SweepResult run_power_sweep(const ScenarioTemplate& tmpl, const SweepSpec& spec,
                            const std::vector<double>& epsilons);

struct OutageRow {
  double p_t;
  double analytic;
  double empirical;
  double half_width;  // normal-approximation 95% binomial half-width
  int trials;
};

/// Analytic vs empirical equal-power outage over a P_T grid.
std::vector<OutageRow> run_outage(const NetworkScenario& scenario,
                                  const std::vector<double>& p_t_grid,
                                  double epsilon, int trials, double prior_mse,
                                  std::uint64_t seed);

struct TrackRow {
  int step;
  Complex theta;
  Complex estimate;
  double pred_mse;
  double filt_mse;
  Eigen::VectorXd per_sensor_power;
};

/// Simulates a tracked trajectory; gains are re-optimized each step from
/// the current prediction MSE unless hold_gains keeps the step-0 gains.
std::vector<TrackRow> run_track(const NetworkScenario& scenario, int steps,
                                Strategy strategy, std::uint64_t seed,
                                double prior_mse, bool hold_gains);

/// CSV emission; the first line is a comment carrying the resolved
/// configuration and its FNV-1a hash.
void write_csv(std::ostream& os, const SweepResult& result);
void write_outage_csv(std::ostream& os, const std::vector<OutageRow>& rows,
                      const std::string& config_json);
void write_track_csv(std::ostream& os, const std::vector<TrackRow>& rows,
                     const std::string& config_json);

/// FNV-1a 64-bit hash used in CSV headers.
std::uint64_t config_hash(const std::string& config_json);

/// Deterministic parallel map over trial indices: results are gathered in
/// index order so aggregation is independent of thread count.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace aftrack::harness
