#include "aftrack/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "aftrack/outage.hpp"
#include "aftrack/track.hpp"

namespace aftrack::harness {

using nlohmann::json;

Strategy strategy_from_name(const std::string& name) {
  if (name == "equal") return Strategy::equal;
  if (name == "sum-constraint") return Strategy::sum_constraint;
  if (name == "individual-constraint") return Strategy::individual_constraint;
  if (name == "lower-bound") return Strategy::lower_bound;
  throw ValidationError("strategy: unknown name '" + name + "'");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::equal: return "equal";
    case Strategy::sum_constraint: return "sum-constraint";
    case Strategy::individual_constraint: return "individual-constraint";
    case Strategy::lower_bound: return "lower-bound";
  }
  return "?";
}

SweepVariable variable_from_name(const std::string& name) {
  if (name == "n_sensors") return SweepVariable::n_sensors;
  if (name == "sum_power") return SweepVariable::sum_power;
  if (name == "epsilon") return SweepVariable::epsilon;
  throw ValidationError("variable: unknown name '" + name + "'");
}

std::string variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::n_sensors: return "n_sensors";
    case SweepVariable::sum_power: return "sum_power";
    case SweepVariable::epsilon: return "epsilon";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("sweep: values must be nonempty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1]) && !(values[i] < values[i - 1])) {
      throw ValidationError("sweep: values must be strictly monotone");
    }
    if (i >= 2) {
      const bool up = values[1] > values[0];
      if (up != (values[i] > values[i - 1])) {
        throw ValidationError("sweep: values must be strictly monotone");
      }
    }
  }
  if (trials < 1) throw ValidationError("sweep: trials must be >= 1");
}

void parallel_for(int count, const std::function<void(int)>& body) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AFTRACK_THREADS")) {
    workers = std::atoi(env);
  }
  workers = std::max(1, std::min(workers, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t config_hash(const std::string& config_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_json) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr std::uint64_t kGeometryTag = 0xffffffffULL;

std::uint64_t trial_index(std::size_t value_idx, std::uint64_t tag) {
  return (static_cast<std::uint64_t>(value_idx) << 32) | tag;
}

json scenario_json(const NetworkScenario& sc, bool include_geometry) {
  json j{{"n_sensors", sc.n_sensors},
         {"path_loss_exp", sc.path_loss_exp},
         {"fc_noise_var", sc.fc_noise_var},
         {"sum_power", sc.sum_power},
         {"alpha", {sc.model.alpha.real(), sc.model.alpha.imag()}},
         {"sigma_u_sq", sc.model.sigma_u_sq}};
  if (include_geometry) {
    j["distances"] = std::vector<double>(sc.distances.begin(), sc.distances.end());
    j["meas_noise_vars"] =
        std::vector<double>(sc.meas_noise_vars.begin(), sc.meas_noise_vars.end());
    j["indiv_powers"] =
        std::vector<double>(sc.indiv_powers.begin(), sc.indiv_powers.end());
  }
  return j;
}

NetworkScenario with_sum_power(const NetworkScenario& base, double p_t) {
  // Custom per-sensor budgets survive only when the total is unchanged;
  // otherwise they rescale to the default P_T/N split.
  Eigen::VectorXd indiv =
      p_t == base.sum_power ? base.indiv_powers : Eigen::VectorXd();
  return NetworkScenario::make(base.n_sensors, base.distances, base.path_loss_exp,
                               base.meas_noise_vars, base.fc_noise_var, p_t,
                               std::move(indiv), base.model);
}

double eval_strategy_mse(Strategy s, const NetworkScenario& sc,
                         const ChannelRealization& ch, double prior) {
  switch (s) {
    case Strategy::equal:
      return allocate::equal_power_allocation(sc, ch, prior).achieved_mse;
    case Strategy::sum_constraint:
      return allocate::min_mse_sum_power(sc, ch, prior).achieved_mse;
    case Strategy::individual_constraint:
      return allocate::min_mse_individual_power(sc, ch, prior).achieved_mse;
    case Strategy::lower_bound:
      return allocate::mse_lower_bound(sc, prior).value;
  }
  throw ValidationError("strategy: unknown");
}

GainAllocation strategy_allocation(Strategy s, const NetworkScenario& sc,
                                   const ChannelRealization& ch, double prior) {
  switch (s) {
    case Strategy::equal:
      return allocate::equal_power_allocation(sc, ch, prior);
    case Strategy::sum_constraint:
      return allocate::min_mse_sum_power(sc, ch, prior);
    case Strategy::individual_constraint:
      return allocate::min_mse_individual_power(sc, ch, prior);
    case Strategy::lower_bound:
      break;
  }
  throw ValidationError("strategy: lower-bound is not a transmit strategy");
}

struct CellAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int used = 0;
  int failed = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++used;
  }
  SweepCell cell() const {
    SweepCell c;
    c.used = used;
    c.failed = failed;
    if (used > 0) c.mean = sum / used;
    if (used > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / used) / (used - 1));
      c.std_error = std::sqrt(var / used);
    }
    return c;
  }
};

}  // namespace

SweepResult run_mse_sweep(const ScenarioTemplate& tmpl, const SweepSpec& spec,
                          const std::vector<Strategy>& strategies) {
  spec.validate();
  if (strategies.empty()) throw ValidationError("mse-sweep: no strategies given");
  if (spec.variable == SweepVariable::epsilon) {
    throw ValidationError("mse-sweep: variable must be n_sensors or sum_power");
  }

  SweepResult result;
  for (Strategy s : strategies) result.columns.push_back(strategy_name(s));

  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    const double value = spec.values[vi];
    const int n = spec.variable == SweepVariable::n_sensors
                      ? static_cast<int>(value)
                      : tmpl.base.n_sensors;
    if (spec.variable == SweepVariable::n_sensors &&
        (value < 1 || value != std::floor(value))) {
      throw ValidationError("mse-sweep: n_sensors values must be positive integers");
    }
    const double p_t =
        spec.variable == SweepVariable::sum_power ? value : tmpl.base.sum_power;

    NetworkScenario base_v = with_sum_power(tmpl.base, p_t);
    if (!spec.redraw_geometry && spec.variable == SweepVariable::n_sensors) {
      Rng geo = Rng::substream(spec.seed, trial_index(vi, kGeometryTag));
      base_v = redraw_geometry(base_v, tmpl.geometry, n, geo);
    }

    const int ns = static_cast<int>(strategies.size());
    std::vector<double> trial_mse(static_cast<std::size_t>(spec.trials) * ns,
                                  std::numeric_limits<double>::quiet_NaN());
    parallel_for(spec.trials, [&](int t) {
      Rng rng = Rng::substream(spec.seed, trial_index(vi, static_cast<std::uint64_t>(t)));
      NetworkScenario sc = base_v;
      if (spec.redraw_geometry) sc = redraw_geometry(base_v, tmpl.geometry, n, rng);
      const ChannelRealization ch = sample_channel(sc, rng);
      for (int si = 0; si < ns; ++si) {
        try {
          trial_mse[static_cast<std::size_t>(t) * ns + si] =
              eval_strategy_mse(strategies[si], sc, ch, tmpl.prior_mse);
        } catch (const ValidationError&) {
        } catch (const NumericalError&) {
        }
      }
    });

    SweepRow row;
    row.value = value;
    std::vector<CellAccumulator> acc(ns);
    for (int t = 0; t < spec.trials; ++t) {
      for (int si = 0; si < ns; ++si) {
        const double v = trial_mse[static_cast<std::size_t>(t) * ns + si];
        if (std::isnan(v)) {
          ++acc[si].failed;
        } else {
          acc[si].add(v);
        }
      }
    }
    for (int si = 0; si < ns; ++si) row.cells.push_back(acc[si].cell());
    result.rows.push_back(std::move(row));
  }

  json cfg{{"subcommand", "mse-sweep"},
           {"variable", variable_name(spec.variable)},
           {"values", spec.values},
           {"trials", spec.trials},
           {"seed", spec.seed},
           {"redraw_geometry", spec.redraw_geometry},
           {"prior_mse", tmpl.prior_mse},
           {"strategies", result.columns},
           {"scenario", scenario_json(tmpl.base,
                                      spec.variable != SweepVariable::n_sensors &&
                                          !spec.redraw_geometry)}};
  result.config_json = cfg.dump();
  return result;
}

SweepResult run_power_sweep(const ScenarioTemplate& tmpl, const SweepSpec& spec,
                            const std::vector<double>& epsilons) {
  spec.validate();
  if (epsilons.empty()) throw ValidationError("power-sweep: no epsilons given");
  if (spec.variable != SweepVariable::n_sensors) {
    throw ValidationError("power-sweep: variable must be n_sensors");
  }

  SweepResult result;
  result.has_epsilon_column = true;
  result.columns = {"sum_power_star", "minmax_power",  "minmax_sum_power",
                    "th2_lower",      "th2_upper",     "eq_large_n"};
  const int ncols = static_cast<int>(result.columns.size());
  const int ne = static_cast<int>(epsilons.size());

  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    const double value = spec.values[vi];
    if (value < 1 || value != std::floor(value)) {
      throw ValidationError("power-sweep: n_sensors values must be positive integers");
    }
    const int n = static_cast<int>(value);

    NetworkScenario base_v = tmpl.base;
    if (!spec.redraw_geometry) {
      Rng geo = Rng::substream(spec.seed, trial_index(vi, kGeometryTag));
      base_v = redraw_geometry(base_v, tmpl.geometry, n, geo);
    }

    std::vector<double> cells(static_cast<std::size_t>(spec.trials) * ne * ncols,
                              std::numeric_limits<double>::quiet_NaN());
    parallel_for(spec.trials, [&](int t) {
      Rng rng = Rng::substream(spec.seed, trial_index(vi, static_cast<std::uint64_t>(t)));
      NetworkScenario sc = base_v;
      if (spec.redraw_geometry) sc = redraw_geometry(base_v, tmpl.geometry, n, rng);
      const ChannelRealization ch = sample_channel(sc, rng);
      for (int ei = 0; ei < ne; ++ei) {
        double* out = &cells[(static_cast<std::size_t>(t) * ne + ei) * ncols];
        try {
          const allocate::MseTarget target =
              allocate::check_feasibility(sc, tmpl.prior_mse, epsilons[ei]);
          if (target.feasibility != allocate::Feasibility::feasible &&
              target.feasibility != allocate::Feasibility::upper_boundary) {
            continue;  // infeasible draw: all cells stay failed
          }
          const GainAllocation sum_opt = allocate::min_sum_power_mse(sc, ch, target);
          out[0] = sum_opt.sum_power;
          const allocate::SumPowerBounds bounds =
              allocate::sum_power_bounds(sc, ch, target);
          out[3] = bounds.lower;
          if (bounds.valid) out[4] = bounds.upper;
          out[5] = bounds.approx;
          const GainAllocation minmax = allocate::min_max_power_mse(sc, ch, target);
          out[1] = minmax.per_sensor_power.size()
                       ? minmax.per_sensor_power.maxCoeff()
                       : 0.0;
          out[2] = minmax.sum_power;
        } catch (const ValidationError&) {
        } catch (const NumericalError&) {
        }
      }
    });

    for (int ei = 0; ei < ne; ++ei) {
      SweepRow row;
      row.value = value;
      row.epsilon = epsilons[ei];
      std::vector<CellAccumulator> acc(ncols);
      for (int t = 0; t < spec.trials; ++t) {
        for (int c = 0; c < ncols; ++c) {
          const double v = cells[(static_cast<std::size_t>(t) * ne + ei) * ncols + c];
          if (std::isnan(v)) {
            ++acc[c].failed;
          } else {
            acc[c].add(v);
          }
        }
      }
      for (int c = 0; c < ncols; ++c) row.cells.push_back(acc[c].cell());
      result.rows.push_back(std::move(row));
    }
  }

  json cfg{{"subcommand", "power-sweep"},
           {"variable", variable_name(spec.variable)},
           {"values", spec.values},
           {"epsilons", epsilons},
           {"trials", spec.trials},
           {"seed", spec.seed},
           {"redraw_geometry", spec.redraw_geometry},
           {"prior_mse", tmpl.prior_mse},
           {"scenario", scenario_json(tmpl.base, false)}};
  result.config_json = cfg.dump();
  return result;
}

std::vector<OutageRow> run_outage(const NetworkScenario& scenario,
                                  const std::vector<double>& p_t_grid, double epsilon,
                                  int trials, double prior_mse, std::uint64_t seed) {
  if (p_t_grid.empty()) throw ValidationError("outage: empty P_T grid");
  if (trials < 1) throw ValidationError("outage: trials must be >= 1");
  if (trials < 10000) {
    std::fprintf(stderr,
                 "aftrack: outage with %d trials; at least 10000 are recommended for "
                 "a stable empirical column\n",
                 trials);
  }
  std::vector<OutageRow> rows;
  rows.reserve(p_t_grid.size());
  for (std::size_t pi = 0; pi < p_t_grid.size(); ++pi) {
    const NetworkScenario sc = with_sum_power(scenario, p_t_grid[pi]);
    const allocate::MseTarget target = allocate::check_feasibility(sc, prior_mse, epsilon);
    const double analytic = outage::outage_probability(sc, target);
    const GainAllocation equal = allocate::equal_power_allocation(sc, prior_mse);

    std::vector<std::uint8_t> exceeded(trials, 0);
    parallel_for(trials, [&](int t) {
      Rng rng = Rng::substream(seed, trial_index(pi, static_cast<std::uint64_t>(t)));
      const ChannelRealization ch = sample_channel(sc, rng);
      const double mse = track::filtered_mse(prior_mse, sc, ch, equal.gains);
      exceeded[t] = mse > epsilon ? 1 : 0;
    });
    int count = 0;
    for (std::uint8_t e : exceeded) count += e;
    const double p = static_cast<double>(count) / trials;
    rows.push_back(OutageRow{p_t_grid[pi], analytic, p,
                             1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / trials),
                             trials});
  }
  return rows;
}

std::vector<TrackRow> run_track(const NetworkScenario& scenario, int steps,
                                Strategy strategy, std::uint64_t seed, double prior_mse,
                                bool hold_gains) {
  if (steps < 1) throw ValidationError("track: steps must be >= 1");
  if (strategy == Strategy::lower_bound) {
    throw ValidationError("track: lower-bound is not a transmit strategy");
  }
  std::vector<TrackRow> rows;
  rows.reserve(steps);
  track::TrackState state = track::initial_state(prior_mse);
  Complex theta{0.0, 0.0};
  GainAllocation alloc;
  for (int n = 0; n < steps; ++n) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(n));
    if (n == 0) {
      theta = std::sqrt(scenario.model.sigma_theta_sq()) * rng.complex_normal();
    } else {
      theta = track::evolve(theta, scenario.model, rng);
    }
    const ChannelRealization ch = sample_channel(scenario, rng);
    if (n == 0 || !hold_gains) {
      alloc = strategy_allocation(strategy, scenario, ch, state.pred_mse);
    }
    const Complex y = track::observe(theta, scenario, ch, alloc.gains, rng);
    state = track::update(state, scenario.model, scenario, ch, alloc.gains, y);
    rows.push_back(TrackRow{n, theta, state.estimate, state.pred_mse, state.filt_mse,
                            alloc.per_sensor_power});
    state = track::predict(state, scenario.model);
  }
  return rows;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& result) {
  os << "# aftrack config=" << result.config_json << " hash=0x" << std::hex
     << config_hash(result.config_json) << std::dec << "\n";
  os << "value";
  if (result.has_epsilon_column) os << ",epsilon";
  for (const std::string& c : result.columns) {
    os << "," << c << "_mean," << c << "_se," << c << "_used," << c << "_failed";
  }
  os << "\n";
  for (const SweepRow& row : result.rows) {
    put(os, row.value);
    if (result.has_epsilon_column) {
      os << ",";
      put(os, row.epsilon);
    }
    for (const SweepCell& cell : row.cells) {
      os << ",";
      put(os, cell.mean);
      os << ",";
      put(os, cell.std_error);
      os << "," << cell.used << "," << cell.failed;
    }
    os << "\n";
  }
}

void write_outage_csv(std::ostream& os, const std::vector<OutageRow>& rows,
                      const std::string& config_json) {
  os << "# aftrack config=" << config_json << " hash=0x" << std::hex
     << config_hash(config_json) << std::dec << "\n";
  os << "p_t,analytic,empirical,half_width,trials\n";
  for (const OutageRow& r : rows) {
    put(os, r.p_t);
    os << ",";
    put(os, r.analytic);
    os << ",";
    put(os, r.empirical);
    os << ",";
    put(os, r.half_width);
    os << "," << r.trials << "\n";
  }
}

void write_track_csv(std::ostream& os, const std::vector<TrackRow>& rows,
                     const std::string& config_json) {
  os << "# aftrack config=" << config_json << " hash=0x" << std::hex
     << config_hash(config_json) << std::dec << "\n";
  os << "step,theta_re,theta_im,estimate_re,estimate_im,pred_mse,filt_mse";
  const int n = rows.empty() ? 0 : static_cast<int>(rows.front().per_sensor_power.size());
  for (int i = 1; i <= n; ++i) os << ",power_" << i;
  os << "\n";
  for (const TrackRow& r : rows) {
    os << r.step << ",";
    put(os, r.theta.real());
    os << ",";
    put(os, r.theta.imag());
    os << ",";
    put(os, r.estimate.real());
    os << ",";
    put(os, r.estimate.imag());
    os << ",";
    put(os, r.pred_mse);
    os << ",";
    put(os, r.filt_mse);
    for (Eigen::Index i = 0; i < r.per_sensor_power.size(); ++i) {
      os << ",";
      put(os, r.per_sensor_power[i]);
    }
    os << "\n";
  }
}

}  // namespace aftrack::harness
