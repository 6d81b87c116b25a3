// Command-line front end: scenario loading, Monte Carlo sweeps, outage
// tables, tracked trajectories and single-shot allocations, all emitted as
// CSV/JSON. Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aftrack/allocate.hpp"
#include "aftrack/harness.hpp"
#include "aftrack/model.hpp"
#include "aftrack/outage.hpp"
#include "aftrack/sdp.hpp"

namespace {

using namespace aftrack;

struct CommonOpts {
  std::string scenario_path;
  std::string preset = "paper-sec7";
  int n_sensors = 10;
  std::uint64_t seed = 0;
  double prior_mse = kDefaultPriorMse;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scenario", o.scenario_path, "Scenario JSON file");
  cmd->add_option("--preset", o.preset, "Named preset (paper-sec7, paper-fig5)")
      ->check(CLI::IsMember({"paper-sec7", "paper-fig5"}));
  cmd->add_option("--n", o.n_sensors, "Sensor count for preset scenarios");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--prior-mse", o.prior_mse, "Prediction MSE the step starts from");
  cmd->add_option("--out", o.out_path, "Output file (default stdout)");
}

NetworkScenario resolve_scenario(const CommonOpts& o) {
  if (!o.scenario_path.empty()) return load_scenario(o.scenario_path);
  return preset_scenario(o.preset, o.n_sensors, o.seed);
}

harness::ScenarioTemplate resolve_template(const CommonOpts& o) {
  harness::ScenarioTemplate tmpl{resolve_scenario(o), preset_geometry(o.preset),
                                 o.prior_mse};
  return tmpl;
}

template <typename WriteFn>
void emit(const CommonOpts& o, WriteFn&& write) {
  if (o.out_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(o.out_path);
  if (!out) throw ValidationError("cannot open output file " + o.out_path);
  write(out);
}

std::vector<harness::Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<harness::Strategy> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.push_back(harness::strategy_from_name(n));
  return out;
}

nlohmann::json allocation_json(const NetworkScenario& sc, const GainAllocation& a) {
  nlohmann::json gains = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.gains.size(); ++i) {
    gains.push_back({a.gains[i].real(), a.gains[i].imag()});
  }
  return nlohmann::json{
      {"n_sensors", sc.n_sensors},
      {"gains", gains},
      {"per_sensor_power",
       std::vector<double>(a.per_sensor_power.begin(), a.per_sensor_power.end())},
      {"sum_power", a.sum_power},
      {"achieved_mse", a.achieved_mse}};
}

int run(int argc, char** argv) {
  CLI::App app{"Transmit-gain optimization for distributed parameter tracking "
               "over a coherent multiple-access channel"};
  app.require_subcommand(1);

  // mse-sweep
  CommonOpts mse_opts;
  std::vector<std::string> mse_strategies = {"equal", "individual-constraint",
                                             "sum-constraint", "lower-bound"};
  std::string mse_variable = "n_sensors";
  std::vector<double> mse_values;
  int mse_trials = 300;
  bool mse_redraw = false;
  CLI::App* mse = app.add_subcommand("mse-sweep", "Mean achieved MSE per strategy");
  add_common(mse, mse_opts);
  mse->add_option("--variable", mse_variable, "Sweep variable (n_sensors or sum_power)");
  mse->add_option("--values", mse_values, "Grid values")->required()->delimiter(',');
  mse->add_option("--trials", mse_trials, "Monte Carlo trials per grid value");
  mse->add_option("--strategies", mse_strategies, "Strategies to evaluate")
      ->delimiter(',');
  mse->add_flag("--redraw-geometry", mse_redraw,
                "Redraw distances and noise variances each trial");

  // power-sweep
  CommonOpts pow_opts;
  std::vector<double> pow_values;
  std::vector<double> pow_epsilons = {0.1};
  int pow_trials = 300;
  bool pow_redraw = false;
  CLI::App* pow = app.add_subcommand("power-sweep",
                                     "Required transmit power per MSE target");
  add_common(pow, pow_opts);
  pow->add_option("--values", pow_values, "Sensor-count grid")->required()->delimiter(',');
  pow->add_option("--epsilons", pow_epsilons, "MSE targets")->delimiter(',');
  pow->add_option("--trials", pow_trials, "Monte Carlo trials per grid value");
  pow->add_flag("--redraw-geometry", pow_redraw,
                "Redraw distances and noise variances each trial");

  // outage
  CommonOpts out_opts;
  std::vector<double> pt_grid;
  double out_epsilon = 0.1;
  int out_trials = 100000;
  CLI::App* outc = app.add_subcommand("outage",
                                      "Analytic vs empirical equal-power MSE outage");
  add_common(outc, out_opts);
  outc->add_option("--pt-grid", pt_grid, "Sum-power grid")->required()->delimiter(',');
  outc->add_option("--epsilon", out_epsilon, "MSE outage threshold");
  outc->add_option("--trials", out_trials, "Channel draws per grid point");

  // track
  CommonOpts trk_opts;
  int trk_steps = 1000;
  std::string trk_strategy = "sum-constraint";
  bool trk_hold = false;
  CLI::App* trk = app.add_subcommand("track", "Simulate a tracked trajectory");
  add_common(trk, trk_opts);
  trk->add_option("--steps", trk_steps, "Number of time steps");
  trk->add_option("--strategy", trk_strategy, "Transmit strategy");
  trk->add_flag("--hold-gains", trk_hold, "Keep the step-0 gains for the whole run");

  // allocate
  CommonOpts alc_opts;
  std::string alc_problem = "min-mse-sum";
  double alc_epsilon = 0.1;
  std::string alc_dump_sdp;
  CLI::App* alc = app.add_subcommand("allocate",
                                     "Single-shot allocation printed as JSON");
  add_common(alc, alc_opts);
  alc->add_option("--problem", alc_problem,
                  "One of min-mse-sum, min-mse-individual, min-sum-power, "
                  "min-max-power, equal, high-snr, low-snr")
      ->check(CLI::IsMember({"min-mse-sum", "min-mse-individual", "min-sum-power",
                             "min-max-power", "equal", "high-snr", "low-snr"}));
  alc->add_option("--epsilon", alc_epsilon, "MSE target for the power-minimizing problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (mse->parsed()) {
    harness::SweepSpec spec{harness::variable_from_name(mse_variable), mse_values,
                            mse_trials, mse_opts.seed, mse_redraw};
    const harness::SweepResult result =
        harness::run_mse_sweep(resolve_template(mse_opts), spec,
                               parse_strategies(mse_strategies));
    emit(mse_opts, [&](std::ostream& os) { harness::write_csv(os, result); });
  } else if (pow->parsed()) {
    harness::SweepSpec spec{harness::SweepVariable::n_sensors, pow_values, pow_trials,
                            pow_opts.seed, pow_redraw};
    const harness::SweepResult result =
        harness::run_power_sweep(resolve_template(pow_opts), spec, pow_epsilons);
    emit(pow_opts, [&](std::ostream& os) { harness::write_csv(os, result); });
  } else if (outc->parsed()) {
    const NetworkScenario sc = resolve_scenario(out_opts);
    const auto rows = harness::run_outage(sc, pt_grid, out_epsilon, out_trials,
                                          out_opts.prior_mse, out_opts.seed);
    nlohmann::json cfg{{"subcommand", "outage"},  {"epsilon", out_epsilon},
                       {"trials", out_trials},    {"seed", out_opts.seed},
                       {"pt_grid", pt_grid},      {"n_sensors", sc.n_sensors},
                       {"prior_mse", out_opts.prior_mse}};
    emit(out_opts,
         [&](std::ostream& os) { harness::write_outage_csv(os, rows, cfg.dump()); });
  } else if (trk->parsed()) {
    const NetworkScenario sc = resolve_scenario(trk_opts);
    const auto rows =
        harness::run_track(sc, trk_steps, harness::strategy_from_name(trk_strategy),
                           trk_opts.seed, trk_opts.prior_mse, trk_hold);
    nlohmann::json cfg{{"subcommand", "track"},
                       {"steps", trk_steps},
                       {"strategy", trk_strategy},
                       {"seed", trk_opts.seed},
                       {"hold_gains", trk_hold},
                       {"prior_mse", trk_opts.prior_mse},
                       {"n_sensors", sc.n_sensors}};
    emit(trk_opts,
         [&](std::ostream& os) { harness::write_track_csv(os, rows, cfg.dump()); });
  } else if (alc->parsed()) {
    const NetworkScenario sc = resolve_scenario(alc_opts);
    Rng rng = Rng::substream(alc_opts.seed, 1);
    const ChannelRealization ch = sample_channel(sc, rng);
    GainAllocation alloc;
    if (alc_problem == "min-mse-sum") {
      alloc = allocate::min_mse_sum_power(sc, ch, alc_opts.prior_mse);
    } else if (alc_problem == "min-mse-individual") {
      alloc = allocate::min_mse_individual_power(sc, ch, alc_opts.prior_mse);
    } else if (alc_problem == "min-sum-power") {
      alloc = allocate::min_sum_power_mse(
          sc, ch, allocate::check_feasibility(sc, alc_opts.prior_mse, alc_epsilon));
    } else if (alc_problem == "min-max-power") {
      alloc = allocate::min_max_power_mse(
          sc, ch, allocate::check_feasibility(sc, alc_opts.prior_mse, alc_epsilon));
    } else if (alc_problem == "equal") {
      alloc = allocate::equal_power_allocation(sc, ch, alc_opts.prior_mse);
    } else if (alc_problem == "high-snr") {
      alloc = allocate::asymptotic_gains(sc, ch, allocate::SnrRegime::high_snr,
                                         alc_opts.prior_mse);
    } else {
      alloc = allocate::asymptotic_gains(sc, ch, allocate::SnrRegime::low_snr,
                                         alc_opts.prior_mse);
    }
    emit(alc_opts, [&](std::ostream& os) {
      os << allocation_json(sc, alloc).dump(2) << "\n";
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const aftrack::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const aftrack::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
