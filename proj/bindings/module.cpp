#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "aftrack/allocate.hpp"
#include "aftrack/harness.hpp"
#include "aftrack/model.hpp"
#include "aftrack/outage.hpp"
#include "aftrack/track.hpp"

namespace py = pybind11;
using namespace aftrack;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transmit-gain optimization for distributed parameter tracking over "
            "a coherent multiple-access channel";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("substream", &Rng::substream, py::arg("seed"), py::arg("index"))
      .def("uniform", py::overload_cast<>(&Rng::uniform))
      .def("complex_normal", &Rng::complex_normal);

  py::class_<GaussMarkovModel>(m, "GaussMarkovModel")
      .def(py::init([](Complex alpha, double sigma_u_sq) {
             GaussMarkovModel model{alpha, sigma_u_sq};
             model.validate();
             return model;
           }),
           py::arg("alpha") = Complex{0.9, 0.0}, py::arg("sigma_u_sq") = 0.19)
      .def_readonly("alpha", &GaussMarkovModel::alpha)
      .def_readonly("sigma_u_sq", &GaussMarkovModel::sigma_u_sq)
      .def_property_readonly("sigma_theta_sq", &GaussMarkovModel::sigma_theta_sq);

  py::class_<NetworkScenario>(m, "NetworkScenario")
      .def_readonly("n_sensors", &NetworkScenario::n_sensors)
      .def_readonly("distances", &NetworkScenario::distances)
      .def_readonly("path_loss_exp", &NetworkScenario::path_loss_exp)
      .def_readonly("meas_noise_vars", &NetworkScenario::meas_noise_vars)
      .def_readonly("fc_noise_var", &NetworkScenario::fc_noise_var)
      .def_readonly("sum_power", &NetworkScenario::sum_power)
      .def_readonly("indiv_powers", &NetworkScenario::indiv_powers)
      .def_readonly("model", &NetworkScenario::model)
      .def("power_weights", &NetworkScenario::power_weights)
      .def_static("make", &NetworkScenario::make, py::arg("n_sensors"),
                  py::arg("distances"), py::arg("path_loss_exp"),
                  py::arg("meas_noise_vars"), py::arg("fc_noise_var"),
                  py::arg("sum_power"),
                  py::arg("indiv_powers") = Eigen::VectorXd(),
                  py::arg("model") = GaussMarkovModel{});

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init([](Eigen::VectorXcd gains) {
             return ChannelRealization{std::move(gains)};
           }),
           py::arg("gains"))
      .def_readonly("gains", &ChannelRealization::gains);

  py::class_<GainAllocation>(m, "GainAllocation")
      .def_readonly("gains", &GainAllocation::gains)
      .def_readonly("per_sensor_power", &GainAllocation::per_sensor_power)
      .def_readonly("sum_power", &GainAllocation::sum_power)
      .def_readonly("achieved_mse", &GainAllocation::achieved_mse);

  m.def("sample_channel", &sample_channel, py::arg("scenario"), py::arg("rng"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("scenario_from_json", &scenario_from_json, py::arg("text"));
  m.def("preset_scenario", &preset_scenario, py::arg("name"), py::arg("n_sensors"),
        py::arg("geometry_seed") = 0);

  // allocate
  py::enum_<allocate::Feasibility>(m, "Feasibility")
      .value("infeasible", allocate::Feasibility::infeasible)
      .value("lower_boundary", allocate::Feasibility::lower_boundary)
      .value("feasible", allocate::Feasibility::feasible)
      .value("upper_boundary", allocate::Feasibility::upper_boundary);

  py::class_<allocate::MseTarget>(m, "MseTarget")
      .def_readonly("epsilon", &allocate::MseTarget::epsilon)
      .def_readonly("prior_mse", &allocate::MseTarget::prior_mse)
      .def_readonly("feasibility", &allocate::MseTarget::feasibility);

  py::class_<allocate::LowerBound>(m, "LowerBound")
      .def_readonly("value", &allocate::LowerBound::value)
      .def_readonly("degenerate", &allocate::LowerBound::degenerate);

  py::class_<allocate::SumPowerBounds>(m, "SumPowerBounds")
      .def_readonly("lower", &allocate::SumPowerBounds::lower)
      .def_readonly("upper", &allocate::SumPowerBounds::upper)
      .def_readonly("xi", &allocate::SumPowerBounds::xi)
      .def_readonly("zeta", &allocate::SumPowerBounds::zeta)
      .def_readonly("approx", &allocate::SumPowerBounds::approx)
      .def_readonly("valid", &allocate::SumPowerBounds::valid);

  py::enum_<allocate::SnrRegime>(m, "SnrRegime")
      .value("high_snr", allocate::SnrRegime::high_snr)
      .value("low_snr", allocate::SnrRegime::low_snr);

  m.def("check_feasibility", &allocate::check_feasibility, py::arg("scenario"),
        py::arg("prior_mse"), py::arg("epsilon"));
  m.def("mse_lower_bound", &allocate::mse_lower_bound, py::arg("scenario"),
        py::arg("prior_mse"));
  m.def("min_mse_sum_power", &allocate::min_mse_sum_power, py::arg("scenario"),
        py::arg("channel"), py::arg("prior_mse"));
  m.def("min_mse_individual_power", &allocate::min_mse_individual_power,
        py::arg("scenario"), py::arg("channel"), py::arg("prior_mse"));
  m.def("min_sum_power_mse", &allocate::min_sum_power_mse, py::arg("scenario"),
        py::arg("channel"), py::arg("target"));
  m.def("min_max_power_mse", &allocate::min_max_power_mse, py::arg("scenario"),
        py::arg("channel"), py::arg("target"));
  m.def("equal_power_allocation",
        py::overload_cast<const NetworkScenario&, double>(
            &allocate::equal_power_allocation),
        py::arg("scenario"), py::arg("prior_mse"));
  m.def("equal_power_allocation",
        py::overload_cast<const NetworkScenario&, const ChannelRealization&, double>(
            &allocate::equal_power_allocation),
        py::arg("scenario"), py::arg("channel"), py::arg("prior_mse"));
  m.def("asymptotic_gains", &allocate::asymptotic_gains, py::arg("scenario"),
        py::arg("channel"), py::arg("regime"), py::arg("prior_mse"));
  m.def("sum_power_bounds", &allocate::sum_power_bounds, py::arg("scenario"),
        py::arg("channel"), py::arg("target"));

  // track
  py::class_<track::TrackState>(m, "TrackState")
      .def_readonly("estimate", &track::TrackState::estimate)
      .def_readonly("pred_mse", &track::TrackState::pred_mse)
      .def_readonly("filt_mse", &track::TrackState::filt_mse)
      .def_readonly("step", &track::TrackState::step);

  m.def("initial_state", &track::initial_state, py::arg("prior_mse"));
  m.def("predict", &track::predict, py::arg("state"), py::arg("model"));
  m.def("filtered_mse", &track::filtered_mse, py::arg("pred_mse"), py::arg("scenario"),
        py::arg("channel"), py::arg("gains"));
  m.def("update", &track::update, py::arg("state"), py::arg("model"),
        py::arg("scenario"), py::arg("channel"), py::arg("gains"),
        py::arg("observation"));

  // outage
  m.def("outage_probability", &outage::outage_probability, py::arg("scenario"),
        py::arg("target"));
  m.def("outage_limit_high_power", &outage::outage_limit_high_power,
        py::arg("scenario"), py::arg("target"));

  // harness
  py::class_<harness::OutageRow>(m, "OutageRow")
      .def_readonly("p_t", &harness::OutageRow::p_t)
      .def_readonly("analytic", &harness::OutageRow::analytic)
      .def_readonly("empirical", &harness::OutageRow::empirical)
      .def_readonly("half_width", &harness::OutageRow::half_width)
      .def_readonly("trials", &harness::OutageRow::trials);

  m.def("run_outage", &harness::run_outage, py::arg("scenario"), py::arg("p_t_grid"),
        py::arg("epsilon"), py::arg("trials"),
        py::arg("prior_mse") = kDefaultPriorMse, py::arg("seed") = 0);
}
