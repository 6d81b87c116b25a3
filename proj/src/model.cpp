#include "aftrack/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace aftrack {

using nlohmann::json;

void GaussMarkovModel::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw ValidationError("model.alpha: must be finite");
  }
  if (std::abs(alpha) >= 1.0) {
    throw ValidationError("model.alpha: |alpha| must be < 1 for a stationary process");
  }
  if (!(sigma_u_sq >= 0.0) || !std::isfinite(sigma_u_sq)) {
    throw ValidationError("model.sigma_u_sq: must be finite and >= 0");
  }
}

Eigen::VectorXd NetworkScenario::power_weights() const {
  return meas_noise_vars.array() + model.sigma_theta_sq();
}

NetworkScenario NetworkScenario::make(int n_sensors, Eigen::VectorXd distances,
                                      double path_loss_exp,
                                      Eigen::VectorXd meas_noise_vars,
                                      double fc_noise_var, double sum_power,
                                      Eigen::VectorXd indiv_powers,
                                      GaussMarkovModel model) {
  if (n_sensors < 1) throw ValidationError("n_sensors: must be >= 1");
  model.validate();
  if (!(model.sigma_theta_sq() > 0.0)) {
    throw ValidationError("model.sigma_u_sq: stationary variance must be > 0");
  }
  auto check_len = [&](const Eigen::VectorXd& v, const char* field) {
    if (v.size() != n_sensors) {
      std::ostringstream os;
      os << field << ": length " << v.size() << " does not match n_sensors=" << n_sensors;
      throw ValidationError(os.str());
    }
  };
  check_len(distances, "distances");
  check_len(meas_noise_vars, "meas_noise_vars");
  if (indiv_powers.size() == 0) {
    indiv_powers = Eigen::VectorXd::Constant(n_sensors, sum_power / n_sensors);
  }
  check_len(indiv_powers, "indiv_powers");
  if ((distances.array() <= 0.0).any()) throw ValidationError("distances: entries must be > 0");
  if ((meas_noise_vars.array() < 0.0).any()) {
    throw ValidationError("meas_noise_vars: entries must be >= 0");
  }
  if (!(path_loss_exp >= 0.0)) throw ValidationError("path_loss_exp: must be >= 0");
  if (!(fc_noise_var > 0.0)) throw ValidationError("fc_noise_var: must be > 0");
  if (!(sum_power > 0.0)) throw ValidationError("sum_power: must be > 0");
  if ((indiv_powers.array() <= 0.0).any()) {
    throw ValidationError("indiv_powers: entries must be > 0");
  }

  NetworkScenario sc;
  sc.n_sensors = n_sensors;
  sc.distances = std::move(distances);
  sc.path_loss_exp = path_loss_exp;
  sc.meas_noise_vars = std::move(meas_noise_vars);
  sc.fc_noise_var = fc_noise_var;
  sc.sum_power = sum_power;
  sc.indiv_powers = std::move(indiv_powers);
  sc.model = model;
  // D = diag{sigma_theta^2 + sigma_{v,i}^2} must be positive definite.
  if ((sc.power_weights().array() <= 0.0).any()) {
    throw ValidationError("meas_noise_vars: power weights must be positive");
  }
  return sc;
}

GainAllocation make_allocation(const NetworkScenario& scenario,
                               Eigen::VectorXcd gains, double achieved_mse) {
  if (gains.size() != scenario.n_sensors) {
    throw ValidationError("gains: length does not match n_sensors");
  }
  GainAllocation alloc;
  alloc.per_sensor_power = gains.cwiseAbs2().cwiseProduct(scenario.power_weights());
  alloc.sum_power = alloc.per_sensor_power.sum();
  alloc.gains = std::move(gains);
  alloc.achieved_mse = achieved_mse;
  return alloc;
}

ChannelRealization sample_channel(const NetworkScenario& scenario, Rng& rng) {
  Eigen::VectorXcd h(scenario.n_sensors);
  for (int i = 0; i < scenario.n_sensors; ++i) {
    h[i] = rng.complex_normal() / std::pow(scenario.distances[i], scenario.path_loss_exp);
  }
  return ChannelRealization{std::move(h)};
}

namespace {

Eigen::VectorXd to_vector(const json& j, const char* field) {
  if (!j.is_array()) throw ValidationError(std::string(field) + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(std::string(field) + ": entries must be numeric");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

NetworkScenario scenario_from_document(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario: top-level JSON object expected");
  static const char* known[] = {"n_sensors",      "distances",   "path_loss_exp",
                                "meas_noise_vars", "fc_noise_var", "sum_power",
                                "indiv_powers",    "alpha",       "sigma_u_sq",
                                "geometry_seed"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || (it.key() == k);
    if (!ok) throw ValidationError("scenario: unknown field '" + it.key() + "'");
  }
  if (!doc.contains("n_sensors") || !doc["n_sensors"].is_number_integer()) {
    throw ValidationError("n_sensors: required integer field");
  }
  const int n = doc["n_sensors"].get<int>();
  if (n < 1) throw ValidationError("n_sensors: must be >= 1");

  GaussMarkovModel model;
  if (doc.contains("alpha")) {
    const json& a = doc["alpha"];
    if (a.is_number()) {
      model.alpha = Complex(a.get<double>(), 0.0);
    } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      model.alpha = Complex(a[0].get<double>(), a[1].get<double>());
    } else {
      throw ValidationError("alpha: expected a number or [re, im]");
    }
  }
  if (doc.contains("sigma_u_sq")) {
    if (!doc["sigma_u_sq"].is_number()) throw ValidationError("sigma_u_sq: must be numeric");
    model.sigma_u_sq = doc["sigma_u_sq"].get<double>();
  }

  const std::uint64_t geometry_seed =
      doc.contains("geometry_seed") ? doc["geometry_seed"].get<std::uint64_t>() : 0;
  Rng geo_rng = Rng::substream(geometry_seed, 0x67656f6dULL);
  const GeometryDistribution dist;  // paper-sec7 bounds

  Eigen::VectorXd distances;
  if (doc.contains("distances")) {
    distances = to_vector(doc["distances"], "distances");
  } else {
    distances.resize(n);
    for (int i = 0; i < n; ++i) distances[i] = geo_rng.uniform(dist.distance_lo, dist.distance_hi);
  }
  Eigen::VectorXd meas;
  if (doc.contains("meas_noise_vars")) {
    meas = to_vector(doc["meas_noise_vars"], "meas_noise_vars");
  } else {
    meas.resize(n);
    for (int i = 0; i < n; ++i) meas[i] = geo_rng.uniform(dist.meas_noise_lo, dist.meas_noise_hi);
  }
  Eigen::VectorXd indiv;
  if (doc.contains("indiv_powers")) indiv = to_vector(doc["indiv_powers"], "indiv_powers");

  const double gamma = doc.value("path_loss_exp", 1.0);
  const double fc = doc.value("fc_noise_var", 0.5);
  const double pt = doc.value("sum_power", 300.0);
  return NetworkScenario::make(n, std::move(distances), gamma, std::move(meas), fc, pt,
                               std::move(indiv), model);
}

}  // namespace

NetworkScenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: JSON parse error: ") + e.what());
  }
  return scenario_from_document(doc);
}

NetworkScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

GeometryDistribution preset_geometry(const std::string& name) {
  if (name == "paper-sec7") return GeometryDistribution{};
  if (name == "paper-fig5") return GeometryDistribution{2.0, 8.0, 0.4, 0.5};
  throw ValidationError("preset: unknown name '" + name + "'");
}

NetworkScenario preset_scenario(const std::string& name, int n_sensors,
                                std::uint64_t geometry_seed) {
  const GeometryDistribution dist = preset_geometry(name);
  Rng rng = Rng::substream(geometry_seed, 0x67656f6dULL);
  Eigen::VectorXd d(n_sensors), sv(n_sensors);
  for (int i = 0; i < n_sensors; ++i) d[i] = rng.uniform(dist.distance_lo, dist.distance_hi);
  for (int i = 0; i < n_sensors; ++i) sv[i] = rng.uniform(dist.meas_noise_lo, dist.meas_noise_hi);
  return NetworkScenario::make(n_sensors, std::move(d), 1.0, std::move(sv), 0.5, 300.0,
                               Eigen::VectorXd(), GaussMarkovModel{});
}

NetworkScenario redraw_geometry(const NetworkScenario& base,
                                const GeometryDistribution& dist, int n_sensors,
                                Rng& rng) {
  Eigen::VectorXd d(n_sensors), sv(n_sensors);
  for (int i = 0; i < n_sensors; ++i) d[i] = rng.uniform(dist.distance_lo, dist.distance_hi);
  for (int i = 0; i < n_sensors; ++i) sv[i] = rng.uniform(dist.meas_noise_lo, dist.meas_noise_hi);
  return NetworkScenario::make(n_sensors, std::move(d), base.path_loss_exp, std::move(sv),
                               base.fc_noise_var, base.sum_power, Eigen::VectorXd(),
                               base.model);
}

}  // namespace aftrack
