#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aftrack/model.hpp"

using namespace aftrack;

namespace {

NetworkScenario unit_scenario(int n, double gamma, Eigen::VectorXd distances) {
  return NetworkScenario::make(n, std::move(distances), gamma,
                               Eigen::VectorXd::Constant(n, 0.1), 0.5, 300.0,
                               Eigen::VectorXd(), GaussMarkovModel{});
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("gauss-markov stationary variance") {
  GaussMarkovModel m{Complex{0.9, 0.0}, 0.19};
  CHECK(m.sigma_theta_sq() == doctest::Approx(1.0).epsilon(1e-12));
  // Exactly as computed from the fields.
  CHECK(m.sigma_theta_sq() == m.sigma_u_sq / (1.0 - std::norm(m.alpha)));

  GaussMarkovModel complex_alpha{Complex{0.6, 0.6}, 0.28};
  complex_alpha.validate();
  CHECK(complex_alpha.sigma_theta_sq() == doctest::Approx(1.0));

  GaussMarkovModel bad{Complex{1.0, 0.0}, 0.1};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("channel sampling is reproducible and unit variance without path loss") {
  const int n = 4;
  NetworkScenario sc = unit_scenario(n, 0.0, Eigen::VectorXd::Constant(n, 1.0));

  Rng a(42), b(42);
  const ChannelRealization ha = sample_channel(sc, a);
  const ChannelRealization hb = sample_channel(sc, b);
  for (int i = 0; i < n; ++i) {
    CHECK(ha.gains[i].real() == hb.gains[i].real());
    CHECK(ha.gains[i].imag() == hb.gains[i].imag());
  }

  const int draws = 100000;
  Rng rng(7);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd re_acc = Eigen::VectorXd::Zero(n), im_acc = Eigen::VectorXd::Zero(n);
  for (int d = 0; d < draws; ++d) {
    const ChannelRealization h = sample_channel(sc, rng);
    acc += h.gains.cwiseAbs2();
    re_acc += h.gains.real().cwiseAbs2();
    im_acc += h.gains.imag().cwiseAbs2();
  }
  for (int i = 0; i < n; ++i) {
    CHECK(acc[i] / draws == doctest::Approx(1.0).epsilon(0.02));
    // Unit total variance split evenly between the parts.
    CHECK(re_acc[i] / draws == doctest::Approx(0.5).epsilon(0.03));
    CHECK(im_acc[i] / draws == doctest::Approx(0.5).epsilon(0.03));
  }
}

TEST_CASE("path loss scales channel variance by d^-2gamma") {
  Eigen::VectorXd d(2);
  d << 2.0, 5.0;
  NetworkScenario sc = unit_scenario(2, 1.0, d);
  const int draws = 100000;
  Rng rng(11);
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int k = 0; k < draws; ++k) acc += sample_channel(sc, rng).gains.cwiseAbs2();
  CHECK(acc[0] / draws == doctest::Approx(0.25).epsilon(0.02));
  // 3-sigma statistical budget: |h|^2 is Exp(mean m) with sd m, so the mean
  // of 1e5 draws has sd m/sqrt(1e5).
  const double m = 1.0 / 25.0;
  CHECK(std::abs(acc[1] / draws - m) < 3.0 * m / std::sqrt(double(draws)));
}

TEST_CASE("gain allocation power accounting is internally consistent") {
  NetworkScenario sc = preset_scenario("paper-sec7", 6, 3);
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXcd g(6);
    for (int i = 0; i < 6; ++i) g[i] = 3.0 * rng.complex_normal();
    const GainAllocation alloc = make_allocation(sc, g, 0.3);
    const Eigen::VectorXd w = sc.power_weights();
    for (int i = 0; i < 6; ++i) {
      CHECK(alloc.per_sensor_power[i] ==
            doctest::Approx(std::norm(g[i]) * w[i]).epsilon(1e-14));
    }
    CHECK(alloc.sum_power == doctest::Approx(alloc.per_sensor_power.sum()).epsilon(1e-14));
  }
}

TEST_CASE("paper-sec7 preset carries the documented defaults") {
  NetworkScenario sc = preset_scenario("paper-sec7", 10, 0);
  CHECK(sc.n_sensors == 10);
  CHECK(sc.path_loss_exp == 1.0);
  CHECK(sc.fc_noise_var == 0.5);
  CHECK(sc.sum_power == 300.0);
  CHECK(sc.model.sigma_theta_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((sc.distances.array() >= 2.0).all());
  CHECK((sc.distances.array() <= 8.0).all());
  CHECK((sc.meas_noise_vars.array() >= 0.0).all());
  CHECK((sc.meas_noise_vars.array() <= 0.5).all());
  // P_{T,i} defaults to P_T / N.
  CHECK((sc.indiv_powers.array() == 30.0).all());

  NetworkScenario fig5 = preset_scenario("paper-fig5", 30, 0);
  CHECK((fig5.meas_noise_vars.array() >= 0.4).all());
  CHECK((fig5.meas_noise_vars.array() <= 0.5).all());

  CHECK_THROWS_AS(preset_scenario("nope", 4, 0), ValidationError);
}

TEST_CASE("load_scenario fills defaults for a minimal file") {
  const auto path = write_temp("aftrack_min.json", R"({"n_sensors": 10})");
  NetworkScenario sc = load_scenario(path);
  CHECK(sc.n_sensors == 10);
  CHECK(sc.path_loss_exp == 1.0);
  CHECK(sc.fc_noise_var == 0.5);
  CHECK(sc.sum_power == 300.0);
  CHECK(sc.indiv_powers.sum() == doctest::Approx(300.0));
  CHECK(sc.distances.size() == 10);
  CHECK((sc.distances.array() >= 2.0).all());
  CHECK((sc.distances.array() <= 8.0).all());
  std::filesystem::remove(path);
}

TEST_CASE("load_scenario rejects invalid documents with field diagnostics") {
  const auto alpha1 = write_temp("aftrack_alpha.json",
                                 R"({"n_sensors": 2, "alpha": 1.0})");
  CHECK_THROWS_WITH_AS(load_scenario(alpha1),
                       doctest::Contains("alpha"), ValidationError);
  std::filesystem::remove(alpha1);

  const auto shape = write_temp("aftrack_shape.json",
                                R"({"n_sensors": 3, "distances": [1.0, 2.0]})");
  CHECK_THROWS_WITH_AS(load_scenario(shape),
                       doctest::Contains("distances"), ValidationError);
  std::filesystem::remove(shape);

  const auto parse = write_temp("aftrack_parse.json", "{ not json");
  CHECK_THROWS_WITH_AS(load_scenario(parse),
                       doctest::Contains("parse"), ValidationError);
  std::filesystem::remove(parse);

  const auto unknown = write_temp("aftrack_unknown.json",
                                  R"({"n_sensors": 2, "sigmaw": 1.0})");
  CHECK_THROWS_AS(load_scenario(unknown), ValidationError);
  std::filesystem::remove(unknown);

  CHECK_THROWS_AS(load_scenario("/nonexistent/aftrack.json"), ValidationError);
}

TEST_CASE("scenario validation names the offending field") {
  CHECK_THROWS_WITH_AS(
      NetworkScenario::make(2, Eigen::Vector2d(1.0, -1.0), 1.0,
                            Eigen::Vector2d(0.1, 0.1), 0.5, 10.0, Eigen::VectorXd(),
                            GaussMarkovModel{}),
      doctest::Contains("distances"), ValidationError);
  CHECK_THROWS_WITH_AS(
      NetworkScenario::make(2, Eigen::Vector2d(1.0, 1.0), 1.0,
                            Eigen::Vector2d(0.1, 0.1), 0.0, 10.0, Eigen::VectorXd(),
                            GaussMarkovModel{}),
      doctest::Contains("fc_noise_var"), ValidationError);
}
