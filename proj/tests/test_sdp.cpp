#include <doctest.h>

#include "aftrack/sdp.hpp"
#include "support/oracles.hpp"

using namespace aftrack;
using namespace aftrack::sdp;
using Complex = std::complex<double>;

namespace {

NetworkScenario random_scenario(int n, Rng& rng, double p_t = 10.0) {
  Eigen::VectorXd d(n), sv(n);
  for (int i = 0; i < n; ++i) d[i] = rng.uniform(1.0, 4.0);
  for (int i = 0; i < n; ++i) sv[i] = rng.uniform(0.05, 0.5);
  return NetworkScenario::make(n, std::move(d), 1.0, std::move(sv), 0.5, p_t,
                               Eigen::VectorXd(), GaussMarkovModel{});
}

}  // namespace

TEST_CASE("top-eigenvalue SDP: maximize tr(X diag(1,0)) with unit trace") {
  Eigen::VectorXd c(2);
  c << 1.0, 0.0;
  SdpProblem p{2,
               Sense::maximize,
               linalg::HermitianMatrix::diagonal(c),
               {{linalg::HermitianMatrix::identity(2), 1.0}},
               {}};
  const SdpSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.x.entries()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(sol.x.entries()(1, 1)) < 1e-6);
}

TEST_CASE("minimize trace under a >= constraint folded as <=") {
  Eigen::VectorXd two(2);
  two << 1.0, 1.0;
  SdpProblem p{2,
               Sense::minimize,
               linalg::HermitianMatrix::identity(2),
               {},
               {{linalg::HermitianMatrix(-Eigen::MatrixXcd(two.cast<Complex>().asDiagonal())),
                 -2.0}}};
  const SdpSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.duals[0] >= -1e-10);
}

TEST_CASE("individual-power instance matches an exhaustive rank-one grid from above") {
  Rng rng(17);
  const NetworkScenario sc = random_scenario(3, rng);
  const ChannelRealization ch = sample_channel(sc, rng);
  SdpProblem problem = testing::individual_power_sdp(sc, ch);
  SolveOptions options;
  options.initial_x = testing::individual_power_start(sc, ch);
  const SdpSolution sol = solve(problem, options);
  REQUIRE(sol.status == SolveStatus::optimal);

  const Eigen::VectorXd caps =
      (sc.indiv_powers.array() / sc.power_weights().array()).sqrt();
  const testing::GridResult grid = testing::grid_maximize(
      caps, 24, 24,
      [&](const Eigen::VectorXcd& g) { return testing::qcrq_objective(sc, ch, g); },
      99);
  // The relaxation upper-bounds every rank-one point and is tight to 0.5%.
  CHECK(sol.objective_value >= grid.value * (1.0 - 1e-9));
  CHECK(sol.objective_value == doctest::Approx(grid.value).epsilon(5e-3));
}

TEST_CASE("certificate report on an optimal solution and a perturbed one") {
  Rng rng(23);
  const NetworkScenario sc = random_scenario(4, rng);
  const ChannelRealization ch = sample_channel(sc, rng);
  SdpProblem problem = testing::individual_power_sdp(sc, ch);
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.status == SolveStatus::optimal);

  const CertificateReport report = check_certificate(problem, sol);
  CHECK(report.max_primal_residual <= 1e-7);
  CHECK(report.min_x_eigenvalue >= -1e-8);
  CHECK(report.dual_slack_min_eigenvalue >= -1e-6 * (1.0 + report.dual_slack.norm()));
  CHECK(report.complementary_slackness <=
        1e-6 * (1.0 + std::abs(sol.objective_value)));
  CHECK(report.duality_gap <= 1e-7 * (1.0 + std::abs(sol.objective_value)));

  // Theorem-style structure: the dual slack's leading N x N block has rank
  // >= N - 1 (eigenvalues above 1e-6 * ||G||).
  const int n = sc.n_sensors;
  const linalg::EigenDecomposition ge = linalg::herm_eig(
      linalg::HermitianMatrix(report.dual_slack.topLeftCorner(n, n).eval()));
  const double thresh = 1e-6 * report.dual_slack.norm();
  int rank = 0;
  for (int i = 0; i < n; ++i) rank += ge.values[i] > thresh ? 1 : 0;
  CHECK(rank >= n - 1);

  // Hand perturbation: adding 1e-3 I to X must trip complementary slackness.
  SdpSolution bumped = sol;
  bumped.x = linalg::HermitianMatrix(
      sol.x.entries() + 1e-3 * Eigen::MatrixXcd::Identity(n + 1, n + 1));
  const CertificateReport bad = check_certificate(problem, bumped);
  CHECK(bad.complementary_slackness > 10.0 * report.complementary_slackness);
  CHECK(bad.complementary_slackness > 1e-5);
}

TEST_CASE("weak duality holds on feasible iterates and solving is deterministic") {
  Rng rng(31);
  const NetworkScenario sc = random_scenario(5, rng);
  const ChannelRealization ch = sample_channel(sc, rng);
  SdpProblem problem = testing::individual_power_sdp(sc, ch);
  SolveOptions options;
  options.initial_x = testing::individual_power_start(sc, ch);
  const SdpSolution a = solve(problem, options);
  const SdpSolution b = solve(problem, options);
  REQUIRE(a.status == SolveStatus::optimal);
  CHECK(std::abs(a.objective_value - b.objective_value) <= 1e-9);

  int exposed = 0;
  for (const IterateStat& it : a.history) {
    if (it.primal_residual <= 1e-9 && it.dual_residual <= 1e-9) {
      ++exposed;
      CHECK(it.primal_objective <=
            it.dual_objective + 1e-9 * (1.0 + std::abs(it.primal_objective) +
                                        std::abs(it.dual_objective)));
    }
  }
  CHECK(exposed >= 1);
}

TEST_CASE("complex-to-real embedding carries the factor-2 trace bookkeeping") {
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 5.0));
    Eigen::MatrixXcd x(n, n), a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        x(i, j) = rng.complex_normal();
        a(i, j) = rng.complex_normal();
      }
    }
    x = 0.5 * (x + x.adjoint().eval());
    a = 0.5 * (a + a.adjoint().eval());
    const double complex_trace = (x * a).trace().real();
    const double real_trace = (detail::embed(x) * detail::embed(a)).trace();
    CHECK(real_trace == doctest::Approx(2.0 * complex_trace).epsilon(1e-12));
    CHECK((detail::unembed(detail::embed(a)) - a).norm() <= 1e-14 * (1.0 + a.norm()));
  }
}

TEST_CASE("trivially infeasible problem yields an infeasibility certificate") {
  SdpProblem p{2,
               Sense::minimize,
               linalg::HermitianMatrix::identity(2),
               {{linalg::HermitianMatrix::identity(2), -1.0}},
               {}};
  const SdpSolution sol = solve(p);
  CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("problem dump is parseable json with both parts") {
  Rng rng(43);
  const NetworkScenario sc = random_scenario(2, rng);
  const ChannelRealization ch = sample_channel(sc, rng);
  const std::string dumped = dump_json(testing::individual_power_sdp(sc, ch));
  CHECK(dumped.find("\"sense\": \"max\"") != std::string::npos);
  CHECK(dumped.find("\"re\"") != std::string::npos);
  CHECK(dumped.find("\"im\"") != std::string::npos);
}
