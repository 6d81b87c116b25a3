#include <doctest.h>

#include "aftrack/linalg.hpp"
#include "aftrack/rng.hpp"

using namespace aftrack;
using namespace aftrack::linalg;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_hermitian(int n, Rng& rng, double scale = 1.0) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = scale * rng.complex_normal();
  }
  return 0.5 * (m + m.adjoint().eval());
}

Eigen::MatrixXcd random_hpd(int n, Rng& rng) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  }
  return m * m.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(n, n);
}

Eigen::VectorXcd random_cvec(int n, Rng& rng) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("hermitian construction symmetrizes and rejects asymmetry") {
  Rng rng(1);
  Eigen::MatrixXcd h = random_hermitian(4, rng);
  HermitianMatrix m(h);
  CHECK((m.entries() - m.entries().adjoint()).norm() == 0.0);

  Eigen::MatrixXcd bad = h;
  bad(0, 1) += Complex{0.1, 0.0};
  CHECK_THROWS_AS(HermitianMatrix{bad}, ValidationError);
}

TEST_CASE("herm_eig on identity and diagonal") {
  const EigenDecomposition id = herm_eig(HermitianMatrix::identity(3));
  CHECK(id.values[0] == doctest::Approx(1.0));
  CHECK(id.values[1] == doctest::Approx(1.0));
  CHECK(id.values[2] == doctest::Approx(1.0));

  Eigen::VectorXd d(2);
  d << 5.0, -2.0;
  const EigenDecomposition de = herm_eig(HermitianMatrix::diagonal(d));
  CHECK(de.values[0] == doctest::Approx(5.0));
  CHECK(de.values[1] == doctest::Approx(-2.0));
  CHECK(std::abs(de.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(de.vectors(1, 1)) == doctest::Approx(1.0));
  // Phase convention: pivot entries are real and positive.
  CHECK(de.vectors(0, 0).real() == doctest::Approx(1.0));
  CHECK(de.vectors(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("herm_eig reconstructs and is orthonormal") {
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXcd a = random_hermitian(6, rng, 2.0);
    const EigenDecomposition e = herm_eig(HermitianMatrix(a));
    const Eigen::MatrixXcd rebuilt =
        e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    CHECK((rebuilt - a).norm() / a.norm() <= 1e-10);
    CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(6, 6)).norm() <=
          1e-10);
    for (int k = 0; k < 6; ++k) {
      CHECK((a * e.vectors.col(k) - e.values[k] * e.vectors.col(k)).norm() <=
            1e-10 * a.norm());
    }
    for (int k = 1; k < 6; ++k) CHECK(e.values[k - 1] >= e.values[k]);
  }
}

TEST_CASE("herm_eig values invariant under unitary conjugation") {
  Rng rng(3);
  const Eigen::MatrixXcd a = random_hermitian(5, rng);
  // Unitary factor from the QR of a random matrix.
  Eigen::MatrixXcd g(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) g(i, j) = rng.complex_normal();
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
  const EigenDecomposition e1 = herm_eig(HermitianMatrix(a));
  const EigenDecomposition e2 = herm_eig(HermitianMatrix(q * a * q.adjoint()));
  CHECK((e1.values - e2.values).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + a.norm()));
}

TEST_CASE("solve_hpd basics and residual oracle") {
  Rng rng(4);
  const Eigen::VectorXcd b3 = random_cvec(3, rng);
  const Eigen::VectorXcd x_id = solve_hpd(HermitianMatrix::identity(3), b3);
  CHECK((x_id - b3).norm() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::VectorXd d(2);
  d << 2.0, 4.0;
  Eigen::VectorXcd b(2);
  b << Complex{2.0, 0.0}, Complex{8.0, 0.0};
  const Eigen::VectorXcd x = solve_hpd(HermitianMatrix::diagonal(d), b);
  CHECK(x[0].real() == doctest::Approx(1.0));
  CHECK(x[1].real() == doctest::Approx(2.0));

  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXcd a = random_hpd(8, rng);
    const Eigen::VectorXcd rhs = random_cvec(8, rng);
    const Eigen::VectorXcd sol = solve_hpd(HermitianMatrix(a), rhs);
    CHECK((a * sol - rhs).norm() <= 1e-10 * rhs.norm() * a.norm());
  }

  Eigen::VectorXd neg(2);
  neg << 1.0, -1.0;
  CHECK_THROWS_AS(solve_hpd(HermitianMatrix::diagonal(neg), b), NumericalError);
}

TEST_CASE("rayleigh_max trivial cases") {
  Rng rng(5);
  const Eigen::MatrixXcd d = random_hpd(4, rng);
  const RayleighMax same = rayleigh_max(HermitianMatrix(d), HermitianMatrix(d));
  CHECK(same.value == doctest::Approx(1.0).epsilon(1e-10));

  const Eigen::VectorXcd h = random_cvec(4, rng);
  const RayleighMax rank1 =
      rayleigh_max(HermitianMatrix(h * h.adjoint()), HermitianMatrix::identity(4));
  CHECK(rank1.value == doctest::Approx(h.squaredNorm()).epsilon(1e-12));
  // Attaining vector is proportional to h.
  const double cos_sim = std::abs(rank1.vector.dot(h)) / h.norm();
  CHECK(cos_sim == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rayleigh_max against a random-direction oracle") {
  Rng rng(6);
  const Eigen::MatrixXcd num = random_hermitian(5, rng);
  const Eigen::MatrixXcd den = random_hpd(5, rng);
  const RayleighMax top = rayleigh_max(HermitianMatrix(num), HermitianMatrix(den));

  auto ratio = [&](const Eigen::VectorXcd& x) {
    return (x.adjoint() * num * x).value().real() /
           (x.adjoint() * den * x).value().real();
  };
  // Random sampling with shrinking local refinement around the incumbent.
  double best = -1e300;
  Eigen::VectorXcd best_x;
  for (int k = 0; k < 200000; ++k) {
    const Eigen::VectorXcd x = random_cvec(5, rng);
    const double r = ratio(x);
    if (r > best) {
      best = r;
      best_x = x.normalized();
    }
  }
  double radius = 0.5;
  while (radius > 1e-7) {
    bool improved = false;
    for (int k = 0; k < 3000; ++k) {
      const Eigen::VectorXcd x = (best_x + radius * random_cvec(5, rng)).normalized();
      const double r = ratio(x);
      if (r > best) {
        best = r;
        best_x = x;
        improved = true;
      }
    }
    if (!improved) radius *= 0.5;
  }
  CHECK(top.value >= best - 1e-12 * std::abs(best));   // sampling lower-bounds the max
  CHECK(top.value == doctest::Approx(best).epsilon(1e-3));

  // Invariance: joint positive rescaling; linear scaling in the numerator.
  const RayleighMax scaled =
      rayleigh_max(HermitianMatrix(3.0 * num), HermitianMatrix(3.0 * den));
  CHECK(scaled.value == doctest::Approx(top.value).epsilon(1e-12));
  const RayleighMax num_scaled =
      rayleigh_max(HermitianMatrix(2.5 * num), HermitianMatrix(den));
  CHECK(num_scaled.value == doctest::Approx(2.5 * top.value).epsilon(1e-12));
}
