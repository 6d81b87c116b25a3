#include "aftrack/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace aftrack::linalg {

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw ValidationError("HermitianMatrix: square matrix of dim >= 1 required");
  }
  if (!entries.allFinite()) throw ValidationError("HermitianMatrix: entries must be finite");
  const double scale = entries.norm();
  const double asym = (entries - entries.adjoint()).norm();
  if (asym > 1e-12 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "HermitianMatrix: asymmetry " << asym << " exceeds 1e-12 relative tolerance";
    throw ValidationError(os.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianMatrix HermitianMatrix::diagonal(const Eigen::VectorXd& d) {
  Eigen::MatrixXcd m = d.cast<std::complex<double>>().asDiagonal();
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

namespace {

// Largest-magnitude component made real and positive; ties broken by the
// first index, so repeated calls agree bit for bit.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::norm(v[i]);
    if (m > best * (1.0 + 1e-14)) {
      best = m;
      imax = i;
    }
  }
  const std::complex<double> pivot = v[imax];
  const double mag = std::abs(pivot);
  if (mag > 0.0) v *= std::conj(pivot) / mag;
}

}  // namespace

EigenDecomposition herm_eig(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.entries());
  if (es.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver failed to converge (dim=" +
                         std::to_string(a.dim()) + ", norm=" + std::to_string(a.entries().norm()) + ")");
  }
  const int n = a.dim();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (int k = 0; k < n; ++k) {
    out.values[k] = es.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    fix_phase(out.vectors.col(k));
  }
  return out;
}

Eigen::VectorXcd solve_hpd(const HermitianMatrix& a, const Eigen::VectorXcd& b) {
  if (b.size() != a.dim()) throw ValidationError("solve_hpd: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXcd> llt(a.entries());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_hpd: matrix is not positive definite (nonpositive pivot)");
  }
  return llt.solve(b);
}

RayleighMax rayleigh_max(const HermitianMatrix& numerator,
                         const HermitianMatrix& denominator) {
  if (numerator.dim() != denominator.dim()) {
    throw ValidationError("rayleigh_max: dimension mismatch");
  }
  // Whiten with the true inverse square root of the denominator so the
  // result matches the D^{-1/2} N D^{-1/2} contract exactly.
  const EigenDecomposition d = herm_eig(denominator);
  if (d.values.minCoeff() <= 0.0) {
    throw NumericalError("rayleigh_max: denominator is not positive definite");
  }
  const Eigen::VectorXd inv_sqrt = d.values.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd d_inv_half =
      d.vectors * inv_sqrt.asDiagonal() * d.vectors.adjoint();
  const HermitianMatrix whitened(d_inv_half * numerator.entries() * d_inv_half);
  const EigenDecomposition w = herm_eig(whitened);
  Eigen::VectorXcd x = d_inv_half * w.vectors.col(0);
  x.normalize();
  fix_phase(x);
  return RayleighMax{w.values[0], std::move(x)};
}

}  // namespace aftrack::linalg
