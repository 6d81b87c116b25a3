#pragma once

#include <Eigen/Dense>

#include "aftrack/errors.hpp"

namespace aftrack::linalg {

/// Dense Hermitian matrix. Symmetrized on ingest; construction rejects
/// inputs whose asymmetry exceeds 1e-12 relative Frobenius norm.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd entries);

  static HermitianMatrix diagonal(const Eigen::VectorXd& d);
  static HermitianMatrix identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

/// Full spectrum, values sorted descending, columns unit-norm and mutually
/// orthogonal. Eigenvector phase is fixed by making the largest-magnitude
/// component of each column real and positive.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

EigenDecomposition herm_eig(const HermitianMatrix& a);

/// Solves A x = b for Hermitian positive definite A via Cholesky.
/// Throws NumericalError when a nonpositive pivot is encountered.
Eigen::VectorXcd solve_hpd(const HermitianMatrix& a, const Eigen::VectorXcd& b);

struct RayleighMax {
  double value;
  Eigen::VectorXcd vector;  // unit-norm attaining vector
};

/// max over x != 0 of (x^H N x) / (x^H D x) for Hermitian N and positive
/// definite D; equals the top eigenvalue of D^{-1/2} N D^{-1/2}, with the
/// attaining vector back-transformed and normalized.
RayleighMax rayleigh_max(const HermitianMatrix& numerator,
                         const HermitianMatrix& denominator);

}  // namespace aftrack::linalg
