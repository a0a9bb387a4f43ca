#pragma once

#include <Eigen/Dense>

namespace sampcap {

struct EigenDecomposition {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // columns, orthonormal
  int sweeps = 0;
};

// Cyclic Jacobi for Hermitian matrices. Throws NotHermitian when
// ||A - A*||_F exceeds 1e-12 ||A||_F.
EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& A);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& A);

// A^{-1/2} for Hermitian positive definite A. Throws SingularWhitening when
// the smallest eigenvalue is below kEpsInv times the largest.
Eigen::MatrixXcd inv_sqrt_psd(const Eigen::MatrixXcd& A);

// Moore-Penrose inverse of a Hermitian PSD matrix, discarding eigenvalues
// below kEpsInv times the largest.
Eigen::MatrixXcd pinv_psd(const Eigen::MatrixXcd& A);

}  // namespace sampcap
