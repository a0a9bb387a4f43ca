#include <catch_amalgamated.hpp>
#include <random>

#include "support.hpp"

using namespace sampcap;
using Catch::Approx;

TEST_CASE("identity and diagonal eigenvalues", "[linalg]") {
  const EigenDecomposition id = hermitian_eig(Eigen::MatrixXcd::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == Approx(1.0));

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 4.0;
  const EigenDecomposition e = hermitian_eig(D);
  CHECK(e.values(0) == Approx(4.0));
  CHECK(e.values(1) == Approx(1.0));
  CHECK(std::abs(e.vectors(1, 0)) == Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == Approx(1.0));
}

TEST_CASE("random Hermitian matrices are reconstructed from their eigenpairs", "[linalg]") {
  std::mt19937_64 rng(1);
  for (Eigen::Index n : {1, 2, 5, 9, 16, 40}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd A = support::random_hermitian(n, rng);
      const EigenDecomposition e = hermitian_eig(A);
      const Eigen::MatrixXcd R = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
      CHECK((R - A).norm() <= 1e-9 * A.norm());
      CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-9);
      for (Eigen::Index i = 0; i < n; ++i)
        CHECK((A * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-9 * A.norm());
      for (Eigen::Index i = 1; i < n; ++i) CHECK(e.values(i - 1) >= e.values(i));

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(A, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd rv = ref.eigenvalues().reverse();
      CHECK((hermitian_eigenvalues(A) - rv).norm() <= 1e-9 * A.norm());
    }
  }
}

TEST_CASE("real symmetric input takes the same answers", "[linalg]") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  Eigen::MatrixXd B(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j < 12; ++j) B(i, j) = N(rng);
  const Eigen::MatrixXd A = B + B.transpose();
  const EigenDecomposition e = hermitian_eig(A.cast<cplx>());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(A);
  CHECK((e.values - ref.eigenvalues().reverse()).norm() <= 1e-9 * A.norm());
  const Eigen::MatrixXcd R = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  CHECK((R - A.cast<cplx>()).norm() <= 1e-9 * A.norm());
}

TEST_CASE("non-Hermitian input is rejected", "[linalg]") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2, 2);
  A(0, 1) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(hermitian_eig(A), NotHermitian);
  CHECK_THROWS_AS(hermitian_eig(Eigen::MatrixXcd::Zero(2, 3)), NotHermitian);
}

TEST_CASE("inverse square roots", "[linalg]") {
  const Eigen::MatrixXcd four = 4.0 * Eigen::MatrixXcd::Identity(3, 3);
  CHECK((inv_sqrt_psd(four) - 0.5 * Eigen::MatrixXcd::Identity(3, 3)).norm() <= 1e-12);

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 4.0;
  D(1, 1) = 1.0;
  const Eigen::MatrixXcd B = inv_sqrt_psd(D);
  CHECK(std::abs(B(0, 0) - 0.5) <= 1e-12);
  CHECK(std::abs(B(1, 1) - 1.0) <= 1e-12);
  CHECK(std::abs(B(0, 1)) <= 1e-12);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd G = support::random_hermitian(6, rng);
    const Eigen::MatrixXcd A = G * G.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(6, 6);
    const Eigen::MatrixXcd W = inv_sqrt_psd(A);
    CHECK((W * A * W - Eigen::MatrixXcd::Identity(6, 6)).norm() <= 1e-8);
  }
}

TEST_CASE("selection rows have identity Gram matrix", "[linalg]") {
  // Two branches each passing one of three aliases, unit noise.
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(2, 3);
  F(0, 0) = 1.0;
  F(1, 2) = 1.0;
  const Eigen::MatrixXcd gram = F * F.adjoint();
  CHECK((inv_sqrt_psd(gram) - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("singular Gram matrices", "[linalg]") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Ones(2, 2);
  CHECK_THROWS_AS(inv_sqrt_psd(A), SingularWhitening);
  const Eigen::MatrixXcd P = pinv_psd(A);
  CHECK((A * P * A - A).norm() <= 1e-12);
  CHECK((P * A * P - P).norm() <= 1e-12);
  CHECK(pinv_psd(Eigen::MatrixXcd::Zero(3, 3)).norm() == 0.0);
}
