#include "sampcap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "sampcap/errors.hpp"
#include "sampcap/spectra.hpp"

namespace sampcap {

namespace {

inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline double phase_of(double x) { return x < 0.0 ? -1.0 : 1.0; }
inline cplx phase_of(const cplx& x) { return x / std::abs(x); }

// Rotates A in place; V accumulates the rotations when non-null.
template <typename Scalar>
int jacobi_sweeps(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>* V, double norm) {
  const Eigen::Index n = A.rows();
  const double target = 1e-12 * norm;
  int sweeps = 0;
  for (int sweep = 0; sweep < 100 && n > 1; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(A(p, q));
    if (std::sqrt(2.0 * off) <= target) break;
    sweeps = sweep + 1;
    bool rotated = false;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = A(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-15 * norm) continue;
        rotated = true;
        const double app = std::real(A(p, p));
        const double aqq = std::real(A(q, q));
        const double theta = (aqq - app) / (2.0 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Scalar e = phase_of(apq);
        const Scalar jpq = s * e;
        const Scalar jqp = -s * conj_of(e);

        // Columns p, q of A J; rows follow by Hermitian symmetry.
        Scalar* colp = A.col(p).data();
        Scalar* colq = A.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = colp[k];
          const Scalar akq = colq[k];
          colp[k] = akp * c + akq * jqp;
          colq[k] = akp * jpq + akq * c;
          A(p, k) = conj_of(colp[k]);
          A(q, k) = conj_of(colq[k]);
        }
        A(p, p) = app - t * g;
        A(q, q) = aqq + t * g;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        if (V) {
          Scalar* vp = V->col(p).data();
          Scalar* vq = V->col(q).data();
          for (Eigen::Index k = 0; k < n; ++k) {
            const Scalar a = vp[k];
            const Scalar b = vq[k];
            vp[k] = a * c + b * jqp;
            vq[k] = a * jpq + b * c;
          }
        }
      }
    }
    if (!rotated) break;
  }
  return sweeps;
}

template <typename Scalar>
EigenDecomposition finish(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                          Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>* V, int sweeps) {
  const Eigen::Index n = A.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return std::real(A(x, x)) > std::real(A(y, y));
  });
  EigenDecomposition out;
  out.sweeps = sweeps;
  out.values.resize(n);
  if (V) out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = std::real(A(order[i], order[i]));
    if (V) out.vectors.col(i) = V->col(order[i]).template cast<cplx>();
  }
  return out;
}

EigenDecomposition jacobi(const Eigen::MatrixXcd& input, bool want_vectors) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw NotHermitian("matrix is not square");
  const double norm = input.norm();
  if (!std::isfinite(norm)) throw NotHermitian("matrix has non-finite entries");
  if ((input - input.adjoint()).norm() > 1e-12 * norm) throw NotHermitian("matrix is not Hermitian");

  // Imaginary parts at round-off level take the real path.
  if (n == 0 || input.imag().cwiseAbs().maxCoeff() <= 1e-15 * norm) {
    Eigen::MatrixXd A = 0.5 * (input.real() + input.real().transpose());
    Eigen::MatrixXd V;
    if (want_vectors) V = Eigen::MatrixXd::Identity(n, n);
    const int sweeps = jacobi_sweeps<double>(A, want_vectors ? &V : nullptr, norm);
    return finish<double>(A, want_vectors ? &V : nullptr, sweeps);
  }
  Eigen::MatrixXcd A = 0.5 * (input + input.adjoint());
  Eigen::MatrixXcd V;
  if (want_vectors) V = Eigen::MatrixXcd::Identity(n, n);
  const int sweeps = jacobi_sweeps<cplx>(A, want_vectors ? &V : nullptr, norm);
  return finish<cplx>(A, want_vectors ? &V : nullptr, sweeps);
}

}  // namespace

EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& A) { return jacobi(A, true); }

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& A) {
  return jacobi(A, false).values;
}

Eigen::MatrixXcd inv_sqrt_psd(const Eigen::MatrixXcd& A) {
  const EigenDecomposition ed = hermitian_eig(A);
  const Eigen::Index n = ed.values.size();
  if (n == 0) return A;
  const double top = ed.values(0);
  if (!(top > 0.0) || ed.values(n - 1) <= kEpsInv * top)
    throw SingularWhitening("Gram matrix is singular or indefinite");
  const Eigen::VectorXd d = ed.values.cwiseSqrt().cwiseInverse();
  return ed.vectors * d.asDiagonal() * ed.vectors.adjoint();
}

Eigen::MatrixXcd pinv_psd(const Eigen::MatrixXcd& A) {
  const EigenDecomposition ed = hermitian_eig(A);
  const Eigen::Index n = ed.values.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  if (n > 0 && ed.values(0) > 0.0) {
    const double cut = kEpsInv * ed.values(0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (ed.values(i) > cut) d(i) = 1.0 / ed.values(i);
  }
  return ed.vectors * d.asDiagonal() * ed.vectors.adjoint();
}

}  // namespace sampcap
