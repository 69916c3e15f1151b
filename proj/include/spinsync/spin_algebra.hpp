#pragma once

#include "spinsync/types.hpp"

#include <cmath>
#include <optional>

namespace spinsync {

template <typename Real = double>
struct SpinOperators {
  ComplexMatrixT<Real> sz;
  ComplexMatrixT<Real> sp;
  ComplexMatrixT<Real> sm;
};

/// Spin-1 matrices in the (m=+1, 0, -1) basis.
template <typename Real = double>
SpinOperators<Real> spin1_operators() {
  using C = std::complex<Real>;
  SpinOperators<Real> ops;
  ops.sz = ComplexMatrixT<Real>::Zero(3, 3);
  ops.sz(0, 0) = C(1);
  ops.sz(2, 2) = C(-1);
  ops.sp = ComplexMatrixT<Real>::Zero(3, 3);
  ops.sp(0, 1) = C(std::sqrt(Real(2)));
  ops.sp(1, 2) = C(std::sqrt(Real(2)));
  ops.sm = ops.sp.adjoint();
  return ops;
}

template <typename Derived>
Eigen::Index require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square");
  }
  return m.rows();
}

template <typename DerivedA, typename DerivedB>
ComplexMatrixT<typename DerivedA::RealScalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                                   const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrixT<typename DerivedA::RealScalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// op (x) I for site A, I (x) op for site B.
template <typename Derived>
ComplexMatrixT<typename Derived::RealScalar> embed(const Eigen::MatrixBase<Derived>& op, Site site) {
  using M = ComplexMatrixT<typename Derived::RealScalar>;
  if (op.rows() != kSpinDim || op.cols() != kSpinDim) {
    throw DimensionError("embed: operator must be 3x3");
  }
  const M id = M::Identity(kSpinDim, kSpinDim);
  return site == Site::A ? kron(op, id) : kron(id, op);
}

/// D[O]rho = O rho O^dag - {O^dag O, rho}/2
template <typename DerivedO, typename DerivedR>
ComplexMatrixT<typename DerivedO::RealScalar> dissipator(const Eigen::MatrixBase<DerivedO>& o,
                                                         const Eigen::MatrixBase<DerivedR>& rho) {
  const auto n = require_square(o, "dissipator");
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionError("dissipator: operator and state dimensions differ");
  }
  using M = ComplexMatrixT<typename DerivedO::RealScalar>;
  const M od = o.adjoint();
  const M odo = od * o;
  return o * rho * od - typename M::Scalar(0.5) * (odo * rho + rho * odo);
}

/// Reduced state of the kept site from a 9x9 two-spin matrix.
template <typename Derived>
ComplexMatrixT<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho, Site keep) {
  if (rho.rows() != kJointDim || rho.cols() != kJointDim) {
    throw DimensionError("partial_trace: state must be 9x9");
  }
  ComplexMatrixT<typename Derived::RealScalar> out =
      ComplexMatrixT<typename Derived::RealScalar>::Zero(kSpinDim, kSpinDim);
  for (int i = 0; i < kSpinDim; ++i) {
    for (int j = 0; j < kSpinDim; ++j) {
      for (int k = 0; k < kSpinDim; ++k) {
        out(i, j) += keep == Site::A ? rho(kSpinDim * i + k, kSpinDim * j + k)
                                     : rho(kSpinDim * k + i, kSpinDim * k + j);
      }
    }
  }
  return out;
}

/// Transposes the indices of one site: ((a,b),(a',b')) -> ((a',b),(a,b')) for A.
template <typename Derived>
ComplexMatrixT<typename Derived::RealScalar> partial_transpose(const Eigen::MatrixBase<Derived>& rho,
                                                               Site site = Site::A) {
  if (rho.rows() != kJointDim || rho.cols() != kJointDim) {
    throw DimensionError("partial_transpose: matrix must be 9x9");
  }
  ComplexMatrixT<typename Derived::RealScalar> out(kJointDim, kJointDim);
  for (int a = 0; a < kSpinDim; ++a) {
    for (int b = 0; b < kSpinDim; ++b) {
      for (int ap = 0; ap < kSpinDim; ++ap) {
        for (int bp = 0; bp < kSpinDim; ++bp) {
          const auto value = rho(kSpinDim * a + b, kSpinDim * ap + bp);
          if (site == Site::A) {
            out(kSpinDim * ap + b, kSpinDim * a + bp) = value;
          } else {
            out(kSpinDim * a + bp, kSpinDim * ap + b) = value;
          }
        }
      }
    }
  }
  return out;
}

/// |m_a, m_b> as a 9-vector.
ComplexVector basis_ket(int m_a, int m_b);
/// |m> as a 3-vector.
ComplexVector basis_ket(int m);
/// |psi><psi| for a (not necessarily normalized) vector.
ComplexMatrix projector(const ComplexVector& psi);

double max_abs(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);

/// Throws InvalidStateError unless m is Hermitian, unit-trace and PSD within tol.
void check_density_matrix(const ComplexMatrix& m, double tol = 1e-10);

/// Ascending eigenvalues of a Hermitian matrix. Throws InvalidStateError if
/// max|M - M^dag| exceeds hermiticity_tol.
RealVector hermitian_eigenvalues(const ComplexMatrix& m, double hermiticity_tol = 1e-8);

struct LinearSolution {
  ComplexVector x;
  double residual = 0.0;  // ||M x - b||_2
};

/// Least-squares solve of M x = b (M square or tall). Throws SolverError
/// carrying the residual when it exceeds `tolerance`; the default tolerance is
/// 1e-10 * (1 + max|M|) * (1 + ||b||).
LinearSolution solve_linear(const ComplexMatrix& m, const ComplexVector& b,
                            std::optional<double> tolerance = std::nullopt);

/// Ascending singular values of a square matrix. The matrix is first split
/// into the connected components of its nonzero pattern (a symmetric
/// permutation to block-diagonal form) and each block is decomposed
/// separately; for a block-diagonal generator this is much cheaper than one
/// dense SVD and gives the same spectrum.
RealVector singular_values(const ComplexMatrix& m);

}  // namespace spinsync
