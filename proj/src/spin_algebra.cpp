#include "spinsync/spin_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace spinsync {

ComplexVector basis_ket(int m_a, int m_b) {
  if (std::abs(m_a) > 1 || std::abs(m_b) > 1) {
    throw std::invalid_argument("basis_ket: spin-1 projections are -1, 0 or +1");
  }
  ComplexVector v = ComplexVector::Zero(kJointDim);
  v(joint_index(m_a, m_b)) = 1.0;
  return v;
}

ComplexVector basis_ket(int m) {
  if (std::abs(m) > 1) {
    throw std::invalid_argument("basis_ket: spin-1 projections are -1, 0 or +1");
  }
  ComplexVector v = ComplexVector::Zero(kSpinDim);
  v(basis_index(m)) = 1.0;
  return v;
}

ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

void check_density_matrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || (m.rows() != kSpinDim && m.rows() != kJointDim)) {
    throw DimensionError("density matrix must be 3x3 or 9x9");
  }
  const double herm = hermiticity_error(m);
  if (herm > tol) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max|M - M^dag| = " << herm << ")";
    throw InvalidStateError(os.str());
  }
  const double trace_err = std::abs(m.trace() - Complex(1.0));
  if (trace_err > tol) {
    std::ostringstream os;
    os << "density matrix trace differs from 1 by " << trace_err;
    throw InvalidStateError(os.str());
  }
  const double min_eig = hermitian_eigenvalues(m)(0);
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << min_eig;
    throw InvalidStateError(os.str());
  }
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double hermiticity_tol) {
  require_square(m, "hermitian_eigenvalues");
  const double herm = hermiticity_error(m);
  if (herm > hermiticity_tol) {
    std::ostringstream os;
    os << "hermitian_eigenvalues: input is not Hermitian (max|M - M^dag| = " << herm << ")";
    throw InvalidStateError(os.str());
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  // SelfAdjointEigenSolver returns eigenvalues in increasing order.
  return solver.eigenvalues();
}

LinearSolution solve_linear(const ComplexMatrix& m, const ComplexVector& b, std::optional<double> tolerance) {
  if (m.rows() < m.cols()) {
    throw DimensionError("solve_linear: matrix must be square or tall");
  }
  if (b.size() != m.rows()) {
    throw DimensionError("solve_linear: right-hand side length does not match matrix rows");
  }
  LinearSolution sol;
  sol.x = m.colPivHouseholderQr().solve(b);
  sol.residual = (m * sol.x - b).norm();
  const double tol = tolerance.value_or(1e-10 * (1.0 + max_abs(m)) * (1.0 + b.norm()));
  if (!std::isfinite(sol.residual) || sol.residual > tol) {
    std::ostringstream os;
    os << "solve_linear: residual " << sol.residual << " exceeds tolerance " << tol
       << " (system is rank deficient or inconsistent)";
    throw SolverError(SolverError::Kind::Residual, sol.residual, os.str());
  }
  return sol;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

RealVector singular_values(const ComplexMatrix& m) {
  const int n = static_cast<int>(require_square(m, "singular_values"));
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) != Complex(0.0)) {
        const int ri = find_root(parent, i);
        const int rj = find_root(parent, j);
        if (ri != rj) parent[ri] = rj;
      }
    }
  }
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks[find_root(parent, i)].push_back(i);

  std::vector<double> values;
  values.reserve(n);
  for (const auto& [root, idx] : blocks) {
    const int k = static_cast<int>(idx.size());
    ComplexMatrix sub(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
    }
    const RealVector sv = Eigen::BDCSVD<ComplexMatrix>(sub).singularValues();
    values.insert(values.end(), sv.data(), sv.data() + sv.size());
  }
  std::sort(values.begin(), values.end());
  return Eigen::Map<RealVector>(values.data(), n);
}

}  // namespace spinsync
