#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace spinsync {

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = Eigen::VectorXd;

// A density matrix is a ComplexMatrix that is Hermitian, unit-trace and
// positive semidefinite (see check_density_matrix). Two-spin states are 9x9,
// reduced single-spin states 3x3.
using DensityMatrix = ComplexMatrix;

// Spin-1 basis: index 0 <-> m=+1, 1 <-> m=0, 2 <-> m=-1.
// Joint index = 3 * index_A + index_B, so |0,0> sits at 4.
inline constexpr int kSpinDim = 3;
inline constexpr int kJointDim = 9;
inline constexpr int kLiouvilleDim = 81;

enum class Site { A, B };

constexpr int basis_index(int m) { return 1 - m; }
constexpr int joint_index(int m_a, int m_b) { return kSpinDim * basis_index(m_a) + basis_index(m_b); }

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure of a linear solve or integration; carries the offending
// residual (or drift) so callers can report it.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { Residual, NonUnique, StepTooLarge, NoSteadyState };

  SolverError(Kind kind, double residual, const std::string& what)
      : std::runtime_error(what), kind_(kind), residual_(residual) {}

  Kind kind() const noexcept { return kind_; }
  double residual() const noexcept { return residual_; }

 private:
  Kind kind_;
  double residual_;
};

}  // namespace spinsync
