#include "spinsync/correlations.hpp"

#include "spinsync/spin_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace spinsync {

namespace {

void require_joint(const ComplexMatrix& rho, const char* what) {
  if (rho.rows() != kJointDim || rho.cols() != kJointDim) {
    throw DimensionError(std::string(what) + ": state must be 9x9");
  }
}

}  // namespace

double negativity(const DensityMatrix& rho, Site site) {
  require_joint(rho, "negativity");
  const RealVector eig = hermitian_eigenvalues(partial_transpose(rho, site));
  return 0.5 * (eig.cwiseAbs().sum() - 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector eig = hermitian_eigenvalues(rho);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double lambda = eig(i);
    if (lambda < -1e-8) {
      std::ostringstream os;
      os << "von_neumann_entropy: eigenvalue " << lambda << " is below -1e-8";
      throw InvalidStateError(os.str());
    }
    if (lambda > 0.0) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

double mutual_information(const DensityMatrix& rho) {
  require_joint(rho, "mutual_information");
  return von_neumann_entropy(partial_trace(rho, Site::A)) + von_neumann_entropy(partial_trace(rho, Site::B)) -
         von_neumann_entropy(rho);
}

double purity(const DensityMatrix& rho) { return (rho * rho).trace().real(); }

std::array<double, 3> schmidt_coefficients(const ComplexVector& psi) {
  if (psi.size() != kJointDim) throw DimensionError("schmidt_coefficients: state must have 9 amplitudes");
  ComplexMatrix amplitudes(kSpinDim, kSpinDim);
  for (int a = 0; a < kSpinDim; ++a) {
    for (int b = 0; b < kSpinDim; ++b) amplitudes(a, b) = psi(kSpinDim * a + b);
  }
  // JacobiSVD returns singular values in decreasing order.
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(amplitudes).singularValues();
  return {sv(0), sv(1), sv(2)};
}

SchmidtAnalysis schmidt_analysis(const DensityMatrix& rho, double threshold) {
  require_joint(rho, "schmidt_analysis");
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const ComplexVector dominant = solver.eigenvectors().col(kJointDim - 1).normalized();

  SchmidtAnalysis out;
  out.coefficients = schmidt_coefficients(dominant);
  out.rank = 0;
  for (double c : out.coefficients) {
    if (c > threshold * out.coefficients[0]) ++out.rank;
  }
  out.purity = purity(rho);
  out.dominant_weight = solver.eigenvalues()(kJointDim - 1);
  out.mixed_warning = out.purity < 0.9;
  return out;
}

}  // namespace spinsync
