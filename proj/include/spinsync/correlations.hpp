#pragma once

#include "spinsync/types.hpp"

#include <array>

namespace spinsync {

/// (||rho^{T_site}||_1 - 1) / 2.
double negativity(const DensityMatrix& rho, Site site = Site::A);

/// -sum lambda ln(lambda), natural log. Eigenvalues in (-1e-8, 0) are clamped
/// to zero; anything more negative throws InvalidStateError.
double von_neumann_entropy(const DensityMatrix& rho);

/// S(rho_A) + S(rho_B) - S(rho).
double mutual_information(const DensityMatrix& rho);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

struct SchmidtAnalysis {
  std::array<double, 3> coefficients{};  // descending, sum of squares 1
  int rank = 0;
  double purity = 0.0;
  double dominant_weight = 0.0;  // largest eigenvalue of rho
  bool mixed_warning = false;    // purity < 0.9: the pure-state reading is approximate
};

inline constexpr double kDefaultSchmidtThreshold = 1e-3;

/// Schmidt decomposition of the dominant eigenvector of rho. The rank counts
/// coefficients above threshold * coefficients[0].
SchmidtAnalysis schmidt_analysis(const DensityMatrix& rho, double threshold = kDefaultSchmidtThreshold);

/// Schmidt coefficients of a (normalized) 9-amplitude pure state, descending.
std::array<double, 3> schmidt_coefficients(const ComplexVector& psi);

}  // namespace spinsync
