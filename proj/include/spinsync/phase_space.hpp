#pragma once

#include "spinsync/types.hpp"

#include <cmath>
#include <numbers>

namespace spinsync {

struct QuadratureSpec {
  int n_theta = 32;    // Gauss-Legendre nodes per polar axis
  int n_phi = 32;      // uniform nodes for the phi_B integral
  int n_phi_out = 64;  // output grid size

  /// Throws std::invalid_argument if n_theta < 8, n_phi < 8 or n_phi_out < 1.
  void validate() const;
};

/// Sampled function of one phase angle on the uniform grid 2*pi*k/n, k = 0..n-1.
struct PhaseDistribution {
  RealVector phis;
  RealVector values;

  Eigen::Index size() const { return values.size(); }
  /// Rectangle-rule integral over [0, 2pi), exact for trigonometric polynomials of degree < n.
  double integral() const;
};

struct PhasePeak {
  double phi = 0.0;
  double value = 0.0;
};

struct QuadratureRule {
  RealVector nodes;
  RealVector weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule gauss_legendre(int n);
/// Gauss-Legendre rule mapped to theta in [0, pi]; the weights include the
/// Jacobian pi/2 but not the sin(theta) area element.
QuadratureRule polar_rule(int n);

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHusimiNorm = 3.0 / (4.0 * std::numbers::pi);

/// Spin-1 coherent state amplitudes on (m=+1, 0, -1):
/// (cos^2(t/2), sqrt(2) e^{i phi} sin(t/2) cos(t/2), e^{2 i phi} sin^2(t/2)).
template <typename Real = double>
ComplexVectorT<Real> coherent_state_unchecked(Real theta, Real phi) {
  using C = std::complex<Real>;
  const Real c = std::cos(theta / 2);
  const Real s = std::sin(theta / 2);
  ComplexVectorT<Real> v(3);
  v(0) = C(c * c);
  v(1) = std::sqrt(Real(2)) * s * c * std::polar(Real(1), phi);
  v(2) = s * s * std::polar(Real(1), 2 * phi);
  return v;
}

/// As coherent_state_unchecked, but rejects theta outside [0, pi] and phi outside [0, 2pi).
template <typename Real = double>
ComplexVectorT<Real> coherent_state(Real theta, Real phi) {
  if (!(theta >= 0 && theta <= Real(std::numbers::pi))) {
    throw std::invalid_argument("coherent_state: theta must lie in [0, pi]");
  }
  if (!(phi >= 0 && phi < Real(kTwoPi))) {
    throw std::invalid_argument("coherent_state: phi must lie in [0, 2pi)");
  }
  return coherent_state_unchecked(theta, phi);
}

/// Q(theta, phi) = 3/(4pi) <theta,phi|rho|theta,phi> for a 3x3 state. phi is
/// taken modulo 2pi.
double husimi_single(const ComplexMatrix& rho, double theta, double phi);

/// Joint Q function of a 9x9 two-spin state, (3/4pi)^2 times the product
/// coherent-state expectation value.
double husimi_joint(const ComplexMatrix& rho, double theta_a, double theta_b, double phi_a, double phi_b);

/// Relative-phase distribution S_rel(phi): the joint Q function integrated
/// over phi_B (uniform rule) and both polar angles (Gauss-Legendre with the
/// sin(theta) area element) at phi_A = phi + phi_B, minus 1/2pi.
///
/// Linear in rho; any Hermitian 9x9 matrix is accepted.
PhaseDistribution s_rel(const ComplexMatrix& rho, const QuadratureSpec& quad = {});

/// Single-spin phase distribution p(phi) = int sin(theta) Q(theta, phi) dtheta - 1/2pi.
PhaseDistribution p_single(const ComplexMatrix& rho, const QuadratureSpec& quad = {});

/// Grid maximum, ties resolved towards the smallest phi.
PhasePeak max_s_rel(const PhaseDistribution& dist);

}  // namespace spinsync
