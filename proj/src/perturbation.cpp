#include "spinsync/perturbation.hpp"

#include <cmath>
#include <sstream>

namespace spinsync {

namespace {

// (1 - e^{-lambda t}) / lambda, continuous through lambda = 0.
Complex relaxed_response(Complex lambda, double t) {
  if (std::isinf(t)) {
    if (!(lambda.real() > 0.0)) {
      std::ostringstream os;
      os << "coherences: decay rate " << lambda << " has no positive real part; no steady state";
      throw SolverError(SolverError::Kind::NoSteadyState, std::abs(lambda), os.str());
    }
    return 1.0 / lambda;
  }
  const Complex z = lambda * t;
  if (std::abs(z) < 1e-4) {
    // t (1 - z/2 + z^2/6 - z^3/24)
    return t * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
  }
  return (1.0 - std::exp(-z)) / lambda;
}

}  // namespace

DecayRates decay_rates(const SystemParams& params) {
  return {Complex(0.5 * (params.gamma_d_a + params.gamma_g_b), params.delta),
          Complex(0.5 * (params.gamma_g_a + params.gamma_d_b), -params.delta)};
}

CoherencePair coherences(const SystemParams& params, double t) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("coherences: t must be >= 0");
  const DecayRates rates = decay_rates(params);
  return {relaxed_response(rates.lambda_plus, t), -relaxed_response(rates.lambda_minus, t)};
}

double s_rel_first_order(const SystemParams& params, double phi, double t) {
  const CoherencePair mu = coherences(params, t);
  return kFirstOrderCoefficient * params.epsilon * (std::polar(1.0, phi) * (mu.mu_plus + std::conj(mu.mu_minus))).real();
}

double negativity_first_order(const SystemParams& params, double t) {
  const CoherencePair mu = coherences(params, t);
  return params.epsilon * (std::abs(mu.mu_plus) + std::abs(mu.mu_minus));
}

ComplexVector first_order_state(const SystemParams& params, double t) {
  const CoherencePair mu = coherences(params, t);
  ComplexVector psi = ComplexVector::Zero(kJointDim);
  psi(joint_index(0, 0)) = 1.0;
  psi(joint_index(+1, -1)) = params.epsilon * mu.mu_plus;
  psi(joint_index(-1, +1)) = params.epsilon * mu.mu_minus;
  return psi / psi.norm();
}

}  // namespace spinsync
