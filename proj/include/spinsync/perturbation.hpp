#pragma once

#include "spinsync/liouvillian.hpp"
#include "spinsync/types.hpp"

#include <limits>
#include <numbers>

namespace spinsync {

// First-order expansion rho(t) ~ rho_0 + epsilon mu(t) around the uncoupled
// fixed point |0,0><0,0|. The exchange coupling drives only the two
// coherences mu_+ = <+1,-1|mu|0,0> and mu_- = <-1,+1|mu|0,0>:
//
//   d mu_+/dt =  1 - lambda_+ mu_+,   lambda_+ = (gamma_d_a + gamma_g_b)/2 + i delta
//   d mu_-/dt = -1 - lambda_- mu_-,   lambda_- = (gamma_g_a + gamma_d_b)/2 - i delta
//
// with mu(0) = 0.

/// Pass as the time argument to evaluate the t -> infinity limit.
inline constexpr double kSteadyTime = std::numeric_limits<double>::infinity();

struct CoherencePair {
  Complex mu_plus;
  Complex mu_minus;
};

struct DecayRates {
  Complex lambda_plus;
  Complex lambda_minus;
};

DecayRates decay_rates(const SystemParams& params);

/// mu_+(t) = (1 - e^{-lambda_+ t}) / lambda_+, mu_-(t) = -(1 - e^{-lambda_- t}) / lambda_-.
/// Throws SolverError(NoSteadyState) for t = kSteadyTime when a decay rate has
/// no positive real part.
CoherencePair coherences(const SystemParams& params, double t = kSteadyTime);

/// (9 pi epsilon / 128) Re[e^{i phi} (mu_+ + conj(mu_-))].
double s_rel_first_order(const SystemParams& params, double phi, double t = kSteadyTime);

/// epsilon (|mu_+| + |mu_-|).
double negativity_first_order(const SystemParams& params, double t = kSteadyTime);

/// Normalized |0,0> + eps mu_+ |+1,-1> + eps mu_- |-1,+1>.
ComplexVector first_order_state(const SystemParams& params, double t = kSteadyTime);

inline constexpr double kFirstOrderCoefficient = 9.0 * std::numbers::pi / 128.0;

}  // namespace spinsync
