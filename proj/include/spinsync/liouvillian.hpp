#pragma once

#include "spinsync/types.hpp"

#include <vector>

namespace spinsync {

/// One parameter point of the two-spin master equation. Rates, coupling and
/// frequencies are in units of gamma_d_a (hbar = 1). The precession
/// frequencies are omega_A = omega_ref + delta and omega_B = omega_ref.
struct SystemParams {
  double gamma_g_a = 1.0;
  double gamma_d_a = 1.0;
  double gamma_g_b = 1.0;
  double gamma_d_b = 1.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double omega_ref = 0.0;

  double omega_a() const { return omega_ref + delta; }
  double omega_b() const { return omega_ref; }

  /// Throws std::invalid_argument on negative or non-finite rates, or gamma_d_a <= 0.
  void validate() const;
};

/// Row-major vectorization: vec(rho)[i * n + j] = rho(i, j).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v);

/// Row vector t with t . vec(rho) = Tr rho.
Eigen::RowVectorXcd trace_functional(int dim = kJointDim);

/// 81x81 generator L of the master equation with vec(drho/dt) = L vec(rho).
ComplexMatrix build_generator(const SystemParams& params);

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;        // ||L vec(rho)||_2 after Hermitizing and renormalizing
  double sigma_min = 0.0;       // smallest singular value of L
  double sigma_second = 0.0;    // second smallest singular value of L
};

/// Unique steady state of the generator, from the least-squares system
/// [L; Tr] vec(rho) = (0, ..., 0, 1).
///
/// Throws SolverError(NonUnique) if the second smallest singular value of L is
/// below 1e-8 * max|L|, and SolverError(Residual) if the final residual
/// exceeds 1e-10 * (1 + max|L|).
SteadyState steady_state(const ComplexMatrix& generator);
SteadyState steady_state(const SystemParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double max_trace_drift = 0.0;
};

/// 1e-3 / max(all rates, |delta|, epsilon, 1).
double default_time_step(const SystemParams& params);

/// Fixed-step classical RK4 integration from rho0 over [0, t_max], with
/// `samples` equally spaced sample times (including both ends). Each sampling
/// interval is split into ceil(interval / dt) equal steps, so the step used
/// never exceeds dt. States are re-Hermitized at every sample.
///
/// Throws SolverError(StepTooLarge) if the trace drifts by more than 1e-6 or
/// the state leaves the bounded set |rho_ij| <= 1.
Trajectory evolve(const SystemParams& params, const DensityMatrix& rho0, double t_max, double dt, int samples);

}  // namespace spinsync
