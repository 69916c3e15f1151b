#include "spinsync/liouvillian.hpp"

#include "spinsync/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinsync {

namespace {

const Complex kI(0.0, 1.0);

// vec(X rho Y) = (X (x) Y^T) vec(rho) for row-major vec.
ComplexMatrix commutator_super(const ComplexMatrix& h) {
  const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.cols());
  return -kI * (kron(h, id) - kron(id, h.transpose()));
}

ComplexMatrix dissipator_super(const ComplexMatrix& o) {
  const ComplexMatrix id = ComplexMatrix::Identity(o.rows(), o.cols());
  const ComplexMatrix odo = o.adjoint() * o;
  return kron(o, o.conjugate()) - 0.5 * kron(odo, id) - 0.5 * kron(id, odo.transpose());
}

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument(std::string("SystemParams: ") + name + " must be finite and >= 0");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_rate(gamma_g_a, "gamma_g_a");
  require_rate(gamma_d_a, "gamma_d_a");
  require_rate(gamma_g_b, "gamma_g_b");
  require_rate(gamma_d_b, "gamma_d_b");
  require_rate(epsilon, "epsilon");
  if (!(gamma_d_a > 0.0)) throw std::invalid_argument("SystemParams: gamma_d_a must be > 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("SystemParams: delta must be finite");
  if (!std::isfinite(omega_ref)) throw std::invalid_argument("SystemParams: omega_ref must be finite");
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const auto n = require_square(rho, "vectorize");
  ComplexVector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho(i, j);
  }
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw DimensionError("unvectorize: length is not a perfect square");
  ComplexMatrix rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  }
  return rho;
}

Eigen::RowVectorXcd trace_functional(int dim) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(dim * dim);
  for (int i = 0; i < dim; ++i) t(i * dim + i) = 1.0;
  return t;
}

ComplexMatrix build_generator(const SystemParams& params) {
  params.validate();
  const auto ops = spin1_operators();
  const ComplexMatrix sp_a = embed(ops.sp, Site::A);
  const ComplexMatrix sm_a = embed(ops.sm, Site::A);
  const ComplexMatrix sz_a = embed(ops.sz, Site::A);
  const ComplexMatrix sp_b = embed(ops.sp, Site::B);
  const ComplexMatrix sm_b = embed(ops.sm, Site::B);
  const ComplexMatrix sz_b = embed(ops.sz, Site::B);

  const ComplexMatrix exchange = kI * (0.5 * params.epsilon) * (sp_a * sm_b - sp_b * sm_a);
  const ComplexMatrix hamiltonian = exchange + params.omega_a() * sz_a + params.omega_b() * sz_b;

  ComplexMatrix generator = commutator_super(hamiltonian);
  generator += 0.5 * params.gamma_g_a * dissipator_super(sp_a * sz_a);
  generator += 0.5 * params.gamma_d_a * dissipator_super(sm_a * sz_a);
  generator += 0.5 * params.gamma_g_b * dissipator_super(sp_b * sz_b);
  generator += 0.5 * params.gamma_d_b * dissipator_super(sm_b * sz_b);
  return generator;
}

SteadyState steady_state(const ComplexMatrix& generator) {
  if (generator.rows() != kLiouvilleDim || generator.cols() != kLiouvilleDim) {
    throw DimensionError("steady_state: generator must be 81x81");
  }
  const double scale = max_abs(generator);
  const RealVector sv = singular_values(generator);

  SteadyState out;
  out.sigma_min = sv(0);
  out.sigma_second = sv(1);
  if (out.sigma_second < 1e-8 * scale) {
    std::ostringstream os;
    os << "steady_state: generator kernel is not one-dimensional (second singular value "
       << out.sigma_second << ", max|L| = " << scale << ")";
    throw SolverError(SolverError::Kind::NonUnique, out.sigma_second, os.str());
  }

  ComplexMatrix augmented(kLiouvilleDim + 1, kLiouvilleDim);
  augmented << generator, trace_functional();
  ComplexVector rhs = ComplexVector::Zero(kLiouvilleDim + 1);
  rhs(kLiouvilleDim) = 1.0;

  const double tolerance = 1e-10 * (1.0 + scale);
  const LinearSolution sol = solve_linear(augmented, rhs, tolerance);

  ComplexMatrix rho = unvectorize(sol.x);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  out.residual = (generator * vectorize(rho)).norm();
  if (out.residual > tolerance) {
    std::ostringstream os;
    os << "steady_state: residual " << out.residual << " exceeds " << tolerance;
    throw SolverError(SolverError::Kind::Residual, out.residual, os.str());
  }
  check_density_matrix(rho, 1e-10);
  out.rho = std::move(rho);
  return out;
}

SteadyState steady_state(const SystemParams& params) { return steady_state(build_generator(params)); }

double default_time_step(const SystemParams& params) {
  const double fastest = std::max({params.gamma_g_a, params.gamma_d_a, params.gamma_g_b, params.gamma_d_b,
                                   std::abs(params.delta), params.epsilon, 1.0});
  return 1e-3 / fastest;
}

Trajectory evolve(const SystemParams& params, const DensityMatrix& rho0, double t_max, double dt, int samples) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("evolve: t_max must be >= 0");
  if (rho0.rows() != kJointDim || rho0.cols() != kJointDim) throw DimensionError("evolve: rho0 must be 9x9");
  check_density_matrix(rho0, 1e-10);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  if (t_max == 0.0) return traj;
  if (samples < 2) throw std::invalid_argument("evolve: need at least 2 samples when t_max > 0");

  const ComplexMatrix generator = build_generator(params);
  const double interval = t_max / (samples - 1);
  const long steps = std::max(1L, static_cast<long>(std::ceil(interval / dt - 1e-12)));
  const double h = interval / steps;

  // For a linear autonomous system one classical RK4 step is exactly
  // multiplication by the degree-4 Taylor polynomial of h L.
  const ComplexMatrix id = ComplexMatrix::Identity(kLiouvilleDim, kLiouvilleDim);
  const ComplexMatrix hl = h * generator;
  const ComplexMatrix step = id + hl * (id + 0.5 * hl * (id + (1.0 / 3.0) * hl * (id + 0.25 * hl)));

  const Complex trace0 = rho0.trace();
  ComplexVector v = vectorize(rho0);
  ComplexVector next(kLiouvilleDim);
  for (int k = 1; k < samples; ++k) {
    for (long s = 0; s < steps; ++s) {
      next.noalias() = step * v;
      v.swap(next);
    }
    ComplexMatrix rho = unvectorize(v);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double drift = std::abs(rho.trace() - trace0);
    const double bound = max_abs(rho);
    if (!std::isfinite(drift) || !std::isfinite(bound) || drift > 1e-6 || bound > 1.0 + 1e-6) {
      std::ostringstream os;
      os << "evolve: integration unstable at t=" << k * interval << " (trace drift " << drift
         << ", max|rho_ij| " << bound << "); use a smaller time step than " << h;
      throw SolverError(SolverError::Kind::StepTooLarge, drift, os.str());
    }
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    v = vectorize(rho);
    traj.times.push_back(k == samples - 1 ? t_max : k * interval);
    traj.states.push_back(std::move(rho));
  }
  return traj;
}

}  // namespace spinsync
