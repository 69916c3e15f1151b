#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinsync/liouvillian.hpp"
#include "spinsync/phase_space.hpp"
#include "spinsync/perturbation.hpp"
#include "spinsync/spin_algebra.hpp"
#include "spinsync/sweep.hpp"
#include "test_support.hpp"

using namespace spinsync;
using spinsync::testing::random_density;

namespace {

const Complex kI(0.0, 1.0);

// Right-hand side of the master equation evaluated directly on matrices,
// without any vectorization.
ComplexMatrix master_rhs(const SystemParams& p, const ComplexMatrix& rho) {
  const auto ops = spin1_operators();
  const ComplexMatrix sp_a = embed(ops.sp, Site::A), sm_a = embed(ops.sm, Site::A), sz_a = embed(ops.sz, Site::A);
  const ComplexMatrix sp_b = embed(ops.sp, Site::B), sm_b = embed(ops.sm, Site::B), sz_b = embed(ops.sz, Site::B);
  const ComplexMatrix v = kI * (p.epsilon / 2) * (sp_a * sm_b - sp_b * sm_a);
  const ComplexMatrix h = v + p.omega_a() * sz_a + p.omega_b() * sz_b;
  ComplexMatrix out = -kI * (h * rho - rho * h);
  out += p.gamma_g_a / 2 * dissipator(sp_a * sz_a, rho);
  out += p.gamma_d_a / 2 * dissipator(sm_a * sz_a, rho);
  out += p.gamma_g_b / 2 * dissipator(sp_b * sz_b, rho);
  out += p.gamma_d_b / 2 * dissipator(sm_b * sz_b, rho);
  return out;
}

SystemParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> rate(0.1, 5.0);
  std::uniform_real_distribution<double> sym(-2.0, 2.0);
  SystemParams p;
  p.gamma_g_a = rate(rng);
  p.gamma_d_a = rate(rng);
  p.gamma_g_b = rate(rng);
  p.gamma_d_b = rate(rng);
  p.epsilon = 0.2 * rate(rng);
  p.delta = sym(rng);
  p.omega_ref = sym(rng);
  return p;
}

ComplexMatrix total_sz() {
  const auto ops = spin1_operators();
  return embed(ops.sz, Site::A) + embed(ops.sz, Site::B);
}

}  // namespace

TEST_CASE("SystemParams validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma_d_a = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SystemParams{};
  p.epsilon = -0.1;
  CHECK_THROWS_AS(build_generator(p), std::invalid_argument);
  p = SystemParams{};
  p.delta = std::nan("");
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("generator agrees with the matrix-level master equation") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams p = random_params(rng);
    const ComplexMatrix l = build_generator(p);
    const ComplexMatrix rho = spinsync::testing::random_complex(9, 9, rng);
    CHECK(max_abs(unvectorize(l * vectorize(rho)) - master_rhs(p, rho)) < 1e-12);
  }
}

TEST_CASE("generator examples") {
  SystemParams p;
  p.gamma_g_a = 2.0;
  p.gamma_d_a = 1.0;
  p.gamma_g_b = 3.0;
  p.gamma_d_b = 0.5;
  p.epsilon = 0.0;
  p.delta = 0.7;

  const ComplexVector ground = vectorize(projector(basis_ket(0, 0)));
  CHECK(build_generator(p) * ground == ComplexVector::Zero(81));

  p.epsilon = 0.3;
  const ComplexMatrix l = build_generator(p);
  CHECK((trace_functional() * l).cwiseAbs().maxCoeff() < 1e-13);

  // Coherence |+1,-1><0,0| decays at (gamma_d_a + gamma_g_b)/2 and rotates at delta.
  const int idx = joint_index(+1, -1) * kJointDim + joint_index(0, 0);
  const Complex expected(-(p.gamma_d_a + p.gamma_g_b) / 2, -p.delta);
  CHECK(std::abs(l(idx, idx) - expected) < 1e-14);
}

TEST_CASE("steady state of the uncoupled spins is |0,0><0,0|") {
  SystemParams p = reversed_cycle_params(0.0);
  const SteadyState ss = steady_state(p);
  CHECK(max_abs(ss.rho - projector(basis_ket(0, 0))) < 1e-10);
  CHECK(ss.residual <= 1e-10 * (1 + max_abs(build_generator(p))));

  p = SystemParams{};
  p.gamma_g_a = 0.4;
  p.gamma_d_b = 7.0;
  CHECK(max_abs(steady_state(p).rho - projector(basis_ket(0, 0))) < 1e-10);
}

TEST_CASE("reversed-cycle steady state: frozen values from an independent solver") {
  // Reference values from a separate NumPy implementation (column-major
  // superoperator built from the matrix-level right-hand side, kernel from
  // scipy.linalg.null_space).
  const SteadyState ss = steady_state(reversed_cycle_params(0.1));
  CHECK(purity(ss.rho) == doctest::Approx(0.9619207142869748).epsilon(1e-9));
  CHECK(negativity(ss.rho) == doctest::Approx(0.0876005564672141).epsilon(1e-9));
  CHECK(ss.sigma_second > 1e-3);
}

TEST_CASE("steady state is independent of omega_ref and commutes with total Sz") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> offset(-10.0, 10.0);
  for (int trial = 0; trial < 3; ++trial) {
    SystemParams p = random_params(rng);
    p.omega_ref = 0.0;
    const ComplexMatrix base = steady_state(p).rho;
    p.omega_ref = offset(rng);
    CHECK(max_abs(steady_state(p).rho - base) < 1e-9);

    const ComplexMatrix sz = total_sz();
    CHECK(max_abs(base * sz - sz * base) < 1e-10);
    // Hence diagonal reduced states.
    const ComplexMatrix ra = partial_trace(base, Site::A);
    CHECK(max_abs(ra - ComplexMatrix(ra.diagonal().asDiagonal())) < 1e-10);
  }

  SystemParams locked = reversed_cycle_params(0.1);
  const ComplexMatrix r0 = steady_state(locked).rho;
  locked.omega_ref = 5.0;
  CHECK(max_abs(steady_state(locked).rho - r0) < 1e-9);
}

TEST_CASE("degenerate kernel is reported, not silently solved") {
  SystemParams p;
  p.gamma_g_a = 0.0;  // |-1> of spin A becomes dark
  p.epsilon = 0.0;
  try {
    steady_state(p);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::NonUnique);
  }
}

TEST_CASE("evolve basic contracts") {
  const DensityMatrix ground = projector(basis_ket(0, 0));
  const SystemParams locked = reversed_cycle_params(0.1);

  const Trajectory empty = evolve(locked, ground, 0.0, 1e-3, 10);
  REQUIRE(empty.states.size() == 1);
  CHECK(empty.times[0] == 0.0);
  CHECK(max_abs(empty.states[0] - ground) == 0.0);

  const Trajectory fixed = evolve(reversed_cycle_params(0.0), ground, 2.0, 1e-3, 5);
  for (const auto& s : fixed.states) CHECK(max_abs(s - ground) < 1e-12);

  CHECK_THROWS_AS(evolve(locked, ground, 1.0, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(evolve(locked, ground, -1.0, 1e-3, 5), std::invalid_argument);
  CHECK_THROWS_AS(evolve(locked, ground, 1.0, 1e-3, 1), std::invalid_argument);
  CHECK_THROWS_AS(evolve(locked, 2.0 * ground, 1.0, 1e-3, 3), InvalidStateError);

  CHECK(default_time_step(locked) == doctest::Approx(1e-5));
}

TEST_CASE("evolve rejects an unstable step") {
  // |h lambda| far outside the RK4 stability region for rates of 100.
  try {
    evolve(reversed_cycle_params(0.1), projector(basis_ket(+1, -1)), 5.0, 0.2, 3);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::StepTooLarge);
  }
}

TEST_CASE("evolve preserves Hermiticity, trace and positivity") {
  std::mt19937 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemParams p = random_params(rng);
    const DensityMatrix rho0 = random_density(9, rng);
    const Trajectory traj = evolve(p, rho0, 1.0, default_time_step(p) * 10, 5);
    CHECK(traj.max_trace_drift <= 1e-8);
    for (const auto& s : traj.states) {
      CHECK(hermiticity_error(s) < 1e-10);
      CHECK(hermitian_eigenvalues(s)(0) >= -1e-8);
    }
  }
}

TEST_CASE("long-time evolution converges to the steady state") {
  const SystemParams locked = reversed_cycle_params(0.1);
  const Trajectory traj = evolve(locked, projector(basis_ket(0, 0)), 50.0, 1e-3, 2);
  CHECK(max_abs(traj.states.back() - steady_state(locked).rho) <= 1e-6);
}

TEST_CASE("transient phase locking follows the first-order oracle") {
  const SystemParams locked = reversed_cycle_params(0.1);
  const Trajectory traj = evolve(locked, projector(basis_ket(0, 0)), 5.0, default_time_step(locked), 11);
  CHECK(traj.max_trace_drift <= 1e-8);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double numeric = s_rel(traj.states[k]).values(0);
    // Integral of the two-exponential locking rate with lambda_+ = 1, lambda_- = 100.
    const double oracle = kFirstOrderCoefficient * 0.1 * ((1 - std::exp(-t)) - (1 - std::exp(-100 * t)) / 100);
    if (t == 0.5 || t == 1.0 || t == 2.0 || t == 5.0) {
      CAPTURE(t);
      CHECK(std::abs(numeric - oracle) <= 0.05 * oracle);
    }
  }
}
