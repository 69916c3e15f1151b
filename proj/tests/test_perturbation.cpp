#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinsync/correlations.hpp"
#include "spinsync/liouvillian.hpp"
#include "spinsync/perturbation.hpp"
#include "spinsync/phase_space.hpp"
#include "spinsync/spin_algebra.hpp"
#include "spinsync/sweep.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

using namespace spinsync;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams balanced_a_unbalanced_b() {
  SystemParams p = balanced_cut_base();
  p.gamma_d_b = 199.0;
  return p;
}

double peak_deviation(double eps) {
  const SystemParams p = reversed_cycle_params(eps);
  const double numeric = max_s_rel(s_rel(steady_state(p).rho)).value;
  return std::abs(numeric - s_rel_first_order(p, 0.0));
}

}  // namespace

TEST_CASE("coherences examples") {
  const SystemParams locked = reversed_cycle_params(0.1);
  const CoherencePair zero = coherences(locked, 0.0);
  CHECK(zero.mu_plus == Complex(0.0));
  CHECK(zero.mu_minus == Complex(0.0));

  const CoherencePair steady = coherences(locked);
  CHECK(std::abs(steady.mu_plus - 1.0) < 1e-15);
  CHECK(std::abs(steady.mu_minus + 0.01) < 1e-15);

  const CoherencePair balanced = coherences(balanced_cut_base());
  CHECK(std::abs(balanced.mu_plus + balanced.mu_minus) < 1e-15);

  // Small-t series and the closed form agree across the switch-over.
  for (double t : {1e-9, 1e-6, 1e-4, 1e-2}) {
    const CoherencePair c = coherences(locked, t);
    CHECK(std::abs(c.mu_plus - (1 - std::exp(-t))) < 1e-15);
    CHECK(std::abs(c.mu_minus + (1 - std::exp(-100 * t)) / 100) < 1e-15);
  }
  CHECK_THROWS_AS(coherences(locked, -1.0), std::invalid_argument);
}

TEST_CASE("coherences detuned limit") {
  SystemParams p = reversed_cycle_params(0.1);
  p.delta = 1.0;
  const DecayRates r = decay_rates(p);
  CHECK(r.lambda_plus == Complex(1.0, 1.0));
  CHECK(r.lambda_minus == Complex(100.0, -1.0));
  const CoherencePair c = coherences(p);
  CHECK(std::abs(c.mu_plus - 1.0 / Complex(1.0, 1.0)) < 1e-15);
  CHECK(std::abs(c.mu_minus + 1.0 / Complex(100.0, -1.0)) < 1e-15);
}

TEST_CASE("s_rel_first_order examples") {
  const SystemParams locked = reversed_cycle_params(0.1);
  CHECK(s_rel_first_order(locked, 0.0) == doctest::Approx(0.021870).epsilon(5e-6 / 0.021870));
  CHECK(s_rel_first_order(locked, 0.0) == doctest::Approx(9 * kPi / 128 * 0.1 * 0.99).epsilon(1e-14));

  SystemParams same;
  same.epsilon = 0.1;
  for (double phi : {0.0, 1.0, 3.0}) CHECK(std::abs(s_rel_first_order(same, phi)) < 1e-15);

  CHECK(s_rel_first_order(balanced_a_unbalanced_b(), 0.0) == doctest::Approx(0.021870).epsilon(5e-6 / 0.021870));
}

TEST_CASE("negativity_first_order examples") {
  CHECK(negativity_first_order(reversed_cycle_params(0.1)) == doctest::Approx(0.101).epsilon(1e-13));
  CHECK(negativity_first_order(balanced_cut_base()) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(negativity_first_order(reversed_cycle_params(0.0)) == 0.0);
}

TEST_CASE("first_order_state examples") {
  const ComplexVector ground = first_order_state(reversed_cycle_params(0.0));
  CHECK(ground == basis_ket(0, 0));

  const ComplexVector psi = first_order_state(reversed_cycle_params(0.1));
  const double norm = std::sqrt(1.010001);
  CHECK(std::abs(psi(joint_index(0, 0)) - 1.0 / norm) < 1e-15);
  CHECK(std::abs(psi(joint_index(+1, -1)) - 0.1 / norm) < 1e-15);
  CHECK(std::abs(psi(joint_index(-1, +1)) + 0.001 / norm) < 1e-15);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
  int nonzero = 0;
  for (int i = 0; i < kJointDim; ++i) nonzero += psi(i) != Complex(0.0) ? 1 : 0;
  CHECK(nonzero == 3);

  const DensityMatrix rho = steady_state(reversed_cycle_params(0.1)).rho;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  const ComplexVector dominant = es.eigenvectors().col(kJointDim - 1);
  CHECK(std::abs(dominant.dot(psi)) >= 0.999);
}

TEST_CASE("transient rate matches the two-exponential expression") {
  for (double delta : {0.0, 0.3}) {
    SystemParams p = reversed_cycle_params(0.1);
    p.delta = delta;
    const double h = 1e-3;
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      for (double phi : {0.0, 0.7, 2.0}) {
        const auto f = [&](double s) { return s_rel_first_order(p, phi, s); };
        const double fd = (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
        const double rate =
            kFirstOrderCoefficient * p.epsilon * (std::exp(-t) - std::exp(-100 * t)) * std::cos(phi - delta * t);
        CAPTURE(t);
        CHECK(std::abs(fd - rate) < 1e-12);
      }
    }
  }
}

TEST_CASE("resonant coherences keep their signs and the peak sits at phi = 0") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> rate(0.1, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    SystemParams p;
    p.gamma_g_a = rate(rng);
    p.gamma_d_a = rate(rng);
    p.gamma_g_b = rate(rng);
    p.gamma_d_b = rate(rng);
    p.epsilon = 0.1;
    for (double t : {0.0, 0.01, 1.0, 10.0, kSteadyTime}) {
      const CoherencePair c = coherences(p, t);
      CHECK(std::abs(c.mu_plus.imag()) < 1e-15);
      CHECK(c.mu_plus.real() >= 0.0);
      CHECK(c.mu_minus.real() <= 0.0);
    }
    const CoherencePair c = coherences(p);
    if ((c.mu_plus + c.mu_minus).real() > 0) {
      double best = -1.0, best_phi = -1.0;
      for (int k = 0; k < 64; ++k) {
        const double phi = kTwoPi * k / 64;
        const double v = s_rel_first_order(p, phi);
        if (v > best) {
          best = v;
          best_phi = phi;
        }
      }
      CHECK(best_phi == 0.0);
    }
  }
}

TEST_CASE("missing decay reports that no steady state exists") {
  SystemParams p = reversed_cycle_params(0.1);
  p.gamma_g_a = 0.0;
  p.gamma_d_b = 0.0;
  try {
    coherences(p);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::NoSteadyState);
  }
  // The transient stays finite: mu_-(t) = -t.
  CHECK(std::abs(coherences(p, 2.0).mu_minus + 2.0) < 1e-15);
}

TEST_CASE("oracle agrees with numerics and the gap closes as epsilon squared") {
  const double d10 = peak_deviation(0.1);
  const double d05 = peak_deviation(0.05);
  CHECK(d10 <= 0.05 * s_rel_first_order(reversed_cycle_params(0.1), 0.0));
  CHECK(d05 <= 0.05 * s_rel_first_order(reversed_cycle_params(0.05), 0.0));
  CHECK(d10 >= 3.0 * d05);
}
