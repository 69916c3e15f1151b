#include "spinsync/phase_space.hpp"

#include <array>
#include <stdexcept>

namespace spinsync {

namespace {

// c_m(theta, phi) = a_m(theta) exp(i k_m phi) with k = (0, 1, 2) on (m=+1, 0, -1).
constexpr std::array<int, 3> kPhaseOrder = {0, 1, 2};

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

RealVector uniform_grid(int n) {
  RealVector phis(n);
  for (int k = 0; k < n; ++k) phis(k) = kTwoPi * k / n;
  return phis;
}

// M_ik = sum_a w_a sin(theta_a) a_i(theta_a) a_k(theta_a): the polar-angle
// moments of the coherent-state amplitudes for one site.
Eigen::Matrix3d polar_moments(int n_theta) {
  const QuadratureRule rule = polar_rule(n_theta);
  Eigen::Matrix3d moments = Eigen::Matrix3d::Zero();
  for (Eigen::Index a = 0; a < rule.nodes.size(); ++a) {
    const double theta = rule.nodes(a);
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Eigen::Vector3d amp(c * c, std::sqrt(2.0) * s * c, s * s);
    moments += rule.weights(a) * std::sin(theta) * amp * amp.transpose();
  }
  return moments;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_theta < 8) throw std::invalid_argument("QuadratureSpec: n_theta must be >= 8");
  if (n_phi < 8) throw std::invalid_argument("QuadratureSpec: n_phi must be >= 8");
  if (n_phi_out < 1) throw std::invalid_argument("QuadratureSpec: n_phi_out must be >= 1");
}

double PhaseDistribution::integral() const {
  if (values.size() == 0) return 0.0;
  return values.sum() * kTwoPi / static_cast<double>(values.size());
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule{RealVector(n), RealVector(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  return rule;
}

QuadratureRule polar_rule(int n) {
  QuadratureRule rule = gauss_legendre(n);
  const double half_pi = std::numbers::pi / 2;
  rule.nodes = (rule.nodes.array() + 1.0) * half_pi;
  rule.weights *= half_pi;
  return rule;
}

double husimi_single(const ComplexMatrix& rho, double theta, double phi) {
  if (rho.rows() != kSpinDim || rho.cols() != kSpinDim) throw DimensionError("husimi_single: state must be 3x3");
  const ComplexVector c = coherent_state(theta, wrap_phase(phi));
  return kHusimiNorm * (c.adjoint() * rho * c)(0).real();
}

double husimi_joint(const ComplexMatrix& rho, double theta_a, double theta_b, double phi_a, double phi_b) {
  if (rho.rows() != kJointDim || rho.cols() != kJointDim) throw DimensionError("husimi_joint: state must be 9x9");
  const ComplexVector ca = coherent_state(theta_a, wrap_phase(phi_a));
  const ComplexVector cb = coherent_state(theta_b, wrap_phase(phi_b));
  ComplexVector c(kJointDim);
  for (int i = 0; i < kSpinDim; ++i) {
    for (int j = 0; j < kSpinDim; ++j) c(kSpinDim * i + j) = ca(i) * cb(j);
  }
  return kHusimiNorm * kHusimiNorm * (c.adjoint() * rho * c)(0).real();
}

// The product Gauss-Legendre rule over (theta_A, theta_B) factorizes per site:
// sum_{a,b} w_a w_b sin(t_a) sin(t_b) Q(t_a, t_b, phi_A, phi_B)
//   = (3/4pi)^2 sum rho_{(ij),(kl)} K_ik(phi_A) K_jl(phi_B)
// with K_ik(phi) = exp(i (k_k - k_i) phi) M_ik and M the polar moments above.
PhaseDistribution s_rel(const ComplexMatrix& rho, const QuadratureSpec& quad) {
  if (rho.rows() != kJointDim || rho.cols() != kJointDim) throw DimensionError("s_rel: state must be 9x9");
  quad.validate();
  const Eigen::Matrix3d moments = polar_moments(quad.n_theta);

  // Coefficient of exp(i (dk_A phi_A + dk_B phi_B)) with dk in [-2, 2].
  std::array<std::array<Complex, 5>, 5> coeff{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const int dka = kPhaseOrder[k] - kPhaseOrder[i];
          const int dkb = kPhaseOrder[l] - kPhaseOrder[j];
          coeff[dka + 2][dkb + 2] += rho(3 * i + j, 3 * k + l) * moments(i, k) * moments(j, l);
        }
      }
    }
  }

  // Uniform phi_B rule applied to each total frequency dk_A + dk_B in [-4, 4]:
  // sum_q w exp(i (dk_A (phi + phi_q) + dk_B phi_q)) = exp(i dk_A phi) R[dk_A + dk_B].
  std::array<Complex, 9> phi_b_rule{};
  const double w_phi = kTwoPi / quad.n_phi;
  for (int total = -4; total <= 4; ++total) {
    Complex acc = 0.0;
    for (int q = 0; q < quad.n_phi; ++q) acc += w_phi * std::polar(1.0, total * kTwoPi * q / quad.n_phi);
    phi_b_rule[total + 4] = acc;
  }
  std::array<Complex, 5> by_dka{};
  for (int dka = -2; dka <= 2; ++dka) {
    for (int dkb = -2; dkb <= 2; ++dkb) by_dka[dka + 2] += coeff[dka + 2][dkb + 2] * phi_b_rule[dka + dkb + 4];
  }

  PhaseDistribution dist{uniform_grid(quad.n_phi_out), RealVector(quad.n_phi_out)};
  const double norm = kHusimiNorm * kHusimiNorm;
  for (int p = 0; p < quad.n_phi_out; ++p) {
    Complex sum = 0.0;
    for (int dka = -2; dka <= 2; ++dka) sum += by_dka[dka + 2] * std::polar(1.0, dka * dist.phis(p));
    dist.values(p) = norm * sum.real() - 1.0 / kTwoPi;
  }
  return dist;
}

PhaseDistribution p_single(const ComplexMatrix& rho, const QuadratureSpec& quad) {
  if (rho.rows() != kSpinDim || rho.cols() != kSpinDim) throw DimensionError("p_single: state must be 3x3");
  quad.validate();
  const QuadratureRule rule = polar_rule(quad.n_theta);
  PhaseDistribution dist{uniform_grid(quad.n_phi_out), RealVector(quad.n_phi_out)};
  for (int p = 0; p < quad.n_phi_out; ++p) {
    double total = 0.0;
    for (Eigen::Index a = 0; a < rule.nodes.size(); ++a) {
      const double theta = rule.nodes(a);
      total += rule.weights(a) * std::sin(theta) * husimi_single(rho, theta, dist.phis(p));
    }
    dist.values(p) = total - 1.0 / kTwoPi;
  }
  return dist;
}

PhasePeak max_s_rel(const PhaseDistribution& dist) {
  if (dist.values.size() == 0) throw std::invalid_argument("max_s_rel: empty distribution");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < dist.values.size(); ++i) {
    if (dist.values(i) > dist.values(best)) best = i;
  }
  return {dist.phis(best), dist.values(best)};
}

}  // namespace spinsync
