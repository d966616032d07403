#include "saddle/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "saddle/integrator.hpp"
#include "saddle/potential.hpp"

namespace saddle {

double threshold_closed_form(double wx2, double wy2, double gamma) {
  const double g2 = gamma * gamma;
  const double disc = (g2 + wx2 - wy2) * (g2 + wx2 - wy2) + 4.0 * wx2 * wy2;
  const double inner = 0.5 * (-g2 + wy2 - wx2 + std::sqrt(disc));
  return std::sqrt(std::max(inner, 0.0));
}

bool saddle_exists(const TrapConfig& trap) {
  const double ig = trap.gaussian_fraction();
  return ig - 2.0 * std::sqrt(ig * trap.laguerre_fraction) < 0.0;
}

std::optional<double> threshold(const TrapConfig& trap, const DerivedParams& derived) {
  if (!saddle_exists(trap)) return std::nullopt;
  return threshold_closed_form(derived.omega_sq_x, derived.omega_sq_y, trap.gas_damping);
}

Eigen::Matrix4d monodromy(const TrapConfig& trap, const DerivedParams& derived, double omega,
                          double gamma, int steps_per_period) {
  if (!(omega > 0.0)) throw std::invalid_argument("monodromy: rotation rate must be > 0");
  if (steps_per_period < 400)
    throw std::invalid_argument("monodromy: at least 400 steps per period required, got " +
                                std::to_string(steps_per_period));
  TrapConfig rotating = trap;
  rotating.rotation_rate = omega;
  const double period = constants::pi / omega;
  const double dt = period / steps_per_period;
  const double scale = 2.0 * derived.v0 / derived.mass;

  auto rhs = [&](double t, const Eigen::Matrix4d& y) -> Eigen::Matrix4d {
    const Eigen::Matrix2d s = scale * stiffness(t, rotating).quadratic_form();
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 1) = 1.0;
    a(2, 3) = 1.0;
    a(1, 0) = -s(0, 0);
    a(1, 2) = -s(0, 1);
    a(3, 0) = -s(1, 0);
    a(3, 2) = -s(1, 1);
    a(1, 1) = -gamma;
    a(3, 3) = -gamma;
    return a * y;
  };

  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int i = 0; i < steps_per_period; ++i) {
    m = rk4_step(m, i * dt, dt, rhs);
    if (!m.allFinite())
      throw std::runtime_error("monodromy: integration diverged with step " + std::to_string(dt));
  }
  return m;
}

StabilityReport floquet(const TrapConfig& trap, const DerivedParams& derived, double omega,
                        double gamma, int steps_per_period) {
  StabilityReport rep;
  rep.threshold_omega0 = threshold(trap, derived).value_or(0.0);
  rep.period = constants::pi / omega;
  const Eigen::Matrix4d m = monodromy(trap, derived, omega, gamma, steps_per_period);
  rep.monodromy_determinant = m.determinant();

  // velocities in units of the curvature frequency keep M well conditioned
  const double w = std::sqrt(2.0 * derived.v0 / derived.mass);
  const Eigen::Vector4d d(1.0, w, 1.0, w);
  const Eigen::Matrix4d balanced = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
  Eigen::EigenSolver<Eigen::Matrix4d> es(balanced, false);
  double max_mod = 0.0;
  std::vector<double> freqs;
  for (int i = 0; i < 4; ++i) {
    const std::complex<double> mu = es.eigenvalues()(i);
    rep.floquet_multipliers[i] = mu;
    max_mod = std::max(max_mod, std::abs(mu));
    freqs.push_back(std::abs(std::arg(mu)) / rep.period);
  }
  rep.is_stable = max_mod <= 1.0 + 1e-6;

  // Multipliers come in conjugate pairs, so the folded frequencies appear twice.
  std::sort(freqs.begin(), freqs.end());
  rep.mode_frequencies = {freqs[0], freqs[2]};
  rep.beating_frequency = 0.5 * (freqs[0] + freqs[2]);
  return rep;
}

} // namespace saddle
