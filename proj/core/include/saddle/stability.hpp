#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "saddle/params.hpp"

namespace saddle {

struct StabilityReport {
  double threshold_omega0 = 0.0; // rad/s; 0 when the trap needs no rotation
  bool is_stable = false;
  std::array<std::complex<double>, 4> floquet_multipliers{};
  std::vector<double> mode_frequencies; // rad/s, folded into [0, pi / T]
  double beating_frequency = 0.0;       // rad/s
  double period = 0.0;                  // T = pi / Omega
  double monodromy_determinant = 0.0;
};

/// Closed-form rotation threshold
///   Omega0^2 = (-g^2 + wy^2 - wx^2 + sqrt((g^2 + wx^2 - wy^2)^2 + 4 wx^2 wy^2)) / 2
/// with wx^2, wy^2 the curvature magnitudes along the anti-trapping and
/// trapping axes at theta = 0.
double threshold_closed_form(double omega_sq_x, double omega_sq_y, double gamma);

/// Rotation threshold for a configured trap, or nullopt when I_L <= 0.2 and
/// the potential is not a saddle (statically stable, no rotation needed).
std::optional<double> threshold(const TrapConfig& trap, const DerivedParams& derived);

/// True when a saddle forms at theta = 0, i.e. k-(0) = I_G - 2 sqrt(I_G I_L) < 0.
bool saddle_exists(const TrapConfig& trap);

/// One-period state-transition matrix of the classical transverse equations
///   r'' = -(2 v0 / m) S(t) r - gamma r'
/// in coordinates (x, v_x, y, v_y), integrated with fixed-step RK4.
Eigen::Matrix4d monodromy(const TrapConfig& trap, const DerivedParams& derived, double omega,
                          double gamma, int steps_per_period = 800);

/// Floquet analysis at rotation rate `omega`. Stable iff every multiplier has
/// modulus <= 1 + 1e-6.
StabilityReport floquet(const TrapConfig& trap, const DerivedParams& derived, double omega,
                        double gamma, int steps_per_period = 800);

} // namespace saddle
