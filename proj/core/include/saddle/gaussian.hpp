#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "saddle/params.hpp"

namespace saddle {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Phase-space ordering used everywhere: (x, p_x, y, p_y).
enum Quadrature : int { kX = 0, kPx = 1, kY = 2, kPy = 3 };

/// Thrown when a covariance stops satisfying the uncertainty relation.
class PhysicalityError : public std::runtime_error {
public:
  PhysicalityError(const std::string& what, double time)
      : std::runtime_error(what + " at t = " + std::to_string(time) + " s"), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

/// Two-mode Gaussian state in dimensionless quadratures (vacuum cov = I/2).
struct GaussianState {
  Vec4 mean = Vec4::Zero();
  Mat4 cov = 0.5 * Mat4::Identity();
  double time = 0.0; // s
};

struct Diagnostics {
  double purity = 1.0;
  double log_negativity = 0.0;
  double delta_x = 0.0, delta_p_x = 0.0; // sqrt of variances, quadrature units
  double delta_y = 0.0, delta_p_y = 0.0;
  double delta_x_over_radius = 0.0;      // SI position spread / particle radius
  double delta_p_x_over_zpf = 0.0;       // SI momentum spread / p_zpf (1 for vacuum)
  bool squeezed_x = false;
  bool squeezed_p = false;
};

/// Symplectic form for the (x, p_x, y, p_y) ordering.
Mat4 symplectic_form();

GaussianState thermal_state(double n_x, double n_y);

/// Symplectic eigenvalues, ascending. Vacuum gives (1/2, 1/2).
std::array<double, 2> symplectic_eigenvalues(const Mat4& cov);

/// 64 eps max|cov|^2: the attainable absolute accuracy of a symplectic
/// eigenvalue of order one when the covariance has entries of size max|cov|.
double roundoff_scale(const Mat4& cov);

/// Tr(rho^2) = 1 / (4 sqrt(det cov)). NaN once roundoff_scale(cov) exceeds
/// 1e-2, where det cov is no longer resolved in double precision.
double purity(const GaussianState& s);

/// Logarithmic negativity between the x and y modes; NaN under the same
/// condition as purity.
double log_negativity(const GaussianState& s);

/// Throws PhysicalityError when the covariance is asymmetric, has a
/// non-positive diagonal, or a symplectic eigenvalue below 1/2 - tol.
/// The tolerance grows with roundoff_scale so that highly expanded states
/// are not rejected on round-off alone.
void check_physical(const GaussianState& s, double tol = 1e-9);

Diagnostics uncertainties(const GaussianState& s, const QuadratureScales& scales,
                          double particle_radius);

} // namespace saddle
