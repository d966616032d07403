#include "saddle/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace saddle {

Mat4 symplectic_form() {
  Mat4 j = Mat4::Zero();
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  j(2, 3) = 1.0;
  j(3, 2) = -1.0;
  return j;
}

GaussianState thermal_state(double n_x, double n_y) {
  if (n_x < 0.0 || n_y < 0.0) throw std::invalid_argument("thermal_state: occupation < 0");
  GaussianState s;
  s.cov = Vec4(n_x + 0.5, n_x + 0.5, n_y + 0.5, n_y + 0.5).asDiagonal();
  return s;
}

std::array<double, 2> symplectic_eigenvalues(const Mat4& cov) {
  // Eigenvalues of J cov are +-i nu.
  Eigen::EigenSolver<Mat4> es(symplectic_form() * cov, false);
  std::array<double, 4> nu{};
  for (int i = 0; i < 4; ++i) nu[i] = std::abs(es.eigenvalues()(i).imag());
  std::sort(nu.begin(), nu.end());
  return {0.5 * (nu[0] + nu[1]), 0.5 * (nu[2] + nu[3])};
}

double roundoff_scale(const Mat4& cov) {
  const double s = cov.cwiseAbs().maxCoeff();
  return 64.0 * std::numeric_limits<double>::epsilon() * s * s;
}

namespace {

// A relative perturbation eps in the entries moves det(cov) by about
// det * eps * |cov| * |cov^-1|, and |cov^-1| ~ |cov| for a state near the
// uncertainty bound, so the relative accuracy of det is roundoff_scale.
bool determinant_resolved(const Mat4& cov) { return roundoff_scale(cov) < 1e-2; }

} // namespace

double purity(const GaussianState& s) {
  const double det = s.cov.determinant();
  if (!determinant_resolved(s.cov)) return std::numeric_limits<double>::quiet_NaN();
  if (!(det > 0.0)) throw PhysicalityError("purity: covariance not positive definite", s.time);
  return 1.0 / (4.0 * std::sqrt(det));
}

double log_negativity(const GaussianState& s) {
  const auto& v = s.cov;
  const double det_a = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
  const double det_b = v(2, 2) * v(3, 3) - v(2, 3) * v(3, 2);
  const double det_c = v(0, 2) * v(1, 3) - v(0, 3) * v(1, 2);
  const double det = v.determinant();
  if (!determinant_resolved(v)) return std::numeric_limits<double>::quiet_NaN();
  const double delta = det_a + det_b - 2.0 * det_c;
  double disc = delta * delta - 4.0 * det;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, delta * delta))
      throw PhysicalityError("log_negativity: negative discriminant", s.time);
    disc = 0.0;
  }
  // nu-^2 nu+^2 = det; dividing avoids cancellation in delta - sqrt(disc).
  const double nu_plus_sq = 0.5 * (delta + std::sqrt(disc));
  const double nu_minus = std::sqrt(det / nu_plus_sq);
  return std::max(0.0, -std::log(2.0 * nu_minus));
}

void check_physical(const GaussianState& s, double tol) {
  const double scale = s.cov.cwiseAbs().maxCoeff();
  if (!s.cov.allFinite() || !s.mean.allFinite())
    throw PhysicalityError("non-finite moments", s.time);
  if ((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw PhysicalityError("covariance not symmetric", s.time);
  for (int i = 0; i < 4; ++i)
    if (!(s.cov(i, i) > 0.0)) throw PhysicalityError("non-positive variance", s.time);
  const double nu = symplectic_eigenvalues(s.cov)[0];
  const double slack = tol + roundoff_scale(s.cov) / std::max(nu, 0.5);
  if (nu < 0.5 - slack)
    throw PhysicalityError("symplectic eigenvalue " + std::to_string(nu) + " below 1/2", s.time);
}

Diagnostics uncertainties(const GaussianState& s, const QuadratureScales& scales,
                          double particle_radius) {
  Diagnostics d;
  d.purity = purity(s);
  d.log_negativity = log_negativity(s);
  d.delta_x = std::sqrt(s.cov(kX, kX));
  d.delta_p_x = std::sqrt(s.cov(kPx, kPx));
  d.delta_y = std::sqrt(s.cov(kY, kY));
  d.delta_p_y = std::sqrt(s.cov(kPy, kPy));
  d.delta_x_over_radius = d.delta_x * scales.position[0] / particle_radius;
  d.delta_p_x_over_zpf = d.delta_p_x * std::sqrt(2.0);
  const double vacuum = 1.0 / std::sqrt(2.0) - 1e-9;
  d.squeezed_x = d.delta_x < vacuum;
  d.squeezed_p = d.delta_p_x < vacuum;
  return d;
}

} // namespace saddle
