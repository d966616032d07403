#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "saddle/dynamics.hpp"

namespace saddle {

/// Mean-trajectory sensitivities to constant forces switched on at t = 0.
/// s_x[k], s_y[k] are d<r>/dF in internal quadrature units per unit
/// dimensionless force F = f q_scale / (hbar Omega_ref), so the interaction is
/// -hbar Omega_ref (F_x X + F_y Y).
struct SensitivitySet {
  std::vector<double> times;
  std::vector<Vec4> s_x;
  std::vector<Vec4> s_y;
  /// Newtons per unit dimensionless force, per axis: hbar Omega_ref / q_scale.
  std::array<double, 2> force_unit{};
};

struct ForceBound {
  Eigen::Matrix2d qfim = Eigen::Matrix2d::Zero(); // per unit dimensionless force^2
  double min_force_x = 0.0; // N
  double min_force_y = 0.0; // N
  double time = 0.0;        // s
};

/// Newtons per unit dimensionless force along each axis.
std::array<double, 2> force_units(const QuadratureScales& scales);

/// Integrates ds/dt = A(t) s + Omega_ref e_P over the schedule with the same
/// fixed-step RK4 grid as `integrate`, storing every `sample_stride`-th step.
SensitivitySet sensitivities(const TrapSchedule& schedule, const PhysicalSetup& setup,
                             double step, std::size_t sample_stride = 1);

/// F_ij = 2 s_i^T cov^-1 s_j. The bound on each force is sqrt((F^-1)_ii);
/// a direction the QFIM cannot resolve reports infinity.
Eigen::Matrix2d qfim(const Vec4& s_x, const Vec4& s_y, const Mat4& cov);

ForceBound force_bound(const Vec4& s_x, const Vec4& s_y, const Mat4& cov, double time,
                       const std::array<double, 2>& force_unit);

/// Force bounds along a trajectory whose samples share the sensitivity grid.
/// Pass the conditional trajectory for the measurement-assisted variant.
std::vector<ForceBound> force_bounds(const SensitivitySet& sens, const Trajectory& traj);

} // namespace saddle
