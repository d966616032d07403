#pragma once

#include <complex>

#include <Eigen/Core>

#include "saddle/params.hpp"

namespace saddle {

/// Dimensionless stiffness of the rotating saddle,
///   V(x, y, t) = v0 (kxx x^2 + kyy y^2 - kxy x y).
/// kxx + kyy = 2 I_G at all times.
struct StiffnessMatrix {
  double kxx = 0.0; // k-(t)
  double kyy = 0.0; // k+(t)
  double kxy = 0.0; // k_xy(t)
  double time = 0.0;

  /// Symmetric matrix S with V = v0 r^T S r, so the Hessian is 2 v0 S.
  Eigen::Matrix2d quadratic_form() const {
    Eigen::Matrix2d s;
    s << kxx, -0.5 * kxy, -0.5 * kxy, kyy;
    return s;
  }
};

StiffnessMatrix stiffness(double t, const TrapConfig& trap);

struct ForceCurvature {
  Eigen::Vector2d force;   // N
  Eigen::Matrix2d hessian; // N/m
};

/// Exact gradient and Hessian of the quadratic potential at `position` [m].
ForceCurvature force_and_curvature(const Eigen::Vector2d& position, double t,
                                   const TrapConfig& trap, const DerivedParams& derived);

/// Cylindrical sample point for the paraxial field.
struct FieldPoint {
  double r = 0.0;   // m
  double phi = 0.0; // rad
  double z = 0.0;   // m
};

struct FieldSample {
  FieldPoint point;
  double intensity = 0.0; // |E_tw / E0|^2 [1/m^2]
};

/// Normalised paraxial Laguerre-Gauss mode LG_{0,l} (l = 0 or +-2).
/// Each mode integrates to unit power over the transverse plane.
std::complex<double> lg_mode(int l, const FieldPoint& p, const TrapConfig& trap);

/// |E_tw / E0|^2 for the three-mode superposition at relative phase theta.
/// Integrates to 1 over a transverse plane. Units 1/m^2.
double field_intensity(const FieldPoint& p, double theta, const TrapConfig& trap);

FieldSample sample_field(const FieldPoint& p, double theta, const TrapConfig& trap);

/// Optical dipole potential -Re{alpha}/4 |E|^2 [J] from the full field.
double optical_potential(const FieldPoint& p, double theta, const TrapConfig& trap,
                         const DerivedParams& derived);

/// Displacement scale below which the quadratic expansion holds,
/// w0 / sqrt(1 + 2 sqrt(I_L / I_G)). Throws when I_G = 0.
double characteristic_length(const TrapConfig& trap);

/// Energy barrier [J] between the origin and the highest point of the full
/// optical potential along the stable (y) axis at theta = 0, found by a 1-D
/// search over the field profile. Zero when no barrier exists.
double trap_depth(const TrapConfig& trap, const DerivedParams& derived);

} // namespace saddle
