#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "saddle/gaussian.hpp"
#include "saddle/params.hpp"

namespace saddle {

/// Flat moment vector, ordering:
///   0..3   <X>, <Px>, <Y>, <Py>
///   4..7   var X, var Px, var Y, var Py
///   8..13  C(X,Y), C(Px,Py), C(X,Px), C(Y,Py), C(X,Py), C(Y,Px)
using MomentVector = Eigen::Matrix<double, 14, 1>;

MomentVector pack(const GaussianState& s);
GaussianState unpack(const MomentVector& m, double time);

/// Coefficients of the linear moment equations for one trap setting, in
/// internal quadrature units:
///   dX_i/dt  = kinetic_i P_i
///   dP_i/dt  = -sum_j gradient_ij(t) Q_j  (+ external forces)
///   momentum diffusion adds `diffusion_i` to d var(P_i) / dt.
struct MomentModel {
  TrapConfig trap;
  DerivedParams derived;
  QuadratureScales scales;
  std::array<double, 2> kinetic{};
  std::array<double, 2> diffusion{};

  /// kappa_ij = K_ij q_scale_j / p_scale_i with K the SI Hessian.
  Eigen::Matrix2d gradient(double t) const;
  /// Drift matrix A(t) so that d<r>/dt = A <r>.
  Mat4 drift(double t) const;
  Mat4 diffusion_matrix() const;
};

MomentModel make_model(const TrapConfig& trap, const DerivedParams& derived,
                       const ReferenceTweezer& ref);

/// Time derivative of the 14 moments: Hamiltonian flow of the quadratic saddle
/// plus recoil momentum diffusion. Written out equation by equation.
MomentVector rhs_unconditional(const MomentVector& m, double t, const MomentModel& model);

struct TrapSegment {
  double duration = 0.0;      // s
  double rotation_rate = 0.0; // rad/s
  double laguerre_fraction = 0.9;
  double power = 0.070; // W
};

/// Piecewise-constant trap settings. The state is carried across segment
/// boundaries unchanged and the rotation phase is continuous.
struct TrapSchedule {
  std::vector<TrapSegment> segments;
  double total_duration() const;
};

/// The fixed physical inputs shared by every segment.
struct PhysicalSetup {
  ParticleParams particle;
  TrapConfig trap;
  ReferenceTweezer reference;
  RecoilFrequency recoil_frequency = RecoilFrequency::reference;
};

TrapConfig segment_trap(const PhysicalSetup& setup, const TrapSegment& seg);
DerivedParams segment_params(const PhysicalSetup& setup, const TrapConfig& trap);

/// Largest admissible step: 1/200 of the shortest period among the potential
/// modulation (2 Omega) and the curvature frequencies.
double step_bound(const MomentModel& model);

struct Trajectory {
  std::vector<GaussianState> samples;
  TrapSchedule schedule;
  double step = 0.0;
};

struct IntegrateOptions {
  std::size_t sample_stride = 1;
  /// Called after every step (and once for the initial state).
  std::function<void(const GaussianState&)> observer;
};

/// Fixed-step RK4 integration of the unconditional moments over a schedule.
/// `step` = 0 selects the largest admissible step. Throws ConfigError if the
/// step exceeds step_bound for a segment, PhysicalityError if a stored sample
/// violates the uncertainty relation.
Trajectory integrate(const GaussianState& initial, const TrapSchedule& schedule, double step,
                     const PhysicalSetup& setup, const IntegrateOptions& options = {});

/// Resolve an automatic step (0) against every segment of a schedule.
double resolve_step(const TrapSchedule& schedule, const PhysicalSetup& setup, double step);

/// One non-empty schedule segment, ready to integrate: `steps` equal steps of
/// length `dt` starting at `t0`, with the trap phase made continuous.
struct SegmentPlan {
  MomentModel model;
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Validates the schedule, resolves `step` and lays out every segment.
std::vector<SegmentPlan> plan_segments(const TrapSchedule& schedule, const PhysicalSetup& setup,
                                       double step, double t0 = 0.0);

} // namespace saddle
