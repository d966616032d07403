#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "saddle/dynamics.hpp"

namespace saddle {

/// Homodyne-style continuous position monitoring.
struct MeasurementModel {
  double efficiency = 0.3; // eta
  /// Measurement rate Lambda per axis [1/(m^2 s)]. Unset means the recoil
  /// localization rate of the current trap segment.
  std::optional<std::array<double, 2>> rate;
  std::uint64_t seed = 0;
};

/// Linear feedback u_q = gain_position_q <q> + gain_momentum_q <p_q> in SI
/// units, applied as the force -u_q.
struct FeedbackLaw {
  bool enabled = false;
  std::array<double, 2> gain_position{}; // N/m
  std::array<double, 2> gain_momentum{}; // 1/s
};

/// Standard-normal draws for one step; dzeta_q = zeta_q sqrt(dt).
struct NoiseDraw {
  double zeta_x = 0.0;
  double zeta_y = 0.0;
};

void validate(const MeasurementModel& m);
void validate(const FeedbackLaw& f);

using MeasurementMatrix = Eigen::Matrix<double, 2, 4>;

/// Measurement matrix in internal units: rows pick X and Y with strength
/// sqrt(2 eta Lambda_q) q_scale_q [1/sqrt(s)].
MeasurementMatrix measurement_matrix(const MomentModel& model, const MeasurementModel& meas);

/// Feedback force components (u_x, u_y) [N] for an estimated state. The
/// conditional mean is the estimate.
std::array<double, 2> feedback_force(const GaussianState& estimate, const FeedbackLaw& law,
                                     const QuadratureScales& scales);

/// Riccati right-hand side A cov + cov A^T + D - cov H^T H cov. With
/// `information` false the last term is dropped and the unconditional
/// covariance equations remain.
Mat4 riccati_rhs(const Mat4& cov, double t, const MomentModel& model, const MeasurementMatrix& h,
                 bool information = true);

/// Drift matrix of the conditional means including the feedback loop.
Mat4 mean_drift(double t, const MomentModel& model, const FeedbackLaw& law);

/// One step of the conditional dynamics: means by an explicit step with the
/// innovation kick cov H^T zeta sqrt(dt), covariance by RK4 on the Riccati
/// equation. With eta = 0 and feedback off this is one unconditional RK4 step.
GaussianState step_conditional(const GaussianState& state, double dt, const MomentModel& model,
                               const MeasurementModel& meas, const FeedbackLaw& law,
                               const NoiseDraw& noise);

/// Conditional trajectory over a schedule. Noise for global step k on axis a
/// is standard_normal(meas.seed, a, k).
Trajectory integrate_conditional(const GaussianState& initial, const TrapSchedule& schedule,
                                 double step, const PhysicalSetup& setup,
                                 const MeasurementModel& meas, const FeedbackLaw& law,
                                 const IntegrateOptions& options = {});

struct RecoveryScenario {
  PhysicalSetup setup;
  double rotation_rate = 0.0; // rad/s, must exceed the threshold
  MeasurementModel measurement;
  FeedbackLaw feedback;
  double time_cap = 5e-3; // s
  double step = 0.0;      // 0 = automatic
  std::size_t sample_stride = 1;
};

struct RecoveryReport {
  bool success = false;
  double settle_time = 0.0;  // s; start of the first window that met the criterion
  double final_energy = 0.0; // period-averaged, quanta of the internal units
  double steady_energy = 0.0;
  /// Largest |<x>| [m] within the last evaluated window.
  double window_max_displacement = 0.0;
  Trajectory trajectory;
};

/// Mean energy in internal units, (|d|^2 + tr cov) / 2.
double mean_energy(const GaussianState& s);
/// Energy held in the covariance alone, tr cov / 2.
double covariance_energy(const GaussianState& s);

/// Starts from the reference-tweezer thermal state displaced by
/// `initial_displacement` [m] along x and runs monitoring plus feedback.
/// Energies are averaged over windows of one rotation half-period pi/Omega;
/// success when the window-averaged mean energy is at most 3x the
/// window-averaged covariance energy. Hitting the time cap is reported, not
/// thrown.
RecoveryReport recover(double initial_displacement, const RecoveryScenario& scenario);

} // namespace saddle
