#include "saddle/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saddle/integrator.hpp"
#include "saddle/noise.hpp"

namespace saddle {

void validate(const MeasurementModel& m) {
  if (!(m.efficiency >= 0.0 && m.efficiency <= 1.0))
    throw ConfigError("measurement.efficiency: must lie in [0, 1]");
  if (m.rate)
    for (double r : *m.rate)
      if (!(r >= 0.0)) throw ConfigError("measurement.rate: must be >= 0");
}

void validate(const FeedbackLaw& f) {
  if (!f.enabled) return;
  for (int i = 0; i < 2; ++i) {
    if (!(f.gain_position[i] >= 0.0)) throw ConfigError("feedback.gain_position: must be >= 0");
    if (!(f.gain_momentum[i] >= 0.0)) throw ConfigError("feedback.gain_momentum: must be >= 0");
  }
}

MeasurementMatrix measurement_matrix(const MomentModel& model, const MeasurementModel& meas) {
  const std::array<double, 2> lambda =
      meas.rate.value_or(std::array<double, 2>{model.derived.localization_rate_x,
                                               model.derived.localization_rate_y});
  MeasurementMatrix h = MeasurementMatrix::Zero();
  h(0, kX) = std::sqrt(2.0 * meas.efficiency * lambda[0]) * model.scales.position[0];
  h(1, kY) = std::sqrt(2.0 * meas.efficiency * lambda[1]) * model.scales.position[1];
  return h;
}

std::array<double, 2> feedback_force(const GaussianState& estimate, const FeedbackLaw& law,
                                     const QuadratureScales& scales) {
  if (!law.enabled) return {0.0, 0.0};
  std::array<double, 2> u{};
  const int q[2] = {kX, kY};
  const int p[2] = {kPx, kPy};
  for (int i = 0; i < 2; ++i)
    u[i] = law.gain_position[i] * estimate.mean(q[i]) * scales.position[i] +
           law.gain_momentum[i] * estimate.mean(p[i]) * scales.momentum[i];
  return u;
}

Mat4 riccati_rhs(const Mat4& cov, double t, const MomentModel& model, const MeasurementMatrix& h,
                 bool information) {
  const Mat4 a = model.drift(t);
  Mat4 d = a * cov + cov * a.transpose() + model.diffusion_matrix();
  if (information) {
    const Eigen::Matrix<double, 4, 2> k = cov * h.transpose();
    d.noalias() -= k * k.transpose();
  }
  return 0.5 * (d + d.transpose());
}

Mat4 mean_drift(double t, const MomentModel& model, const FeedbackLaw& law) {
  Mat4 a = model.drift(t);
  if (!law.enabled) return a;
  const auto& sc = model.scales;
  a(kPx, kX) -= law.gain_position[0] * sc.position[0] / sc.momentum[0];
  a(kPy, kY) -= law.gain_position[1] * sc.position[1] / sc.momentum[1];
  a(kPx, kPx) -= law.gain_momentum[0];
  a(kPy, kPy) -= law.gain_momentum[1];
  return a;
}

namespace {

GaussianState step_with(const GaussianState& state, double dt, const MomentModel& model,
                        const MeasurementMatrix& h, const FeedbackLaw& law,
                        const NoiseDraw& noise) {
  const double t = state.time;
  auto mean_rhs = [&](double tt, const Vec4& r) -> Vec4 { return mean_drift(tt, model, law) * r; };
  auto cov_rhs = [&](double tt, const Mat4& c) -> Mat4 { return riccati_rhs(c, tt, model, h); };

  GaussianState next;
  next.time = t + dt;
  next.mean = rk4_step(state.mean, t, dt, mean_rhs);
  if (h.squaredNorm() > 0.0) {
    const Eigen::Vector2d dzeta(noise.zeta_x * std::sqrt(dt), noise.zeta_y * std::sqrt(dt));
    next.mean.noalias() += state.cov * h.transpose() * dzeta;
  }
  next.cov = rk4_step(state.cov, t, dt, cov_rhs);
  return next;
}

} // namespace

GaussianState step_conditional(const GaussianState& state, double dt, const MomentModel& model,
                               const MeasurementModel& meas, const FeedbackLaw& law,
                               const NoiseDraw& noise) {
  GaussianState next = step_with(state, dt, model, measurement_matrix(model, meas), law, noise);
  check_physical(next);
  return next;
}

Trajectory integrate_conditional(const GaussianState& initial, const TrapSchedule& schedule,
                                 double step, const PhysicalSetup& setup,
                                 const MeasurementModel& meas, const FeedbackLaw& law,
                                 const IntegrateOptions& options) {
  validate(meas);
  validate(law);
  const std::vector<SegmentPlan> plans = plan_segments(schedule, setup, step, initial.time);
  Trajectory traj;
  traj.schedule = schedule;
  traj.step = resolve_step(schedule, setup, step);
  const std::size_t stride = std::max<std::size_t>(options.sample_stride, 1);

  check_physical(initial);
  traj.samples.push_back(initial);
  if (options.observer) options.observer(initial);

  GaussianState s = initial;
  std::uint64_t k = 0;
  for (std::size_t si = 0; si < plans.size(); ++si) {
    const SegmentPlan& plan = plans[si];
    const MeasurementMatrix h = measurement_matrix(plan.model, meas);
    for (std::size_t i = 0; i < plan.steps; ++i) {
      const NoiseDraw noise{standard_normal(meas.seed, 0, k), standard_normal(meas.seed, 1, k)};
      s = step_with(s, plan.dt, plan.model, h, law, noise);
      s.time = plan.t0 + static_cast<double>(i + 1) * plan.dt;
      ++k;
      if (options.observer) options.observer(s);
      const bool last = si + 1 == plans.size() && i + 1 == plan.steps;
      if (k % stride == 0 || last) {
        check_physical(s);
        traj.samples.push_back(s);
      }
    }
  }
  return traj;
}

double mean_energy(const GaussianState& s) {
  return 0.5 * (s.mean.squaredNorm() + s.cov.trace());
}

double covariance_energy(const GaussianState& s) { return 0.5 * s.cov.trace(); }

RecoveryReport recover(double initial_displacement, const RecoveryScenario& scenario) {
  const PhysicalSetup& setup = scenario.setup;
  if (!(scenario.rotation_rate > 0.0)) throw ConfigError("recovery.rotation_rate: must be > 0");
  if (!(scenario.time_cap > 0.0)) throw ConfigError("recovery.time_cap: must be > 0");
  validate(scenario.measurement);
  validate(scenario.feedback);

  TrapSchedule schedule;
  schedule.segments.push_back({scenario.time_cap, scenario.rotation_rate,
                               setup.trap.laguerre_fraction, setup.trap.power});
  const std::vector<SegmentPlan> plans = plan_segments(schedule, setup, scenario.step);
  const SegmentPlan& plan = plans.front();
  const MeasurementMatrix h = measurement_matrix(plan.model, scenario.measurement);

  GaussianState s =
      thermal_state(setup.reference.occupation_x, setup.reference.occupation_y);
  s.mean(kX) = initial_displacement / plan.model.scales.position[0];

  RecoveryReport rep;
  rep.trajectory.schedule = schedule;
  rep.trajectory.step = plan.dt;
  rep.trajectory.samples.push_back(s);
  const std::size_t stride = std::max<std::size_t>(scenario.sample_stride, 1);

  const double window = constants::pi / scenario.rotation_rate;
  const auto per_window =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / plan.dt)));
  const double q_scale = plan.model.scales.position[0];
  double acc_mean = 0.0, acc_cov = 0.0, max_x = 0.0;
  std::size_t in_window = 0;
  double window_start = 0.0;

  for (std::size_t k = 0; k < plan.steps; ++k) {
    const NoiseDraw noise{standard_normal(scenario.measurement.seed, 0, k),
                          standard_normal(scenario.measurement.seed, 1, k)};
    acc_mean += mean_energy(s);
    acc_cov += covariance_energy(s);
    max_x = std::max(max_x, std::abs(s.mean(kX)) * q_scale);
    ++in_window;
    s = step_with(s, plan.dt, plan.model, h, scenario.feedback, noise);
    s.time = static_cast<double>(k + 1) * plan.dt;
    const bool store = (k + 1) % stride == 0;
    if (store) {
      check_physical(s);
      rep.trajectory.samples.push_back(s);
    }
    if (in_window == per_window) {
      rep.final_energy = acc_mean / static_cast<double>(in_window);
      rep.steady_energy = acc_cov / static_cast<double>(in_window);
      rep.window_max_displacement = max_x;
      if (rep.final_energy <= 3.0 * rep.steady_energy) {
        rep.success = true;
        rep.settle_time = window_start;
        if (!store) {
          check_physical(s);
          rep.trajectory.samples.push_back(s);
        }
        return rep;
      }
      acc_mean = acc_cov = max_x = 0.0;
      in_window = 0;
      window_start = s.time;
    }
  }
  check_physical(s);
  if (rep.trajectory.samples.back().time != s.time) rep.trajectory.samples.push_back(s);
  return rep;
}

} // namespace saddle
