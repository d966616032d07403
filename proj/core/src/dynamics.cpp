#include "saddle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "saddle/integrator.hpp"
#include "saddle/potential.hpp"
#include "saddle/stability.hpp"

namespace saddle {

namespace {
enum : int {
  kMx = 0, kMpx, kMy, kMpy,
  kVx, kVpx, kVy, kVpy,
  kCxy, kCpxpy, kCxpx, kCypy, kCxpy, kCypx
};
} // namespace

MomentVector pack(const GaussianState& s) {
  MomentVector m;
  m.head<4>() = s.mean;
  const auto& c = s.cov;
  m(kVx) = c(kX, kX);
  m(kVpx) = c(kPx, kPx);
  m(kVy) = c(kY, kY);
  m(kVpy) = c(kPy, kPy);
  m(kCxy) = c(kX, kY);
  m(kCpxpy) = c(kPx, kPy);
  m(kCxpx) = c(kX, kPx);
  m(kCypy) = c(kY, kPy);
  m(kCxpy) = c(kX, kPy);
  m(kCypx) = c(kY, kPx);
  return m;
}

GaussianState unpack(const MomentVector& m, double time) {
  GaussianState s;
  s.time = time;
  s.mean = m.head<4>();
  auto& c = s.cov;
  c(kX, kX) = m(kVx);
  c(kPx, kPx) = m(kVpx);
  c(kY, kY) = m(kVy);
  c(kPy, kPy) = m(kVpy);
  c(kX, kY) = c(kY, kX) = m(kCxy);
  c(kPx, kPy) = c(kPy, kPx) = m(kCpxpy);
  c(kX, kPx) = c(kPx, kX) = m(kCxpx);
  c(kY, kPy) = c(kPy, kY) = m(kCypy);
  c(kX, kPy) = c(kPy, kX) = m(kCxpy);
  c(kY, kPx) = c(kPx, kY) = m(kCypx);
  return s;
}

Eigen::Matrix2d MomentModel::gradient(double t) const {
  const Eigen::Matrix2d hess = 2.0 * derived.v0 * stiffness(t, trap).quadratic_form();
  Eigen::Matrix2d g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = hess(i, j) * scales.position[j] / scales.momentum[i];
  return g;
}

Mat4 MomentModel::drift(double t) const {
  const Eigen::Matrix2d g = gradient(t);
  Mat4 a = Mat4::Zero();
  a(kX, kPx) = kinetic[0];
  a(kY, kPy) = kinetic[1];
  a(kPx, kX) = -g(0, 0);
  a(kPx, kY) = -g(0, 1);
  a(kPy, kX) = -g(1, 0);
  a(kPy, kY) = -g(1, 1);
  return a;
}

Mat4 MomentModel::diffusion_matrix() const {
  Mat4 d = Mat4::Zero();
  d(kPx, kPx) = diffusion[0];
  d(kPy, kPy) = diffusion[1];
  return d;
}

MomentModel make_model(const TrapConfig& trap, const DerivedParams& derived,
                       const ReferenceTweezer& ref) {
  MomentModel m;
  m.trap = trap;
  m.derived = derived;
  m.scales = derived.scales(ref);
  const double hbar2 = constants::hbar * constants::hbar;
  const std::array<double, 2> lambda{derived.localization_rate_x, derived.localization_rate_y};
  for (int i = 0; i < 2; ++i) {
    m.kinetic[i] = m.scales.momentum[i] / (derived.mass * m.scales.position[i]);
    m.diffusion[i] = 2.0 * hbar2 * lambda[i] / (m.scales.momentum[i] * m.scales.momentum[i]);
  }
  return m;
}

MomentVector rhs_unconditional(const MomentVector& m, double t, const MomentModel& model) {
  const Eigen::Matrix2d k = model.gradient(t);
  const double ax = model.kinetic[0];
  const double ay = model.kinetic[1];

  // Covariances of the potential gradient with a phase-space variable:
  //   C(d_x V, a) = k_xx C(X, a) + k_xy C(Y, a), and likewise for y.
  const double cxx = m(kVx), cyy = m(kVy), cxy = m(kCxy);
  const double cxpx = m(kCxpx), cypy = m(kCypy), cxpy = m(kCxpy), cypx = m(kCypx);
  auto grad_x = [&](double c_x_a, double c_y_a) { return k(0, 0) * c_x_a + k(0, 1) * c_y_a; };
  auto grad_y = [&](double c_x_a, double c_y_a) { return k(1, 0) * c_x_a + k(1, 1) * c_y_a; };

  MomentVector d;
  d(kMx) = ax * m(kMpx);
  d(kMy) = ay * m(kMpy);
  d(kMpx) = -(k(0, 0) * m(kMx) + k(0, 1) * m(kMy));
  d(kMpy) = -(k(1, 0) * m(kMx) + k(1, 1) * m(kMy));

  d(kVx) = 2.0 * ax * cxpx;
  d(kVy) = 2.0 * ay * cypy;
  d(kVpx) = -2.0 * grad_x(cxpx, cypx) + model.diffusion[0];
  d(kVpy) = -2.0 * grad_y(cxpy, cypy) + model.diffusion[1];
  d(kCxy) = ax * cypx + ay * cxpy;
  d(kCpxpy) = -(grad_x(cxpy, cypy) + grad_y(cxpx, cypx));
  d(kCxpx) = ax * m(kVpx) - grad_x(cxx, cxy);
  d(kCypy) = ay * m(kVpy) - grad_y(cxy, cyy);
  d(kCxpy) = ax * m(kCpxpy) - grad_y(cxx, cxy);
  d(kCypx) = ay * m(kCpxpy) - grad_x(cxy, cyy);
  return d;
}

double TrapSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

TrapConfig segment_trap(const PhysicalSetup& setup, const TrapSegment& seg) {
  TrapConfig trap = setup.trap;
  trap.rotation_rate = seg.rotation_rate;
  trap.laguerre_fraction = seg.laguerre_fraction;
  trap.power = seg.power;
  return trap;
}

DerivedParams segment_params(const PhysicalSetup& setup, const TrapConfig& trap) {
  DerivedParams d = derive(setup.particle, trap, setup.reference);
  if (setup.recoil_frequency == RecoilFrequency::beating && trap.rotation_rate > 0.0) {
    const StabilityReport rep = floquet(trap, d, trap.rotation_rate, 0.0);
    if (rep.is_stable && rep.beating_frequency > 0.0)
      d = derive(setup.particle, trap, setup.reference, rep.beating_frequency);
  }
  return d;
}

double step_bound(const MomentModel& model) {
  const double f_max = std::max({2.0 * std::abs(model.trap.rotation_rate),
                                 std::sqrt(std::abs(model.derived.omega_sq_x)),
                                 std::sqrt(std::abs(model.derived.omega_sq_y)), 1.0});
  return 2.0 * constants::pi / f_max / 200.0;
}

double resolve_step(const TrapSchedule& schedule, const PhysicalSetup& setup, double step) {
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& seg : schedule.segments) {
    const TrapConfig trap = segment_trap(setup, seg);
    const DerivedParams d = derive(setup.particle, trap, setup.reference);
    bound = std::min(bound, step_bound(make_model(trap, d, setup.reference)));
  }
  if (step <= 0.0) return bound;
  if (step > bound * (1.0 + 1e-12))
    throw ConfigError("step: " + std::to_string(step) + " s exceeds the stability bound " +
                      std::to_string(bound) + " s");
  return step;
}

std::vector<SegmentPlan> plan_segments(const TrapSchedule& schedule, const PhysicalSetup& setup,
                                       double step, double t0) {
  if (schedule.segments.empty()) throw ConfigError("schedule: at least one segment required");
  for (const auto& seg : schedule.segments)
    if (!(seg.duration >= 0.0)) throw ConfigError("schedule: segment duration must be >= 0");
  const double h = resolve_step(schedule, setup, step);

  std::vector<SegmentPlan> plans;
  double t = t0;
  double theta = setup.trap.phase;
  for (const auto& seg : schedule.segments) {
    if (seg.duration == 0.0) continue;
    TrapConfig trap = segment_trap(setup, seg);
    trap.phase = theta - trap.rotation_rate * t;
    SegmentPlan p;
    p.model = make_model(trap, segment_params(setup, trap), setup.reference);
    p.steps = static_cast<std::size_t>(std::ceil(seg.duration / h - 1e-9));
    p.dt = seg.duration / static_cast<double>(p.steps);
    p.t0 = t;
    t += seg.duration;
    theta = trap.phase + trap.rotation_rate * t;
    plans.push_back(std::move(p));
  }
  return plans;
}

Trajectory integrate(const GaussianState& initial, const TrapSchedule& schedule, double step,
                     const PhysicalSetup& setup, const IntegrateOptions& options) {
  const std::vector<SegmentPlan> plans = plan_segments(schedule, setup, step, initial.time);
  Trajectory traj;
  traj.schedule = schedule;
  traj.step = resolve_step(schedule, setup, step);
  const std::size_t stride = std::max<std::size_t>(options.sample_stride, 1);

  check_physical(initial);
  traj.samples.push_back(initial);
  if (options.observer) options.observer(initial);

  MomentVector m = pack(initial);
  std::size_t step_count = 0;
  for (std::size_t si = 0; si < plans.size(); ++si) {
    const SegmentPlan& plan = plans[si];
    auto rhs = [&plan](double tt, const MomentVector& y) {
      return rhs_unconditional(y, tt, plan.model);
    };
    for (std::size_t i = 0; i < plan.steps; ++i) {
      const double t = plan.t0 + static_cast<double>(i) * plan.dt;
      m = rk4_step(m, t, plan.dt, rhs);
      ++step_count;
      const bool last = si + 1 == plans.size() && i + 1 == plan.steps;
      const bool store = step_count % stride == 0 || last;
      if (options.observer || store) {
        GaussianState s = unpack(m, plan.t0 + static_cast<double>(i + 1) * plan.dt);
        if (options.observer) options.observer(s);
        if (store) {
          check_physical(s);
          traj.samples.push_back(std::move(s));
        }
      }
    }
  }
  return traj;
}

} // namespace saddle
