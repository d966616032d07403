#include "saddle/metrology.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

#include "saddle/integrator.hpp"

namespace saddle {

std::array<double, 2> force_units(const QuadratureScales& scales) {
  return {constants::hbar * scales.frequency[0] / scales.position[0],
          constants::hbar * scales.frequency[1] / scales.position[1]};
}

SensitivitySet sensitivities(const TrapSchedule& schedule, const PhysicalSetup& setup,
                             double step, std::size_t sample_stride) {
  const std::vector<SegmentPlan> plans = plan_segments(schedule, setup, step);
  const std::size_t stride = std::max<std::size_t>(sample_stride, 1);
  using Sens = Eigen::Matrix<double, 4, 2>;

  SensitivitySet out;
  const QuadratureScales sc =
      derive(setup.particle, setup.trap, setup.reference).scales(setup.reference);
  out.force_unit = force_units(sc);
  Sens forcing = Sens::Zero();
  forcing(kPx, 0) = sc.frequency[0];
  forcing(kPy, 1) = sc.frequency[1];

  Sens s = Sens::Zero();
  auto store = [&](double t) {
    out.times.push_back(t);
    out.s_x.push_back(s.col(0));
    out.s_y.push_back(s.col(1));
  };
  store(0.0);
  std::size_t k = 0;
  for (std::size_t si = 0; si < plans.size(); ++si) {
    const SegmentPlan& plan = plans[si];
    auto rhs = [&](double t, const Sens& y) -> Sens { return plan.model.drift(t) * y + forcing; };
    for (std::size_t i = 0; i < plan.steps; ++i) {
      s = rk4_step(s, plan.t0 + static_cast<double>(i) * plan.dt, plan.dt, rhs);
      ++k;
      if (k % stride == 0 || (si + 1 == plans.size() && i + 1 == plan.steps))
        store(plan.t0 + static_cast<double>(i + 1) * plan.dt);
    }
  }
  return out;
}

Eigen::Matrix2d qfim(const Vec4& s_x, const Vec4& s_y, const Mat4& cov) {
  Eigen::FullPivLU<Mat4> lu(cov);
  if (!lu.isInvertible()) throw std::invalid_argument("qfim: covariance is singular");
  Eigen::Matrix<double, 4, 2> s;
  s << s_x, s_y;
  const Eigen::Matrix2d f = 2.0 * s.transpose() * lu.solve(s);
  return 0.5 * (f + f.transpose());
}

ForceBound force_bound(const Vec4& s_x, const Vec4& s_y, const Mat4& cov, double time,
                       const std::array<double, 2>& force_unit) {
  ForceBound b;
  b.time = time;
  b.qfim = qfim(s_x, s_y, cov);
  const double inf = std::numeric_limits<double>::infinity();
  const double fxx = b.qfim(0, 0), fyy = b.qfim(1, 1), fxy = b.qfim(0, 1);
  const double det = fxx * fyy - fxy * fxy;
  double var_x = inf, var_y = inf;
  if (fxx > 0.0 && fyy > 0.0 && det > 1e-12 * fxx * fyy) {
    var_x = fyy / det;
    var_y = fxx / det;
  } else if (fxy == 0.0) {
    if (fxx > 0.0) var_x = 1.0 / fxx;
    if (fyy > 0.0) var_y = 1.0 / fyy;
  }
  b.min_force_x = std::sqrt(var_x) * force_unit[0];
  b.min_force_y = std::sqrt(var_y) * force_unit[1];
  return b;
}

std::vector<ForceBound> force_bounds(const SensitivitySet& sens, const Trajectory& traj) {
  if (sens.times.size() != traj.samples.size())
    throw std::invalid_argument("force_bounds: sensitivity and trajectory grids differ");
  std::vector<ForceBound> out;
  out.reserve(sens.times.size());
  for (std::size_t i = 0; i < sens.times.size(); ++i) {
    if (std::abs(sens.times[i] - traj.samples[i].time) > 1e-9 * std::max(1e-9, sens.times[i]))
      throw std::invalid_argument("force_bounds: sample times differ");
    out.push_back(force_bound(sens.s_x[i], sens.s_y[i], traj.samples[i].cov, sens.times[i],
                              sens.force_unit));
  }
  return out;
}

} // namespace saddle
