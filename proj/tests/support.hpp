#pragma once

#include <cmath>

#include "saddle/dynamics.hpp"
#include "saddle/stability.hpp"

namespace support {

inline saddle::PhysicalSetup baseline_setup(double laguerre_fraction = 0.9) {
  saddle::PhysicalSetup s;
  s.trap.laguerre_fraction = laguerre_fraction;
  return s;
}

inline saddle::DerivedParams derived_of(const saddle::PhysicalSetup& s) {
  return saddle::derive(s.particle, s.trap, s.reference);
}

inline double omega0_of(const saddle::PhysicalSetup& s) {
  return *saddle::threshold(s.trap, derived_of(s));
}

inline saddle::TrapSchedule one_segment(const saddle::PhysicalSetup& s, double duration,
                                        double omega) {
  saddle::TrapSchedule sched;
  sched.segments.push_back({duration, omega, s.trap.laguerre_fraction, s.trap.power});
  return sched;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace support
