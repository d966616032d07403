#include <benchmark/benchmark.h>

#include "saddle/integrator.hpp"
#include "saddle/monitor.hpp"
#include "saddle/noise.hpp"
#include "saddle/scenario.hpp"
#include "saddle/stability.hpp"

using namespace saddle;

namespace {

struct Fixture {
  PhysicalSetup setup;
  DerivedParams derived;
  double omega = 0.0;
  MomentModel model;
  GaussianState state;

  Fixture() {
    setup.trap.laguerre_fraction = 0.9;
    derived = derive(setup.particle, setup.trap, setup.reference);
    omega = 4.5 * threshold_for(setup, 0.9);
    setup.trap.rotation_rate = omega;
    model = make_model(setup.trap, derived, setup.reference);
    state = thermal_state(setup.reference.occupation_x, setup.reference.occupation_y);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_MomentStep(benchmark::State& st) {
  const Fixture& f = fixture();
  const double dt = 1e-8;
  auto rhs = [&](double t, const MomentVector& v) { return rhs_unconditional(v, t, f.model); };
  MomentVector y = pack(f.state);
  double t = 0.0;
  for (auto _ : st) {
    y = rk4_step(y, t, dt, rhs);
    t += dt;
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_MomentStep);

void BM_Floquet(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(floquet(f.setup.trap, f.derived, f.omega, 0.0));
}
BENCHMARK(BM_Floquet);

void BM_ConditionalStep(benchmark::State& st) {
  const Fixture& f = fixture();
  MeasurementModel meas;
  meas.efficiency = 0.3;
  FeedbackLaw law;
  law.enabled = true;
  law.gain_momentum = {1e4, 1e4};
  GaussianState g = f.state;
  std::uint64_t k = 0;
  for (auto _ : st) {
    const NoiseDraw z{standard_normal(1, 0, k), standard_normal(1, 1, k)};
    g = step_conditional(g, 1e-8, f.model, meas, law, z);
    ++k;
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_ConditionalStep);

} // namespace

BENCHMARK_MAIN();
