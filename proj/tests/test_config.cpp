#include <doctest.h>

#include <filesystem>
#include <string>

#include "saddle/config.hpp"
#include "saddle/scenario.hpp"

using namespace saddle;

namespace {

const char* kPurity = R"(
scenario = "purity"
seed = 11
duration = 2.0e-4
omega_ratio = 4.5

[trap]
power = 0.05
numerical_aperture = 0.6

[reference]
frequency_x_hz = 120e3
occupation_x = 0.5

[sweep]
laguerre_fractions = [0.5, 0.9]
)";

std::string message_of(const std::string& text, bool json = false) {
  try {
    parse_config_text(text, json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("scenario names") {
  for (auto k : {ScenarioKind::purity, ScenarioKind::expand, ScenarioKind::entangle_map,
                 ScenarioKind::squeeze_metrology, ScenarioKind::feedback_recovery,
                 ScenarioKind::stability_scan})
    CHECK(parse_scenario(scenario_name(k)) == k);
  CHECK(scenario_name(ScenarioKind::entangle_map) == "entangle-map");
  CHECK_THROWS_WITH_AS(parse_scenario("fig9"), doctest::Contains("unknown scenario"), ConfigError);
}

TEST_CASE("TOML config fields") {
  const ScenarioConfig cfg = parse_config_text(kPurity, false);
  CHECK(cfg.scenario == ScenarioKind::purity);
  CHECK(cfg.seed == 11);
  CHECK(cfg.measurement.seed == 11);
  CHECK(cfg.duration == 2e-4);
  CHECK(cfg.setup.trap.power == 0.05);
  CHECK(cfg.setup.reference.frequency_x == doctest::Approx(2 * constants::pi * 120e3));
  CHECK(cfg.setup.reference.frequency_y == doctest::Approx(2 * constants::pi * 150e3));
  CHECK(cfg.setup.reference.occupation_x == 0.5);
  CHECK(cfg.laguerre_fractions == std::vector<double>{0.5, 0.9});
  CHECK(cfg.step == 0.0);
}

TEST_CASE("JSON fallback parses the same config") {
  const char* json = R"({
    "scenario": "purity", "seed": 11, "duration": 2.0e-4, "omega_ratio": 4.5,
    "trap": {"power": 0.05, "numerical_aperture": 0.6},
    "reference": {"frequency_x_hz": 120e3, "occupation_x": 0.5},
    "sweep": {"laguerre_fractions": [0.5, 0.9]}
  })";
  const ScenarioConfig a = parse_config_text(kPurity, false);
  const ScenarioConfig b = parse_config_text(json, true);
  CHECK(a.seed == b.seed);
  CHECK(a.duration == b.duration);
  CHECK(a.setup.trap.power == b.setup.trap.power);
  CHECK(a.setup.reference.frequency_x == b.setup.reference.frequency_x);
  CHECK(a.laguerre_fractions == b.laguerre_fractions);
  CHECK_FALSE(message_of("{ not json", true).empty());
}

TEST_CASE("errors name the offending key") {
  CHECK(message_of(R"(scenario = "nope")").find("unknown scenario") != std::string::npos);
  CHECK(message_of("seed = 1").find("scenario") != std::string::npos);
  std::string bad = kPurity;
  bad += "\n[particle]\nradiu = 1e-9\n";
  CHECK(message_of(bad).find("particle.radiu") != std::string::npos);
  bad = std::string(kPurity) + "\nextra = 3\n";
  CHECK(message_of(bad).find("extra") != std::string::npos);
  bad = std::string(kPurity) + "\n[particle]\nradius = \"big\"\n";
  CHECK(message_of(bad).find("particle.radius") != std::string::npos);
  bad = std::string(kPurity) + "\n[measurement]\nefficiency = 1.5\n";
  CHECK(message_of(bad).find("measurement.efficiency") != std::string::npos);
  bad = std::string(kPurity) + "\n[trap.extra]\nx = 1\n";
  CHECK_FALSE(message_of(bad).empty());
  CHECK(message_of("scenario = \"purity\"\n").find("sweep.laguerre_fractions") != std::string::npos);
  CHECK(message_of("scenario = \"purity\"\nstep = 1e-3\n[sweep]\nlaguerre_fractions = [0.9]\n")
            .find("step") != std::string::npos);
  CHECK(message_of("scenario = \"purity\"\n[sweep]\nlaguerre_fractions = [0.1]\n")
            .find("sweep.laguerre_fractions") != std::string::npos);
  CHECK(message_of("scenario = \"expand\"\n").find("schedule.segments") != std::string::npos);
  CHECK(message_of("scenario = \"purity\"\nduration = -1\n[sweep]\nlaguerre_fractions = [0.9]\n")
            .find("duration") != std::string::npos);
  CHECK(message_of("scenario = = 1").find("TOML") != std::string::npos);
}

TEST_CASE("schedule segments") {
  const ScenarioConfig cfg = parse_config_text(R"(
scenario = "expand"
[schedule]
segments = [
  { duration = 2e-4, omega_ratio = 0.5 },
  { duration = 1e-4, omega_ratio = 4.5, laguerre_fraction = 0.7 },
]
)",
                                               false);
  REQUIRE(cfg.segments.size() == 2);
  CHECK(cfg.segments[0].omega_ratio == 0.5);
  CHECK_FALSE(cfg.segments[0].laguerre_fraction.has_value());
  CHECK(*cfg.segments[1].laguerre_fraction == 0.7);
  const TrapSchedule sched = rotating_schedule(cfg.setup, cfg.segments);
  CHECK(sched.segments[0].rotation_rate == doctest::Approx(0.5 * threshold_for(cfg.setup, 0.9)));
  CHECK(sched.segments[1].rotation_rate == doctest::Approx(4.5 * threshold_for(cfg.setup, 0.7)));
  CHECK(sched.total_duration() == doctest::Approx(3e-4));
}

TEST_CASE("shipped configs load and validate") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SADDLE_CONFIG_DIR)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++count;
  }
  CHECK(count == 6);
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
}
