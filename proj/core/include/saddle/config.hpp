#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/dynamics.hpp"
#include "saddle/monitor.hpp"

namespace saddle {

enum class ScenarioKind {
  purity,
  expand,
  entangle_map,
  squeeze_metrology,
  feedback_recovery,
  stability_scan,
};

std::string_view scenario_name(ScenarioKind k);
/// Throws ConfigError("unknown scenario ...") for anything else.
ScenarioKind parse_scenario(std::string_view name);

/// A schedule segment with the rotation rate given relative to the threshold
/// of its own I_L.
struct SegmentSpec {
  double duration = 0.0;
  double omega_ratio = 0.0;
  std::optional<double> laguerre_fraction;
};

struct FeedbackSpec {
  bool enabled = true;
  /// Momentum gain as a multiple of the beating frequency, used when
  /// gain_momentum is not given explicitly.
  double momentum_gain_factor = 0.1;
  std::optional<std::array<double, 2>> gain_momentum;
  std::array<double, 2> gain_position{};
};

struct RecoverySpec {
  double time_cap = 5e-3;
  std::vector<double> displacements_radius{1.0};
  std::vector<double> displacements_zpf{1e4};
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::purity;
  std::uint64_t seed = 1;
  double step = 0.0;     // s; 0 = largest admissible
  double duration = 1e-3; // s
  std::string output_dir = "out";
  PhysicalSetup setup;
  double omega_ratio = 4.5;
  MeasurementModel measurement;
  FeedbackSpec feedback;
  std::vector<double> laguerre_fractions;
  std::vector<double> omega_ratios;
  std::vector<SegmentSpec> segments;
  RecoverySpec recovery;
  bool conditional_covariance = false;
  std::size_t sample_count = 1000; // rows per trajectory CSV, approximately
};

/// Parses TOML (.toml) or JSON (.json). Unknown keys and invalid values throw
/// ConfigError with the offending key in the message.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(std::string_view text, bool is_json);

/// Checks every invariant that can be decided before running, including
/// the step bound against each segment the scenario will run.
void validate(const ScenarioConfig& cfg);

} // namespace saddle
