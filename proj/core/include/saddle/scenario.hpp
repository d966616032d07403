#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/config.hpp"
#include "saddle/metrology.hpp"
#include "saddle/monitor.hpp"

namespace saddle {

/// Threshold Omega0 [rad/s] for the setup's trap with I_L replaced. Throws
/// ConfigError naming `key` when that I_L forms no saddle.
double threshold_for(const PhysicalSetup& setup, double laguerre_fraction,
                     const std::string& key = "trap.laguerre_fraction");

/// Converts relative segments to absolute rotation rates.
TrapSchedule rotating_schedule(const PhysicalSetup& setup, const std::vector<SegmentSpec>& specs);

/// Stored-sample stride that yields about `sample_count` rows.
std::size_t stride_for(const TrapSchedule& schedule, const PhysicalSetup& setup, double step,
                       std::size_t sample_count);

struct EntanglementPoint {
  double laguerre_fraction = 0.0;
  double omega_ratio = 0.0;
  double omega0 = 0.0;
  double max_log_negativity = 0.0;
  double time_of_max = 0.0;
};

/// Integrates from the reference thermal state and tracks the largest L_N
/// over every step.
EntanglementPoint entanglement_point(const PhysicalSetup& setup, double laguerre_fraction,
                                     double omega_ratio, double duration, double step);

struct MetrologyResult {
  Trajectory trajectory;
  std::vector<ForceBound> bounds;
  double min_force_x = 0.0, min_force_y = 0.0; // N, over the stored samples
  double time_of_min_x = 0.0;
  double min_delta_p_x_over_zpf = 0.0;         // over every step
};

MetrologyResult squeeze_metrology_point(const PhysicalSetup& setup, double laguerre_fraction,
                                        double omega_ratio, double duration, double step,
                                        std::size_t sample_count, bool conditional,
                                        const MeasurementModel& meas);

/// Momentum-damping gains from the config: factor x beating frequency.
FeedbackLaw feedback_law(const FeedbackSpec& spec, const PhysicalSetup& setup,
                         double rotation_rate);

RecoveryScenario recovery_scenario(const ScenarioConfig& cfg, double laguerre_fraction,
                                   std::uint64_t seed);

struct StabilityRow {
  double laguerre_fraction = 0.0;
  double omega_ratio = 0.0;
  double omega0 = 0.0; // 0 without a saddle
  double trap_depth = 0.0;
  double characteristic_length = 0.0;
  bool saddle = false;
  bool stable = false;
  double beating_frequency = 0.0;
  double mode_low = 0.0, mode_high = 0.0;
};

StabilityRow stability_point(const PhysicalSetup& setup, double laguerre_fraction,
                             double omega_ratio);

/// Runs body(i) for i in [0, n) on `threads` workers (0 = hardware
/// concurrency). The first exception by index is rethrown after all finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Executes a scenario and writes its CSV files into `out`. Returns the file
/// names, sorted.
std::vector<std::filesystem::path> run_scenario(const ScenarioConfig& cfg,
                                                const std::filesystem::path& out,
                                                unsigned threads);

std::uint64_t fnv1a(std::string_view bytes);

void write_manifest(const std::filesystem::path& out, const ScenarioConfig& cfg,
                    std::string_view config_bytes, const std::vector<std::filesystem::path>& files,
                    double wall_seconds, unsigned threads);

std::string_view version();

} // namespace saddle
