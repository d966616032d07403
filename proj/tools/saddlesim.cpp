#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "saddle/config.hpp"
#include "saddle/scenario.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kPhysicalityError = 2;

int run(const std::string& config_path, unsigned threads, const std::string& out_flag,
        const std::optional<std::uint64_t>& seed) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "config: cannot read " << config_path << '\n';
    return kConfigError;
  }
  std::ostringstream bytes;
  bytes << in.rdbuf();

  try {
    const bool is_json = std::filesystem::path(config_path).extension() == ".json";
    saddle::ScenarioConfig cfg = saddle::parse_config_text(bytes.str(), is_json);
    if (seed) {
      cfg.seed = *seed;
      cfg.measurement.seed = *seed;
    }
    std::filesystem::path out = cfg.output_dir;
    if (const char* env = std::getenv("SADDLESIM_OUT"); env && *env) out = env;
    if (!out_flag.empty()) out = out_flag;

    const auto start = std::chrono::steady_clock::now();
    const auto files = saddle::run_scenario(cfg, out, threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    saddle::write_manifest(out, cfg, bytes.str(), files, wall, threads);
    std::cout << saddle::scenario_name(cfg.scenario) << ": wrote " << files.size()
              << (files.size() == 1 ? " file to " : " files to ") << out.string() << " in " << wall << " s\n";
    return 0;
  } catch (const saddle::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const saddle::PhysicalityError& e) {
    std::cerr << "physicality error: " << e.what() << '\n';
    return kPhysicalityError;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating saddle levitation simulator"};
  app.set_version_flag("--version", std::string(saddle::version()));
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run the scenario described by a config file");
  std::string config;
  unsigned threads = 0;
  std::string out;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", config, "TOML or JSON scenario file")->required();
  run_cmd->add_option("--threads", threads, "Worker threads (default: all cores)");
  run_cmd->add_option("--out", out, "Output directory (overrides config and SADDLESIM_OUT)");
  run_cmd->add_option("--seed", seed, "Master seed (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }
  return run(config, threads, out, seed);
}
