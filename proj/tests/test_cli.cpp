#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "saddlesim_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" SADDLESIM_BINARY "\" " + args + " > \"" +
                          (kRoot / "stdout.txt").string() + "\" 2> \"" +
                          (kRoot / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kPurity = R"(
scenario = "purity"
seed = 3
duration = 2.0e-5
omega_ratio = 4.5
output_dir = "unused"

[sweep]
laguerre_fractions = [0.3, 0.5, 0.7, 0.9]

[output]
sample_count = 50
)";

} // namespace

TEST_CASE("purity run writes one CSV per fraction and a manifest") {
  fs::remove_all(kRoot);
  write(kRoot / "purity.toml", kPurity);
  const fs::path out = kRoot / "a";
  REQUIRE(run("run \"" + (kRoot / "purity.toml").string() + "\" --threads 2 --out \"" +
              out.string() + "\"") == 0);
  std::size_t csv = 0;
  for (const auto& e : fs::directory_iterator(out)) csv += e.path().extension() == ".csv";
  CHECK(csv == 4);
  for (const char* tag : {"0.30", "0.50", "0.70", "0.90"})
    CHECK(fs::exists(out / (std::string("purity_IL") + tag + ".csv")));
  REQUIRE(fs::exists(out / "manifest.json"));
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["scenario"] == "purity");
  CHECK(m["schema_version"] == 1);
  CHECK(m["seed"] == 3);
  CHECK(m["files"].size() == 4);
  CHECK(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(m.contains("code_version"));
  CHECK(m.contains("wall_time_s"));

  const std::string header = slurp(out / "purity_IL0.90.csv").substr(0, 60);
  CHECK(header.rfind("time_s,mean_x_m,", 0) == 0);
  CHECK(slurp(out / "purity_IL0.90.csv").find('\r') == std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  write(kRoot / "purity.toml", kPurity);
  const fs::path a = kRoot / "r1", b = kRoot / "r2";
  REQUIRE(run("run \"" + (kRoot / "purity.toml").string() + "\" --threads 3 --out \"" +
              a.string() + "\"") == 0);
  REQUIRE(run("run \"" + (kRoot / "purity.toml").string() + "\" --threads 1 --out \"" +
              b.string() + "\"") == 0);
  for (const auto& e : fs::directory_iterator(a))
    if (e.path().extension() == ".csv") CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
}

TEST_CASE("unknown scenario exits with a config error") {
  write(kRoot / "bad.toml", "scenario = \"fig9\"\n");
  CHECK(run("run \"" + (kRoot / "bad.toml").string() + "\"") == 1);
  CHECK(slurp(kRoot / "stderr.txt").find("unknown scenario") != std::string::npos);

  write(kRoot / "key.toml", std::string(kPurity) + "\n[trap]\npowr = 1.0\n");
  CHECK(run("run \"" + (kRoot / "key.toml").string() + "\"") == 1);
  CHECK(slurp(kRoot / "stderr.txt").find("trap.powr") != std::string::npos);

  CHECK(run("run \"" + (kRoot / "missing.toml").string() + "\"") == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("output directory precedence and seed override") {
  write(kRoot / "purity.toml", kPurity);
  const fs::path env_dir = kRoot / "from_env";
  const fs::path flag_dir = kRoot / "from_flag";
  const std::string env = "SADDLESIM_OUT=\"" + env_dir.string() + "\"";
  REQUIRE(run("run \"" + (kRoot / "purity.toml").string() + "\" --seed 99", env) == 0);
  CHECK(fs::exists(env_dir / "manifest.json"));
  CHECK(nlohmann::json::parse(slurp(env_dir / "manifest.json"))["seed"] == 99);
  REQUIRE(run("run \"" + (kRoot / "purity.toml").string() + "\" --out \"" + flag_dir.string() + "\"",
              env) == 0);
  CHECK(fs::exists(flag_dir / "manifest.json"));
}

TEST_CASE("version flag") {
  CHECK(run("--version") == 0);
  CHECK(slurp(kRoot / "stdout.txt").find('.') != std::string::npos);
}
