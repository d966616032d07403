#include "saddle/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace saddle {

using nlohmann::json;

std::string_view scenario_name(ScenarioKind k) {
  switch (k) {
  case ScenarioKind::purity: return "purity";
  case ScenarioKind::expand: return "expand";
  case ScenarioKind::entangle_map: return "entangle-map";
  case ScenarioKind::squeeze_metrology: return "squeeze-metrology";
  case ScenarioKind::feedback_recovery: return "feedback-recovery";
  case ScenarioKind::stability_scan: return "stability-scan";
  }
  return "?";
}

ScenarioKind parse_scenario(std::string_view name) {
  for (auto k : {ScenarioKind::purity, ScenarioKind::expand, ScenarioKind::entangle_map,
                 ScenarioKind::squeeze_metrology, ScenarioKind::feedback_recovery,
                 ScenarioKind::stability_scan})
    if (scenario_name(k) == name) return k;
  throw ConfigError("scenario: unknown scenario '" + std::string(name) + "'");
}

namespace {

json from_toml(const toml::node& node) {
  if (auto t = node.as_table()) {
    json j = json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = from_toml(v);
    return j;
  }
  if (auto a = node.as_array()) {
    json j = json::array();
    for (const auto& v : *a) j.push_back(from_toml(v));
    return j;
  }
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_string()) return v->get();
  throw ConfigError("unsupported TOML value type");
}

/// Typed access to one table, remembering its dotted path and the keys read,
/// so leftovers can be reported as unknown.
class Table {
public:
  Table(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected a table");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }

  double number(const std::string& k, double fallback) {
    if (!has(k)) return fallback;
    const json& v = j_.at(k);
    if (!v.is_number()) throw ConfigError(key(k) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return number(k, 0.0);
  }

  std::uint64_t unsigned_integer(const std::string& k, std::uint64_t fallback) {
    if (!has(k)) return fallback;
    const json& v = j_.at(k);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(key(k) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& k, bool fallback) {
    if (!has(k)) return fallback;
    const json& v = j_.at(k);
    if (!v.is_boolean()) throw ConfigError(key(k) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k, const std::string& fallback) {
    if (!has(k)) return fallback;
    const json& v = j_.at(k);
    if (!v.is_string()) throw ConfigError(key(k) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& k, std::vector<double> fallback) {
    if (!has(k)) return fallback;
    const json& v = j_.at(k);
    if (!v.is_array()) throw ConfigError(key(k) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(key(k) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  /// A per-axis value: either one number for both axes or a pair.
  std::optional<std::array<double, 2>> pair(const std::string& k) {
    if (!has(k)) return std::nullopt;
    const json& v = j_.at(k);
    if (v.is_number()) return std::array<double, 2>{v.get<double>(), v.get<double>()};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return std::array<double, 2>{v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(key(k) + ": expected a number or a pair [x, y]");
  }

  std::optional<Table> table(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return Table(j_.at(k), key(k));
  }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(key(k) + ": unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ScenarioConfig parse(const json& root) {
  Table top(root, "");
  ScenarioConfig cfg;
  if (!top.has("scenario")) throw ConfigError("scenario: missing");
  cfg.scenario = parse_scenario(top.string("scenario", ""));
  cfg.seed = top.unsigned_integer("seed", cfg.seed);
  cfg.step = top.number("step", cfg.step);
  cfg.duration = top.number("duration", cfg.duration);
  cfg.output_dir = top.string("output_dir", cfg.output_dir);
  cfg.omega_ratio = top.number("omega_ratio", cfg.omega_ratio);

  if (auto t = top.table("particle")) {
    auto& p = cfg.setup.particle;
    p.radius = t->number("radius", p.radius);
    p.density = t->number("density", p.density);
    p.relative_permittivity = t->number("relative_permittivity", p.relative_permittivity);
    t->finish();
  }
  if (auto t = top.table("trap")) {
    auto& tr = cfg.setup.trap;
    tr.power = t->number("power", tr.power);
    tr.wavelength = t->number("wavelength", tr.wavelength);
    tr.waist = t->number("waist", tr.waist);
    tr.numerical_aperture = t->number("numerical_aperture", tr.numerical_aperture);
    tr.laguerre_fraction = t->number("laguerre_fraction", tr.laguerre_fraction);
    tr.phase = t->number("phase", tr.phase);
    tr.gas_damping = t->number("gas_damping", tr.gas_damping);
    tr.axial_recoil_factor = t->number("axial_recoil_factor", tr.axial_recoil_factor);
    const std::string rf = t->string("recoil_frequency", "reference");
    if (rf == "reference") cfg.setup.recoil_frequency = RecoilFrequency::reference;
    else if (rf == "beating") cfg.setup.recoil_frequency = RecoilFrequency::beating;
    else throw ConfigError("trap.recoil_frequency: expected 'reference' or 'beating'");
    t->finish();
  }
  if (auto t = top.table("reference")) {
    auto& r = cfg.setup.reference;
    const double two_pi = 2.0 * constants::pi;
    r.frequency_x = two_pi * t->number("frequency_x_hz", r.frequency_x / two_pi);
    r.frequency_y = two_pi * t->number("frequency_y_hz", r.frequency_y / two_pi);
    r.occupation_x = t->number("occupation_x", r.occupation_x);
    r.occupation_y = t->number("occupation_y", r.occupation_y);
    t->finish();
  }
  if (auto t = top.table("measurement")) {
    cfg.measurement.efficiency = t->number("efficiency", cfg.measurement.efficiency);
    cfg.measurement.rate = t->pair("rate");
    t->finish();
  }
  cfg.measurement.seed = cfg.seed;
  if (auto t = top.table("feedback")) {
    auto& f = cfg.feedback;
    f.enabled = t->boolean("enabled", f.enabled);
    f.momentum_gain_factor = t->number("momentum_gain_factor", f.momentum_gain_factor);
    f.gain_momentum = t->pair("gain_momentum");
    f.gain_position = t->pair("gain_position").value_or(f.gain_position);
    t->finish();
  }
  if (auto t = top.table("sweep")) {
    cfg.laguerre_fractions = t->numbers("laguerre_fractions", {});
    cfg.omega_ratios = t->numbers("omega_ratios", {});
    t->finish();
  }
  if (auto t = top.table("schedule")) {
    if (t->has("segments")) {
      const json& segs = t->raw("segments");
      if (!segs.is_array()) throw ConfigError("schedule.segments: expected an array of tables");
      for (std::size_t i = 0; i < segs.size(); ++i) {
        Table st(segs[i], "schedule.segments[" + std::to_string(i) + "]");
        SegmentSpec s;
        s.duration = st.number("duration", 0.0);
        s.omega_ratio = st.number("omega_ratio", 0.0);
        s.laguerre_fraction = st.optional_number("laguerre_fraction");
        st.finish();
        cfg.segments.push_back(s);
      }
    }
    t->finish();
  }
  if (auto t = top.table("recovery")) {
    auto& r = cfg.recovery;
    r.time_cap = t->number("time_cap", r.time_cap);
    r.displacements_radius = t->numbers("displacements_radius", r.displacements_radius);
    r.displacements_zpf = t->numbers("displacements_zpf", r.displacements_zpf);
    t->finish();
  }
  if (auto t = top.table("metrology")) {
    const std::string c = t->string("covariance", "unconditional");
    if (c == "unconditional") cfg.conditional_covariance = false;
    else if (c == "conditional") cfg.conditional_covariance = true;
    else throw ConfigError("metrology.covariance: expected 'unconditional' or 'conditional'");
    t->finish();
  }
  if (auto t = top.table("output")) {
    cfg.sample_count = t->unsigned_integer("sample_count", cfg.sample_count);
    t->finish();
  }
  top.finish();
  return cfg;
}

} // namespace

ScenarioConfig parse_config_text(std::string_view text, bool is_json) {
  json root;
  if (is_json) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
  } else {
    try {
      root = from_toml(toml::parse(text));
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << "config: TOML parse error: " << e.description() << " at line "
         << e.source().begin.line;
      throw ConfigError(os.str());
    }
  }
  ScenarioConfig cfg = parse(root);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.extension() == ".json");
}

} // namespace saddle
