#include "saddle/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "saddle/csv.hpp"
#include "saddle/noise.hpp"
#include "saddle/potential.hpp"
#include "saddle/stability.hpp"

namespace saddle {

std::string_view version() { return SADDLE_VERSION; }

namespace {

std::string fixed2(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

std::string general(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

PhysicalSetup with_fraction(const PhysicalSetup& setup, double laguerre_fraction) {
  PhysicalSetup s = setup;
  s.trap.laguerre_fraction = laguerre_fraction;
  return s;
}

TrapSchedule single(const PhysicalSetup& setup, double laguerre_fraction, double omega_ratio,
                    double duration, const std::string& key) {
  const double omega0 = threshold_for(setup, laguerre_fraction, key);
  TrapSchedule s;
  s.segments.push_back({duration, omega_ratio * omega0, laguerre_fraction, setup.trap.power});
  return s;
}

QuadratureScales scales_of(const PhysicalSetup& setup) {
  return derive(setup.particle, setup.trap, setup.reference).scales(setup.reference);
}

GaussianState initial_state(const PhysicalSetup& setup) {
  return thermal_state(setup.reference.occupation_x, setup.reference.occupation_y);
}

const std::vector<std::string>& trajectory_header() {
  static const std::vector<std::string> h{
      "time_s",   "mean_x_m", "mean_px_kgms", "mean_y_m", "mean_py_kgms",
      "cov_XX",   "cov_XPx",  "cov_XY",       "cov_XPy",  "cov_PxPx",
      "cov_PxY",  "cov_PxPy", "cov_YY",       "cov_YPy",  "cov_PyPy",
      "purity",   "log_negativity", "dx_over_radius", "dpx_over_pzpf"};
  return h;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      const QuadratureScales& sc, double radius) {
  CsvWriter w(path, trajectory_header());
  std::vector<double> row(trajectory_header().size());
  for (const auto& s : traj.samples) {
    const Diagnostics d = uncertainties(s, sc, radius);
    std::size_t k = 0;
    row[k++] = s.time;
    row[k++] = s.mean(kX) * sc.position[0];
    row[k++] = s.mean(kPx) * sc.momentum[0];
    row[k++] = s.mean(kY) * sc.position[1];
    row[k++] = s.mean(kPy) * sc.momentum[1];
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) row[k++] = s.cov(i, j);
    row[k++] = d.purity;
    row[k++] = d.log_negativity;
    row[k++] = d.delta_x_over_radius;
    row[k++] = d.delta_p_x_over_zpf;
    w.row(row);
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

} // namespace

double threshold_for(const PhysicalSetup& setup, double laguerre_fraction, const std::string& key) {
  TrapConfig trap = setup.trap;
  trap.laguerre_fraction = laguerre_fraction;
  const auto omega0 =
      threshold(trap, derive(setup.particle, trap, setup.reference));
  if (!omega0)
    throw ConfigError(key + ": I_L = " + general(laguerre_fraction) +
                      " forms no saddle, so no rotation threshold exists");
  return *omega0;
}

TrapSchedule rotating_schedule(const PhysicalSetup& setup, const std::vector<SegmentSpec>& specs) {
  TrapSchedule s;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SegmentSpec& sp = specs[i];
    const double il = sp.laguerre_fraction.value_or(setup.trap.laguerre_fraction);
    const std::string key = "schedule.segments[" + std::to_string(i) + "]";
    require(sp.duration >= 0.0, key + ".duration: must be >= 0");
    require(sp.omega_ratio > 0.0, key + ".omega_ratio: must be > 0");
    const double omega0 = threshold_for(setup, il, key + ".laguerre_fraction");
    s.segments.push_back({sp.duration, sp.omega_ratio * omega0, il, setup.trap.power});
  }
  return s;
}

std::size_t stride_for(const TrapSchedule& schedule, const PhysicalSetup& setup, double step,
                       std::size_t sample_count) {
  std::size_t total = 0;
  for (const auto& p : plan_segments(schedule, setup, step)) total += p.steps;
  return std::max<std::size_t>(1, total / std::max<std::size_t>(sample_count, 1));
}

EntanglementPoint entanglement_point(const PhysicalSetup& setup, double laguerre_fraction,
                                     double omega_ratio, double duration, double step) {
  const PhysicalSetup s = with_fraction(setup, laguerre_fraction);
  const TrapSchedule sched =
      single(s, laguerre_fraction, omega_ratio, duration, "sweep.laguerre_fractions");
  EntanglementPoint p;
  p.laguerre_fraction = laguerre_fraction;
  p.omega_ratio = omega_ratio;
  p.omega0 = sched.segments.front().rotation_rate / omega_ratio;
  IntegrateOptions opt;
  opt.sample_stride = std::numeric_limits<std::size_t>::max();
  opt.observer = [&p](const GaussianState& g) {
    const double ln = log_negativity(g);
    if (ln > p.max_log_negativity) {
      p.max_log_negativity = ln;
      p.time_of_max = g.time;
    }
  };
  integrate(initial_state(s), sched, step, s, opt);
  return p;
}

MetrologyResult squeeze_metrology_point(const PhysicalSetup& setup, double laguerre_fraction,
                                        double omega_ratio, double duration, double step,
                                        std::size_t sample_count, bool conditional,
                                        const MeasurementModel& meas) {
  const PhysicalSetup s = with_fraction(setup, laguerre_fraction);
  const TrapSchedule sched =
      single(s, laguerre_fraction, omega_ratio, duration, "sweep.laguerre_fractions");
  IntegrateOptions opt;
  opt.sample_stride = stride_for(sched, s, step, sample_count);
  MetrologyResult r;
  r.min_delta_p_x_over_zpf = std::numeric_limits<double>::infinity();
  opt.observer = [&r](const GaussianState& g) {
    r.min_delta_p_x_over_zpf =
        std::min(r.min_delta_p_x_over_zpf, std::sqrt(2.0 * g.cov(kPx, kPx)));
  };
  r.trajectory = conditional
                     ? integrate_conditional(initial_state(s), sched, step, s, meas, {}, opt)
                     : integrate(initial_state(s), sched, step, s, opt);
  const SensitivitySet sens = sensitivities(sched, s, step, opt.sample_stride);
  r.bounds = force_bounds(sens, r.trajectory);
  r.min_force_x = r.min_force_y = std::numeric_limits<double>::infinity();
  for (const auto& b : r.bounds) {
    if (b.min_force_x < r.min_force_x) {
      r.min_force_x = b.min_force_x;
      r.time_of_min_x = b.time;
    }
    r.min_force_y = std::min(r.min_force_y, b.min_force_y);
  }
  return r;
}

FeedbackLaw feedback_law(const FeedbackSpec& spec, const PhysicalSetup& setup,
                         double rotation_rate) {
  FeedbackLaw law;
  law.enabled = spec.enabled;
  law.gain_position = spec.gain_position;
  if (spec.gain_momentum) {
    law.gain_momentum = *spec.gain_momentum;
  } else {
    TrapConfig trap = setup.trap;
    trap.rotation_rate = rotation_rate;
    const StabilityReport rep =
        floquet(trap, derive(setup.particle, trap, setup.reference), rotation_rate, 0.0);
    const double g = spec.momentum_gain_factor * rep.beating_frequency;
    law.gain_momentum = {g, g};
  }
  return law;
}

RecoveryScenario recovery_scenario(const ScenarioConfig& cfg, double laguerre_fraction,
                                   std::uint64_t seed) {
  RecoveryScenario rs;
  rs.setup = with_fraction(cfg.setup, laguerre_fraction);
  rs.rotation_rate =
      cfg.omega_ratio * threshold_for(rs.setup, laguerre_fraction, "sweep.laguerre_fractions");
  rs.measurement = cfg.measurement;
  rs.measurement.seed = seed;
  rs.feedback = feedback_law(cfg.feedback, rs.setup, rs.rotation_rate);
  rs.time_cap = cfg.recovery.time_cap;
  rs.step = cfg.step;
  TrapSchedule sched;
  sched.segments.push_back({rs.time_cap, rs.rotation_rate, laguerre_fraction, rs.setup.trap.power});
  rs.sample_stride = stride_for(sched, rs.setup, cfg.step, cfg.sample_count);
  return rs;
}

StabilityRow stability_point(const PhysicalSetup& setup, double laguerre_fraction,
                             double omega_ratio) {
  StabilityRow row;
  row.laguerre_fraction = laguerre_fraction;
  row.omega_ratio = omega_ratio;
  TrapConfig trap = setup.trap;
  trap.laguerre_fraction = laguerre_fraction;
  const DerivedParams d = derive(setup.particle, trap, setup.reference);
  row.saddle = saddle_exists(trap);
  row.trap_depth = trap_depth(trap, d);
  row.characteristic_length =
      trap.gaussian_fraction() > 0.0 ? characteristic_length(trap)
                                     : std::numeric_limits<double>::infinity();
  const auto omega0 = threshold(trap, d);
  if (!omega0) {
    row.stable = true;
    row.beating_frequency = std::numeric_limits<double>::quiet_NaN();
    row.mode_low = row.mode_high = row.beating_frequency;
    return row;
  }
  row.omega0 = *omega0;
  const double omega = omega_ratio * *omega0;
  trap.rotation_rate = omega;
  const StabilityReport rep = floquet(trap, d, omega, trap.gas_damping);
  row.stable = rep.is_stable;
  row.beating_frequency = rep.beating_frequency;
  row.mode_low = rep.mode_frequencies[0];
  row.mode_high = rep.mode_frequencies[1];
  return row;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void validate(const ScenarioConfig& cfg) {
  validate(cfg.setup.particle);
  validate(cfg.setup.trap);
  validate(cfg.setup.reference);
  validate(cfg.measurement);
  require(cfg.step >= 0.0, "step: must be >= 0");
  require(cfg.duration > 0.0, "duration: must be > 0");
  require(cfg.omega_ratio > 0.0, "omega_ratio: must be > 0");
  require(cfg.sample_count > 0, "output.sample_count: must be > 0");
  require(cfg.feedback.momentum_gain_factor >= 0.0, "feedback.momentum_gain_factor: must be >= 0");
  if (cfg.feedback.gain_momentum)
    for (double g : *cfg.feedback.gain_momentum) require(g >= 0.0, "feedback.gain_momentum: must be >= 0");
  for (double g : cfg.feedback.gain_position) require(g >= 0.0, "feedback.gain_position: must be >= 0");
  for (double il : cfg.laguerre_fractions)
    require(il >= 0.0 && il <= 1.0, "sweep.laguerre_fractions: values must lie in [0, 1]");
  for (double r : cfg.omega_ratios) require(r > 0.0, "sweep.omega_ratios: values must be > 0");
  require(cfg.recovery.time_cap > 0.0, "recovery.time_cap: must be > 0");

  const auto need_fractions = [&] {
    require(!cfg.laguerre_fractions.empty(), "sweep.laguerre_fractions: must not be empty");
  };
  const auto need_ratios = [&] {
    require(!cfg.omega_ratios.empty(), "sweep.omega_ratios: must not be empty");
  };
  const auto check_step = [&](double il, double ratio, double duration) {
    const PhysicalSetup s = with_fraction(cfg.setup, il);
    resolve_step(single(s, il, ratio, duration, "sweep.laguerre_fractions"), s, cfg.step);
  };

  switch (cfg.scenario) {
  case ScenarioKind::purity:
  case ScenarioKind::squeeze_metrology:
    need_fractions();
    for (double il : cfg.laguerre_fractions) check_step(il, cfg.omega_ratio, cfg.duration);
    break;
  case ScenarioKind::feedback_recovery:
    need_fractions();
    require(!cfg.recovery.displacements_radius.empty() || !cfg.recovery.displacements_zpf.empty(),
            "recovery: at least one displacement required");
    for (double il : cfg.laguerre_fractions) check_step(il, cfg.omega_ratio, cfg.recovery.time_cap);
    break;
  case ScenarioKind::entangle_map:
    need_fractions();
    need_ratios();
    for (double il : cfg.laguerre_fractions)
      for (double r : cfg.omega_ratios) check_step(il, r, cfg.duration);
    break;
  case ScenarioKind::expand:
    require(!cfg.segments.empty(), "schedule.segments: must not be empty");
    resolve_step(rotating_schedule(cfg.setup, cfg.segments), cfg.setup, cfg.step);
    break;
  case ScenarioKind::stability_scan:
    need_fractions();
    need_ratios();
    break;
  }
}

std::vector<std::filesystem::path> run_scenario(const ScenarioConfig& cfg,
                                                const std::filesystem::path& out,
                                                unsigned threads) {
  validate(cfg);
  std::filesystem::create_directories(out);
  std::vector<std::filesystem::path> files;
  std::mutex files_mutex;
  auto add = [&](const std::filesystem::path& p) {
    std::lock_guard lock(files_mutex);
    files.push_back(p.filename());
  };
  const double radius = cfg.setup.particle.radius;
  const auto& fractions = cfg.laguerre_fractions;

  switch (cfg.scenario) {
  case ScenarioKind::purity: {
    parallel_for(fractions.size(), threads, [&](std::size_t i) {
      const PhysicalSetup s = with_fraction(cfg.setup, fractions[i]);
      const TrapSchedule sched = single(s, fractions[i], cfg.omega_ratio, cfg.duration,
                                        "sweep.laguerre_fractions");
      IntegrateOptions opt;
      opt.sample_stride = stride_for(sched, s, cfg.step, cfg.sample_count);
      const Trajectory traj = integrate(initial_state(s), sched, cfg.step, s, opt);
      const auto path = out / ("purity_IL" + fixed2(fractions[i]) + ".csv");
      write_trajectory(path, traj, scales_of(s), radius);
      add(path);
    });
    break;
  }
  case ScenarioKind::expand: {
    const TrapSchedule sched = rotating_schedule(cfg.setup, cfg.segments);
    IntegrateOptions opt;
    opt.sample_stride = stride_for(sched, cfg.setup, cfg.step, cfg.sample_count);
    const Trajectory traj = integrate(initial_state(cfg.setup), sched, cfg.step, cfg.setup, opt);
    write_trajectory(out / "expand.csv", traj, scales_of(cfg.setup), radius);
    add(out / "expand.csv");
    CsvWriter seg(out / "expand_segments.csv",
                  {"start_s", "duration_s", "rotation_rate", "omega_ratio", "laguerre_fraction"});
    double t = 0.0;
    for (std::size_t i = 0; i < sched.segments.size(); ++i) {
      const auto& sg = sched.segments[i];
      seg.row({t, sg.duration, sg.rotation_rate, cfg.segments[i].omega_ratio,
               sg.laguerre_fraction});
      t += sg.duration;
    }
    add(out / "expand_segments.csv");
    break;
  }
  case ScenarioKind::entangle_map: {
    const std::size_t nr = cfg.omega_ratios.size();
    std::vector<EntanglementPoint> pts(fractions.size() * nr);
    parallel_for(pts.size(), threads, [&](std::size_t k) {
      pts[k] = entanglement_point(cfg.setup, fractions[k / nr], cfg.omega_ratios[k % nr],
                                  cfg.duration, cfg.step);
    });
    CsvWriter w(out / "entangle_map.csv", {"laguerre_fraction", "omega_ratio", "omega0",
                                           "max_log_negativity", "time_of_max_s"});
    for (const auto& p : pts)
      w.row({p.laguerre_fraction, p.omega_ratio, p.omega0, p.max_log_negativity, p.time_of_max});
    add(out / "entangle_map.csv");
    break;
  }
  case ScenarioKind::squeeze_metrology: {
    std::vector<MetrologyResult> res(fractions.size());
    parallel_for(fractions.size(), threads, [&](std::size_t i) {
      MeasurementModel meas = cfg.measurement;
      meas.seed = derive_seed(cfg.seed, i);
      res[i] = squeeze_metrology_point(cfg.setup, fractions[i], cfg.omega_ratio, cfg.duration,
                                       cfg.step, cfg.sample_count, cfg.conditional_covariance,
                                       meas);
      const PhysicalSetup s = with_fraction(cfg.setup, fractions[i]);
      const std::string tag = fixed2(fractions[i]);
      write_trajectory(out / ("squeeze_IL" + tag + ".csv"), res[i].trajectory, scales_of(s),
                       radius);
      add(out / ("squeeze_IL" + tag + ".csv"));
      CsvWriter w(out / ("force_IL" + tag + ".csv"),
                  {"time_s", "qfim_xx", "qfim_xy", "qfim_yy", "min_force_x_N", "min_force_y_N"});
      for (const auto& b : res[i].bounds)
        w.row({b.time, b.qfim(0, 0), b.qfim(0, 1), b.qfim(1, 1), b.min_force_x, b.min_force_y});
      add(out / ("force_IL" + tag + ".csv"));
    });
    CsvWriter w(out / "force_summary.csv",
                {"laguerre_fraction", "min_force_x_N", "min_force_y_N", "time_of_min_x_s",
                 "min_dpx_over_pzpf"});
    for (std::size_t i = 0; i < res.size(); ++i)
      w.row({fractions[i], res[i].min_force_x, res[i].min_force_y, res[i].time_of_min_x,
             res[i].min_delta_p_x_over_zpf});
    add(out / "force_summary.csv");
    break;
  }
  case ScenarioKind::feedback_recovery: {
    struct Job {
      double il;
      double displacement;
      std::string tag;
    };
    std::vector<Job> jobs;
    for (double il : fractions) {
      const double x_zpf =
          derive(cfg.setup.particle, cfg.setup.trap, cfg.setup.reference).x_zpf;
      for (double r : cfg.recovery.displacements_radius)
        jobs.push_back({il, r * radius, "IL" + fixed2(il) + "_R" + general(r)});
      for (double z : cfg.recovery.displacements_zpf)
        jobs.push_back({il, z * x_zpf, "IL" + fixed2(il) + "_zpf" + general(z)});
    }
    std::vector<RecoveryReport> reps(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t k) {
      const RecoveryScenario rs =
          recovery_scenario(cfg, jobs[k].il, derive_seed(cfg.seed, k));
      reps[k] = recover(jobs[k].displacement, rs);
      const QuadratureScales sc = scales_of(rs.setup);
      const auto path = out / ("recovery_" + jobs[k].tag + ".csv");
      CsvWriter w(path, {"time_s", "mean_x_over_radius", "mean_px_over_pzpf", "mean_energy",
                         "covariance_energy"});
      for (const auto& s : reps[k].trajectory.samples)
        w.row({s.time, s.mean(kX) * sc.position[0] / radius, s.mean(kPx) * std::sqrt(2.0),
               mean_energy(s), covariance_energy(s)});
      add(path);
      reps[k].trajectory.samples.clear();
    });
    CsvWriter w(out / "recovery_summary.csv",
                {"laguerre_fraction", "displacement_m", "success", "settle_time_s",
                 "final_energy", "steady_energy", "window_max_abs_x_over_radius"});
    for (std::size_t k = 0; k < jobs.size(); ++k)
      w.row({jobs[k].il, jobs[k].displacement, reps[k].success ? 1.0 : 0.0, reps[k].settle_time,
             reps[k].final_energy, reps[k].steady_energy,
             reps[k].window_max_displacement / radius});
    add(out / "recovery_summary.csv");
    break;
  }
  case ScenarioKind::stability_scan: {
    const std::size_t nr = cfg.omega_ratios.size();
    std::vector<StabilityRow> rows(fractions.size() * nr);
    parallel_for(rows.size(), threads, [&](std::size_t k) {
      rows[k] = stability_point(cfg.setup, fractions[k / nr], cfg.omega_ratios[k % nr]);
    });
    CsvWriter w(out / "stability_scan.csv",
                {"laguerre_fraction", "omega_ratio", "omega0", "trap_depth_J",
                 "characteristic_length_m", "saddle", "stable", "beating_frequency",
                 "mode_low", "mode_high"});
    for (const auto& r : rows)
      w.row({r.laguerre_fraction, r.omega_ratio, r.omega0, r.trap_depth, r.characteristic_length,
             r.saddle ? 1.0 : 0.0, r.stable ? 1.0 : 0.0, r.beating_frequency, r.mode_low,
             r.mode_high});
    add(out / "stability_scan.csv");
    break;
  }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_manifest(const std::filesystem::path& out, const ScenarioConfig& cfg,
                    std::string_view config_bytes, const std::vector<std::filesystem::path>& files,
                    double wall_seconds, unsigned threads) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_bytes)));
  nlohmann::json j;
  j["scenario"] = std::string(scenario_name(cfg.scenario));
  j["config_hash"] = std::string("fnv1a64:") + hash;
  j["code_version"] = std::string(version());
  j["schema_version"] = kCsvSchemaVersion;
  j["seed"] = cfg.seed;
  j["threads"] = threads;
  j["wall_time_s"] = wall_seconds;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files) j["files"].push_back(f.string());
  std::ofstream o(out / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!o) throw std::runtime_error("cannot write " + (out / "manifest.json").string());
  o << j.dump(2) << '\n';
}

} // namespace saddle
