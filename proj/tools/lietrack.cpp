// lietrack: simulate / track / sweep / contour front end.
//
// Flags override config-file keys. Angles in files are radians; angle flags
// are read in --units (degrees by default).

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lietrack/io.hpp"
#include "lietrack/run_config.hpp"

namespace fs = std::filesystem;
using lietrack::config::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string units = "deg";
  std::vector<std::string> filters;
  std::optional<int> parallel;
};

void add_common(CLI::App* cmd, Common& c, bool with_filters) {
  cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--units", c.units, "Units of angle flags")->check(CLI::IsMember({"deg", "rad"}))->capture_default_str();
  if (with_filters) cmd->add_option("--filters", c.filters, "Comma-separated filter list")->delimiter(',');
  cmd->add_option("--parallel", c.parallel, "Worker threads");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw lietrack::ValidationError("cannot open config '" + path + "'");
  try {
    json j = json::parse(in);
    lietrack::config::require_object(j, path);
    return j;
  } catch (const json::parse_error& e) {
    throw lietrack::ValidationError("cannot parse config '" + path + "': " + e.what());
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lietrack::ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw lietrack::ValidationError("cannot parse '" + path + "': " + e.what());
  }
}

double flag_angle(double v, const Common& c) {
  return lietrack::to_radians(v, lietrack::angle_unit_from_string(c.units));
}

fs::path output_path(const Common& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw lietrack::ValidationError("cannot create output directory '" + c.out_dir + "': " + ec.message());
  return fs::path(c.out_dir) / name;
}

template <class Writer>
void write_file(const fs::path& p, Writer&& w) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw lietrack::ValidationError("cannot write '" + p.string() + "'");
  w(out);
  out.flush();
  if (!out) throw lietrack::ValidationError("write failed for '" + p.string() + "'");
  spdlog::info("wrote {}", p.string());
}

void write_json(const fs::path& p, const json& j) {
  write_file(p, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void apply_common(json& j, const Common& c, bool filters_key, bool parallel_key) {
  if (c.seed) j["seed"] = *c.seed;
  if (filters_key && !c.filters.empty()) j["filters"] = c.filters;
  if (parallel_key && c.parallel) j["parallel"] = *c.parallel;
}

// --- simulate ---------------------------------------------------------------

struct SimulateFlags {
  std::optional<std::string> model;
  std::optional<double> sigma_v, sigma_omega, meas_std, dt;
  std::optional<int> steps;
};

void run_simulate(const Common& c, const SimulateFlags& f) {
  json j = load_config(c.config_path);
  apply_common(j, c, false, false);
  if (f.model) j["model"] = *f.model;
  if (f.sigma_v) j["sigma_vx"] = j["sigma_vy"] = *f.sigma_v;
  if (f.sigma_omega) j["sigma_omega"] = flag_angle(*f.sigma_omega, c);
  if (f.meas_std) j["meas_std"] = *f.meas_std;
  if (f.dt) j["dt"] = *f.dt;
  if (f.steps) j["steps"] = *f.steps;

  const auto params = lietrack::config::trajectory_params(j);
  const auto rec = lietrack::generate_trajectory(params);
  write_json(output_path(c, "trajectory.json"), lietrack::io::to_json(rec));
  write_file(output_path(c, "trajectory.csv"), [&](std::ostream& os) { lietrack::io::write_trajectory_csv(os, rec); });
  std::cout << "trajectory: " << rec.truth.size() << " steps, model " << lietrack::to_string(params.model) << '\n';
}

// --- track ------------------------------------------------------------------

struct TrackFlags {
  std::string trajectory;
  std::optional<std::string> init;
  std::optional<int> eval_start;
};

void run_track(const Common& c, const TrackFlags& f) {
  json j = load_config(c.config_path);
  apply_common(j, c, true, false);
  if (f.init) j["init"] = *f.init;
  if (f.eval_start) j["eval_start"] = *f.eval_start;
  const auto tc = lietrack::config::track_config(j);
  const auto traj = lietrack::io::trajectory_from_json(load_json(f.trajectory));
  if (tc.eval_start < 0 || static_cast<std::size_t>(tc.eval_start) >= traj.truth.size()) {
    throw lietrack::ValidationError("eval_start must be in [0, steps)");
  }

  for (auto kind : tc.filters) {
    auto fc = lietrack::matched_config(kind, traj.params);
    if (tc.noise) fc.noise = *tc.noise;
    if (tc.meas_std) fc.meas_std = *tc.meas_std;
    fc.noise.validate();
    fc.cv_q = tc.cv_q;
    fc.ctrv = {tc.ctrv_intensity, tc.ctrv_intensity};
    fc.init = tc.init;
    spdlog::debug("running {}", lietrack::to_string(kind));
    const auto est = lietrack::run_filter(traj, fc);
    json out = lietrack::io::to_json(est, traj, static_cast<std::size_t>(tc.eval_start));
    out["init"] = lietrack::config::to_string(tc.init);
    write_json(output_path(c, "estimates-" + std::string(lietrack::to_string(kind)) + ".json"), out);
    std::cout << lietrack::to_string(kind) << " rmse " << out.at("rmse").get<double>() << '\n';
  }
}

// --- sweep ------------------------------------------------------------------

struct SweepFlags {
  std::optional<double> grid_min, grid_max;
  std::optional<int> grid_count, n_traj, steps;
  std::optional<std::string> generator;
  bool no_tune = false;
};

void run_sweep(const Common& c, const SweepFlags& f) {
  json j = load_config(c.config_path);
  apply_common(j, c, true, true);
  if (f.grid_min || f.grid_max || f.grid_count) {
    json g = j.contains("grid") ? j.at("grid") : json{{"min", 0.0}, {"max", lietrack::deg_to_rad(3.0)}, {"count", 10}};
    if (f.grid_min) g["min"] = flag_angle(*f.grid_min, c);
    if (f.grid_max) g["max"] = flag_angle(*f.grid_max, c);
    if (f.grid_count) g["count"] = *f.grid_count;
    j["grid"] = g;
  }
  if (f.n_traj) j["n_traj"] = *f.n_traj;
  if (f.steps) j["steps"] = *f.steps;
  if (f.generator) j["generator"] = *f.generator;
  if (f.no_tune) j["tune_baselines"] = false;

  const auto cfg = lietrack::config::sweep_config(j);
  spdlog::info("sweep: {} grid points x {} trajectories, {} worker(s)", cfg.grid.count, cfg.n_traj, cfg.parallel);
  const auto res = lietrack::sweep(cfg);
  write_json(output_path(c, "sweep.json"), lietrack::io::to_json(res));
  write_file(output_path(c, "sweep.csv"), [&](std::ostream& os) { lietrack::io::write_sweep_csv(os, res); });
  int failures = 0;
  for (const auto& row : res.stats) {
    for (const auto& s : row) failures += s.failures;
  }
  if (failures > 0) spdlog::warn("{} filter run(s) failed and were excluded", failures);
}

// --- contour ----------------------------------------------------------------

struct ContourFlags {
  std::optional<double> sigma_omega, sigma_xy;
  std::optional<int> samples, compound;
};

void run_contour(const Common& c, const ContourFlags& f) {
  json j = load_config(c.config_path);
  apply_common(j, c, false, false);
  if (f.sigma_omega) j["sigma_omega"] = flag_angle(*f.sigma_omega, c);
  if (f.sigma_xy) j["sigma_xy"] = *f.sigma_xy;
  if (f.samples) j["n_samples"] = *f.samples;
  if (f.compound) j["n_compound"] = *f.compound;

  const auto res = lietrack::compound_samples(lietrack::config::contour_config(j));
  write_file(output_path(c, "contour.csv"), [&](std::ostream& os) { lietrack::io::write_contour_csv(os, res); });
  std::cout << "arc_spread " << res.arc_spread << '\n';
}

void setup_logging() {
  auto logger = spdlog::stderr_color_st("lietrack");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LIETRACK_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("unknown LIETRACK_LOG level '{}'", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Lie group tracking filters: simulation, tracking and benchmark sweeps"};
  app.require_subcommand(1);

  Common common;
  SimulateFlags sim;
  TrackFlags trk;
  SweepFlags swp;
  ContourFlags con;

  auto* simulate = app.add_subcommand("simulate", "Generate a trajectory with position measurements");
  add_common(simulate, common, false);
  simulate->add_option("--model", sim.model, "se2xse2 or se2xr3");
  simulate->add_option("--sigma-v", sim.sigma_v, "Velocity noise std (both axes)");
  simulate->add_option("--sigma-omega", sim.sigma_omega, "Turn-rate noise std, in --units");
  simulate->add_option("--meas-std", sim.meas_std, "Measurement std (both axes)");
  simulate->add_option("--steps", sim.steps, "Number of steps");
  simulate->add_option("--dt", sim.dt, "Time step");

  auto* track = app.add_subcommand("track", "Run filters over a stored trajectory");
  add_common(track, common, true);
  track->add_option("--trajectory", trk.trajectory, "Trajectory JSON")->required()->check(CLI::ExistingFile);
  track->add_option("--init", trk.init, "first-measurement or exact");
  track->add_option("--eval-start", trk.eval_start, "First step counted in the RMSE");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo RMSE sweep over turn-rate noise");
  add_common(sweep, common, true);
  sweep->add_option("--grid-min", swp.grid_min, "Smallest sigma_omega, in --units");
  sweep->add_option("--grid-max", swp.grid_max, "Largest sigma_omega, in --units");
  sweep->add_option("--grid-count", swp.grid_count, "Number of grid points");
  sweep->add_option("--n-traj", swp.n_traj, "Trajectories per grid point");
  sweep->add_option("--steps", swp.steps, "Steps per trajectory");
  sweep->add_option("--generator", swp.generator, "Truth model: se2xse2 or se2xr3");
  sweep->add_flag("--no-tune", swp.no_tune, "Use configured baseline noise instead of tuning");

  auto* contour = app.add_subcommand("contour", "Sample compounded uncertain transformations");
  add_common(contour, common, false);
  contour->add_option("--sigma-omega", con.sigma_omega, "Rotational std per increment, in --units");
  contour->add_option("--sigma-xy", con.sigma_xy, "Translational std per increment");
  contour->add_option("--samples", con.samples, "Number of samples");
  contour->add_option("--compound", con.compound, "Increments per sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*simulate) run_simulate(common, sim);
    else if (*track) run_track(common, trk);
    else if (*sweep) run_sweep(common, swp);
    else if (*contour) run_contour(common, con);
  } catch (const lietrack::ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const lietrack::DimensionMismatch& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const lietrack::MalformedAlgebraElement& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const lietrack::NumericalFailure& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const lietrack::NonPsdCovariance& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const json::exception& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
