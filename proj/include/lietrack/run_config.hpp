#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lietrack/errors.hpp"
#include "lietrack/simbench.hpp"

// Config-file readers for the command-line tool. Files always carry angles in
// radians. Each reader rejects keys it does not know and reports the key on
// type errors.

namespace lietrack::config {

using json = nlohmann::json;

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
}

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      std::string valid;
      for (const auto& a : allowed) valid += (valid.empty() ? "" : ", ") + a;
      throw ValidationError(where + ": unknown key '" + key + "' (valid: " + valid + ")");
    }
  }
}

template <class T>
std::optional<T> get(const json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config key '" + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("missing required key '" + key + "'");
  return *get<T>(j, key);
}

template <int N>
std::optional<Eigen::Matrix<double, N, 1>> get_vector(const json& j, const std::string& key) {
  const auto v = get<std::vector<double>>(j, key);
  if (!v) return std::nullopt;
  if (v->size() != static_cast<std::size_t>(N)) {
    throw ValidationError("config key '" + key + "' must have " + std::to_string(N) + " entries");
  }
  return Eigen::Matrix<double, N, 1>(v->data());
}

/// Either a scalar applied to both axes or a 2-vector.
inline std::optional<Eigen::Vector2d> get_meas_std(const json& j) {
  if (!j.contains("meas_std")) return std::nullopt;
  if (j.at("meas_std").is_number()) return Eigen::Vector2d::Constant(j.at("meas_std").get<double>());
  return get_vector<2>(j, "meas_std");
}

inline std::vector<FilterKind> parse_filters(const std::vector<std::string>& names) {
  std::vector<FilterKind> out;
  for (const auto& n : names) out.push_back(filter_from_string(n));
  return out;
}

inline InitPolicy init_policy_from_string(const std::string& s) {
  if (s == "first-measurement") return InitPolicy::FirstMeasurement;
  if (s == "exact") return InitPolicy::Exact;
  throw ValidationError("unknown init policy '" + s + "' (valid: first-measurement, exact)");
}

inline const char* to_string(InitPolicy p) { return p == InitPolicy::Exact ? "exact" : "first-measurement"; }

/// simulate: "model" is required.
inline TrajectoryParams trajectory_params(const json& j) {
  reject_unknown(j,
                 {"model", "sigma_vx", "sigma_vy", "sigma_omega", "meas_std", "steps", "dt", "seed", "initial_pose",
                  "initial_velocity"},
                 "simulate config");
  TrajectoryParams p;
  p.model = state_model_from_string(require<std::string>(j, "model"));
  p.noise.sigma_vx = get<double>(j, "sigma_vx").value_or(p.noise.sigma_vx);
  p.noise.sigma_vy = get<double>(j, "sigma_vy").value_or(p.noise.sigma_vy);
  p.noise.sigma_omega = get<double>(j, "sigma_omega").value_or(p.noise.sigma_omega);
  p.meas_std = get_meas_std(j).value_or(p.meas_std);
  p.steps = get<int>(j, "steps").value_or(p.steps);
  p.dt = get<double>(j, "dt").value_or(p.dt);
  p.seed = get<std::uint64_t>(j, "seed").value_or(p.seed);
  if (const auto pose = get_vector<3>(j, "initial_pose")) p.initial_pose = SE2((*pose)(2), pose->head<2>());
  p.initial_velocity = get_vector<3>(j, "initial_velocity").value_or(p.initial_velocity);
  return p;
}

struct TrackConfig {
  std::vector<FilterKind> filters{FilterKind::LgEkfSE2xSE2};
  std::optional<NoiseIntensities> noise;  // defaults to the trajectory's generator noise
  std::optional<Eigen::Vector2d> meas_std;
  double cv_q = 0.01;
  double ctrv_intensity = 0.1;
  InitPolicy init = InitPolicy::FirstMeasurement;
  int eval_start = 0;
};

inline TrackConfig track_config(const json& j) {
  reject_unknown(j,
                 {"filters", "sigma_vx", "sigma_vy", "sigma_omega", "meas_std", "cv_q", "ctrv_intensity", "init",
                  "eval_start"},
                 "track config");
  TrackConfig c;
  if (const auto f = get<std::vector<std::string>>(j, "filters")) c.filters = parse_filters(*f);
  if (j.contains("sigma_vx") || j.contains("sigma_vy") || j.contains("sigma_omega")) {
    c.noise = NoiseIntensities{require<double>(j, "sigma_vx"), require<double>(j, "sigma_vy"),
                               require<double>(j, "sigma_omega")};
  }
  c.meas_std = get_meas_std(j);
  c.cv_q = get<double>(j, "cv_q").value_or(c.cv_q);
  c.ctrv_intensity = get<double>(j, "ctrv_intensity").value_or(c.ctrv_intensity);
  if (const auto s = get<std::string>(j, "init")) c.init = init_policy_from_string(*s);
  c.eval_start = get<int>(j, "eval_start").value_or(c.eval_start);
  return c;
}

/// Grid bounds in a file are radians.
inline SweepConfig sweep_config(const json& j) {
  reject_unknown(j,
                 {"generator", "grid", "n_traj", "steps", "dt", "sigma_v", "meas_std", "initial_velocity", "filters",
                  "seed", "eval_start", "tune_baselines", "cv_q", "ctrv_intensity", "cv_q_candidates",
                  "ctrv_candidates", "parallel"},
                 "sweep config");
  SweepConfig c;
  if (const auto g = get<std::string>(j, "generator")) c.generator = state_model_from_string(*g);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"min", "max", "count"}, "sweep config grid");
    c.grid.min = require<double>(g, "min");
    c.grid.max = require<double>(g, "max");
    c.grid.count = require<int>(g, "count");
    c.grid.units = AngleUnit::Radians;
  }
  c.n_traj = get<int>(j, "n_traj").value_or(c.n_traj);
  c.steps = get<int>(j, "steps").value_or(c.steps);
  c.dt = get<double>(j, "dt").value_or(c.dt);
  c.sigma_v = get<double>(j, "sigma_v").value_or(c.sigma_v);
  c.meas_std = get_meas_std(j).value_or(c.meas_std);
  c.initial_velocity = get_vector<3>(j, "initial_velocity").value_or(c.initial_velocity);
  if (const auto f = get<std::vector<std::string>>(j, "filters")) c.filters = parse_filters(*f);
  c.seed = get<std::uint64_t>(j, "seed").value_or(c.seed);
  c.eval_start = get<int>(j, "eval_start").value_or(c.eval_start);
  c.tune_baselines = get<bool>(j, "tune_baselines").value_or(c.tune_baselines);
  c.cv_q = get<double>(j, "cv_q").value_or(c.cv_q);
  c.ctrv_intensity = get<double>(j, "ctrv_intensity").value_or(c.ctrv_intensity);
  c.cv_q_candidates = get<std::vector<double>>(j, "cv_q_candidates").value_or(c.cv_q_candidates);
  c.ctrv_candidates = get<std::vector<double>>(j, "ctrv_candidates").value_or(c.ctrv_candidates);
  c.parallel = get<int>(j, "parallel").value_or(c.parallel);
  return c;
}

inline ContourConfig contour_config(const json& j) {
  reject_unknown(j, {"step", "sigma_xy", "sigma_omega", "n_samples", "n_compound", "seed"}, "contour config");
  ContourConfig c;
  c.step = get_vector<3>(j, "step").value_or(c.step);
  c.sigma_xy = get<double>(j, "sigma_xy").value_or(c.sigma_xy);
  c.sigma_omega = get<double>(j, "sigma_omega").value_or(c.sigma_omega);
  c.n_samples = get<int>(j, "n_samples").value_or(c.n_samples);
  c.n_compound = get<int>(j, "n_compound").value_or(c.n_compound);
  c.seed = get<std::uint64_t>(j, "seed").value_or(c.seed);
  return c;
}

}  // namespace lietrack::config
