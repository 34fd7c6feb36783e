#pragma once

#include <nlohmann/json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "lietrack/errors.hpp"
#include "lietrack/simbench.hpp"

// JSON and CSV forms of trajectories, estimates, sweep results and contour
// clouds. Every JSON artifact carries a "schema" field; angles are radians.

namespace lietrack::io {

using json = nlohmann::json;

inline constexpr const char* kTrajectorySchema = "lietrack.trajectory/1";
inline constexpr const char* kEstimatesSchema = "lietrack.estimates/1";
inline constexpr const char* kSweepSchema = "lietrack.sweep/1";

inline json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_vector(const json& j, const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    throw ValidationError(std::string(what) + ": expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

inline json state_to_json(const ProductElement& x) {
  const SE2& pose = x.se2(0);
  return {{"pose", {pose.translation()(0), pose.translation()(1), pose.theta()}},
          {"velocity", to_json(Eigen::VectorXd(velocity_of(x)))}};
}

inline ProductElement state_from_json(StateModel m, const json& j) {
  const auto pose = fixed_vector<3>(j.at("pose"), "pose");
  return make_state(m, SE2(pose(2), pose.head<2>()), fixed_vector<3>(j.at("velocity"), "velocity"));
}

inline json params_to_json(const TrajectoryParams& p) {
  return {{"model", std::string(to_string(p.model))},
          {"sigma_vx", p.noise.sigma_vx},
          {"sigma_vy", p.noise.sigma_vy},
          {"sigma_omega", p.noise.sigma_omega},
          {"meas_std", {p.meas_std(0), p.meas_std(1)}},
          {"steps", p.steps},
          {"dt", p.dt},
          {"initial_pose", {p.initial_pose.translation()(0), p.initial_pose.translation()(1), p.initial_pose.theta()}},
          {"initial_velocity", to_json(Eigen::VectorXd(p.initial_velocity))},
          {"seed", p.seed}};
}

inline TrajectoryParams params_from_json(const json& j) {
  TrajectoryParams p;
  p.model = state_model_from_string(j.at("model").get<std::string>());
  p.noise = {j.at("sigma_vx").get<double>(), j.at("sigma_vy").get<double>(), j.at("sigma_omega").get<double>()};
  p.meas_std = fixed_vector<2>(j.at("meas_std"), "meas_std");
  p.steps = j.at("steps").get<int>();
  p.dt = j.at("dt").get<double>();
  const auto pose = fixed_vector<3>(j.at("initial_pose"), "initial_pose");
  p.initial_pose = SE2(pose(2), pose.head<2>());
  p.initial_velocity = fixed_vector<3>(j.at("initial_velocity"), "initial_velocity");
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

inline json to_json(const TrajectoryRecord& r) {
  json truth = json::array();
  for (const auto& x : r.truth) truth.push_back(state_to_json(x));
  json meas = json::array();
  for (const auto& z : r.measurements) meas.push_back({z(0), z(1)});
  return {{"schema", kTrajectorySchema}, {"params", params_to_json(r.params)}, {"truth", truth}, {"measurements", meas}};
}

inline TrajectoryRecord trajectory_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kTrajectorySchema) {
      throw ValidationError("trajectory: unsupported schema '" + j.at("schema").get<std::string>() + "'");
    }
    TrajectoryRecord r;
    r.params = params_from_json(j.at("params"));
    for (const auto& s : j.at("truth")) r.truth.push_back(state_from_json(r.params.model, s));
    for (const auto& z : j.at("measurements")) r.measurements.push_back(fixed_vector<2>(z, "measurement"));
    if (r.truth.size() != r.measurements.size() || r.truth.empty()) {
      throw ValidationError("trajectory: truth and measurements must be non-empty and of equal length");
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trajectory: ") + e.what());
  }
}

/// CSV columns: k, x, y, theta, vx, vy, omega, zx, zy.
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& r) {
  os << "k,x,y,theta,vx,vy,omega,zx,zy\n" << std::setprecision(17);
  for (std::size_t k = 0; k < r.truth.size(); ++k) {
    const SE2& pose = r.truth[k].se2(0);
    const Eigen::Vector3d v = velocity_of(r.truth[k]);
    os << k << ',' << pose.translation()(0) << ',' << pose.translation()(1) << ',' << pose.theta() << ',' << v(0) << ','
       << v(1) << ',' << v(2) << ',' << r.measurements[k](0) << ',' << r.measurements[k](1) << '\n';
  }
}

inline json to_json(const EstimateSequence& e, const TrajectoryRecord& traj, std::size_t eval_start) {
  json steps = json::array();
  for (std::size_t k = 0; k < e.positions.size(); ++k) {
    json s = {{"k", k}, {"position", {e.positions[k](0), e.positions[k](1)}}, {"state", to_json(e.states[k])}};
    s["cov_trace"] = e.cov_trace[k];
    steps.push_back(std::move(s));
  }
  return {{"schema", kEstimatesSchema},
          {"filter", std::string(to_string(e.kind))},
          {"eval_start", eval_start},
          {"rmse", position_rmse(e.positions, truth_positions(traj), eval_start)},
          {"steps", steps}};
}

inline json to_json(const SweepConfig& c) {
  json filters = json::array();
  for (auto f : c.filters) filters.push_back(std::string(to_string(f)));
  return {{"generator", std::string(to_string(c.generator))},
          {"grid", {{"min", c.grid.min}, {"max", c.grid.max}, {"count", c.grid.count}, {"units", std::string(to_string(c.grid.units))}}},
          {"n_traj", c.n_traj},
          {"steps", c.steps},
          {"dt", c.dt},
          {"sigma_v", c.sigma_v},
          {"meas_std", {c.meas_std(0), c.meas_std(1)}},
          {"initial_velocity", to_json(Eigen::VectorXd(c.initial_velocity))},
          {"filters", filters},
          {"seed", c.seed},
          {"eval_start", c.eval_start},
          {"tune_baselines", c.tune_baselines},
          {"cv_q_candidates", c.cv_q_candidates},
          {"ctrv_candidates", c.ctrv_candidates}};
}

/// `parallel` is deliberately absent so the artifact is independent of worker count.
inline json to_json(const SweepResult& r) {
  json results = json::object();
  for (std::size_t f = 0; f < r.filters.size(); ++f) {
    json mean = json::array(), sd = json::array(), n = json::array(), fail = json::array();
    for (const auto& s : r.stats[f]) {
      mean.push_back(s.mean);
      sd.push_back(s.std);
      n.push_back(s.n);
      fail.push_back(s.failures);
    }
    results[std::string(to_string(r.filters[f]))] = {{"rmse_mean", mean}, {"rmse_std", sd}, {"n", n}, {"failures", fail}};
  }
  return {{"schema", kSweepSchema},
          {"config", to_json(r.config)},
          {"sigma_grid", r.sigma_grid},
          {"n_traj", r.config.n_traj},
          {"std_estimator", "sample (n-1)"},
          {"tuned", {{"cv_q", r.cv_q}, {"ctrv_intensity", r.ctrv_intensity}}},
          {"results", results}};
}

/// One row per (filter, sigma_omega); sigma_omega in radians.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "filter,sigma_omega,rmse_mean,rmse_std,n,failures\n" << std::setprecision(17);
  for (std::size_t f = 0; f < r.filters.size(); ++f) {
    for (std::size_t g = 0; g < r.sigma_grid.size(); ++g) {
      const auto& s = r.stats[f][g];
      os << to_string(r.filters[f]) << ',' << r.sigma_grid[g] << ',' << s.mean << ',' << s.std << ',' << s.n << ','
         << s.failures << '\n';
    }
  }
}

/// CSV columns: sample, step, x, y, theta.
inline void write_contour_csv(std::ostream& os, const ContourResult& c) {
  os << "sample,step,x,y,theta\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    for (std::size_t s = 0; s < c.samples[i].size(); ++s) {
      const SE2& g = c.samples[i][s];
      os << i << ',' << s + 1 << ',' << g.translation()(0) << ',' << g.translation()(1) << ',' << g.theta() << '\n';
    }
  }
}

}  // namespace lietrack::io
