#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lietrack/baselines.hpp"
#include "lietrack/distribution.hpp"
#include "lietrack/errors.hpp"
#include "lietrack/filter.hpp"
#include "lietrack/models.hpp"

namespace lietrack {

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrajectoryParams {
  StateModel model = StateModel::SE2xSE2;
  NoiseIntensities noise{0.1, 0.1, 0.0};
  Eigen::Vector2d meas_std{0.5, 0.5};
  int steps = 100;
  double dt = 1.0;
  SE2 initial_pose;
  Eigen::Vector3d initial_velocity{1.0, 0.0, 0.0};
  std::uint64_t seed = 1;

  void validate() const {
    noise.validate();
    if (steps < 1) throw ValidationError("steps must be >= 1");
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(meas_std.minCoeff() >= 0.0)) throw ValidationError("meas_std must be non-negative");
  }
};

/// Ground truth X_0..X_{steps-1} and position measurements z_k = position(X_k) + noise.
struct TrajectoryRecord {
  TrajectoryParams params;
  std::vector<ProductElement> truth;
  std::vector<Eigen::Vector2d> measurements;
};

/**
 * Draw order per step is fixed (three standard normals for the process noise,
 * then two for the measurement) so a record regenerates exactly from its
 * params and seed.
 */
inline TrajectoryRecord generate_trajectory(const TrajectoryParams& params) {
  params.validate();
  TrajectoryRecord rec;
  rec.params = params;
  rec.truth.reserve(static_cast<std::size_t>(params.steps));
  rec.measurements.reserve(static_cast<std::size_t>(params.steps));

  const GroupSignature sig = signature_of(params.model);
  const auto omega_fn = params.model == StateModel::SE2xSE2 ? omega_se2se2 : omega_se2r3;
  const Matrix b = noise_input_matrix(params.dt);
  const Eigen::Vector3d sigma(params.noise.sigma_vx, params.noise.sigma_vy, params.noise.sigma_omega);

  Rng rng(params.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  ProductElement x = make_state(params.model, params.initial_pose, params.initial_velocity);
  for (int k = 0; k < params.steps; ++k) {
    Eigen::Vector3d n;
    for (int i = 0; i < 3; ++i) n(i) = sigma(i) * n01(rng);
    Eigen::Vector2d m;
    for (int i = 0; i < 2; ++i) m(i) = params.meas_std(i) * n01(rng);

    rec.truth.push_back(x);
    rec.measurements.emplace_back(x.se2(0).translation() + m);
    x = compose(x, exp_group(sig, omega_fn(x, params.dt) + b * n));
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

enum class FilterKind { LgEkfSE2xSE2, LgEkfSE2xR3, KfCv, EkfCtrv, Measurement };

inline constexpr FilterKind kAllFilters[] = {FilterKind::LgEkfSE2xSE2, FilterKind::LgEkfSE2xR3, FilterKind::KfCv,
                                             FilterKind::EkfCtrv, FilterKind::Measurement};

inline std::string_view to_string(FilterKind f) {
  switch (f) {
    case FilterKind::LgEkfSE2xSE2: return "lgekf-se2xse2";
    case FilterKind::LgEkfSE2xR3: return "lgekf-se2xr3";
    case FilterKind::KfCv: return "kf-cv";
    case FilterKind::EkfCtrv: return "ekf-ctrv";
    case FilterKind::Measurement: return "measurement";
  }
  return "?";
}

inline std::string valid_filter_names() {
  std::string out;
  for (auto f : kAllFilters) {
    if (!out.empty()) out += ", ";
    out += to_string(f);
  }
  return out;
}

inline FilterKind filter_from_string(std::string_view s) {
  for (auto f : kAllFilters) {
    if (to_string(f) == s) return f;
  }
  throw ValidationError("unknown filter '" + std::string(s) + "' (valid: " + valid_filter_names() + ")");
}

inline bool is_lie_group_filter(FilterKind f) {
  return f == FilterKind::LgEkfSE2xSE2 || f == FilterKind::LgEkfSE2xR3;
}

enum class InitPolicy {
  FirstMeasurement,  // position from z_0, heading 0, velocities 0
  Exact,             // truth[0], converted to the filter's state
};

/// Measurement std used inside filters is floored here so S stays invertible on noise-free data.
inline constexpr double kMinFilterMeasStd = 1e-3;

struct FilterConfig {
  FilterKind kind = FilterKind::LgEkfSE2xSE2;
  NoiseIntensities noise{0.1, 0.1, 0.0};  // LG-EKF process noise
  double cv_q = 0.01;                      // KF-CV acceleration variance
  CtrvNoise ctrv{};                        // EKF-CTRV noise
  Eigen::Vector2d meas_std{0.5, 0.5};
  InitPolicy init = InitPolicy::FirstMeasurement;
};

/// Filter config whose LG-EKF noise and measurement std match the trajectory generator.
inline FilterConfig matched_config(FilterKind kind, const TrajectoryParams& p) {
  FilterConfig c;
  c.kind = kind;
  c.noise = p.noise;
  c.meas_std = p.meas_std;
  return c;
}

struct EstimateSequence {
  FilterKind kind = FilterKind::Measurement;
  std::vector<Eigen::Vector2d> positions;
  std::vector<Vector> states;  // flat filter state per step
  std::vector<double> cov_trace;
};

/// Numerical failure annotated with the step at which it occurred.
class StepFailure : public NumericalFailure {
public:
  StepFailure(int step, const std::string& what)
      : NumericalFailure("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const noexcept { return step_; }

private:
  int step_;
};

namespace detail {

inline Vector flat_lg_state(const ProductElement& x) {
  Vector v(6);
  const SE2& pose = x.se2(0);
  v << pose.translation(), pose.theta(), velocity_of(x);
  return v;
}

/// World-frame velocity and course of a state for baseline initialization.
inline Eigen::Vector2d world_velocity(const ProductElement& x) {
  return x.se2(0).rotation() * velocity_of(x).head<2>();
}

inline EstimateSequence run_lie_group(const TrajectoryRecord& traj, const FilterConfig& cfg, const Eigen::Vector2d& ms) {
  const StateModel model = cfg.kind == FilterKind::LgEkfSE2xSE2 ? StateModel::SE2xSE2 : StateModel::SE2xR3;
  const double dt = traj.params.dt;
  const MotionModel motion = make_motion_model(model, cfg.noise, dt);
  const MeasurementModel meas = make_position_measurement(ms);
  const GroupSignature zsig = GroupSignature::euclidean(2);

  ProductElement mean0;
  if (cfg.init == InitPolicy::Exact) {
    const auto& t0 = traj.truth.front();
    mean0 = make_state(model, t0.se2(0), velocity_of(t0));
  } else {
    mean0 = make_state(model, SE2(0.0, traj.measurements.front()), Eigen::Vector3d::Zero());
  }
  Vector d0(6);
  d0 << ms(0) * ms(0), ms(1) * ms(1), std::pow(std::numbers::pi / 2.0, 2), 1.0, 1.0, 0.25;
  GroupGaussian state(mean0, Matrix(d0.asDiagonal()));

  EstimateSequence out;
  out.kind = cfg.kind;
  const std::size_t n = traj.measurements.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      try {
        state = predict(state, motion);
        state = update(state, ProductElement(zsig, {Vector(traj.measurements[k])}), meas);
      } catch (const NumericalFailure& e) {
        throw StepFailure(static_cast<int>(k), e.what());
      } catch (const NonPsdCovariance& e) {
        throw StepFailure(static_cast<int>(k), e.what());
      }
    }
    out.positions.push_back(state.mean().se2(0).translation());
    out.states.push_back(flat_lg_state(state.mean()));
    out.cov_trace.push_back(state.covariance().trace());
  }
  return out;
}

template <class State, class Step, class Pos>
EstimateSequence run_euclidean(const TrajectoryRecord& traj, FilterKind kind, State s, Step&& step, Pos&& pos) {
  EstimateSequence out;
  out.kind = kind;
  const std::size_t n = traj.measurements.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      try {
        s = step(s, traj.measurements[k]);
      } catch (const NumericalFailure& e) {
        throw StepFailure(static_cast<int>(k), e.what());
      }
      if (!s.x.allFinite()) throw StepFailure(static_cast<int>(k), "non-finite state");
    }
    out.positions.push_back(pos(s));
    out.states.push_back(Vector(s.x));
    out.cov_trace.push_back(s.cov.trace());
  }
  return out;
}

}  // namespace detail

/// Sequential predict/update over every measurement; estimate 0 is the initialization.
inline EstimateSequence run_filter(const TrajectoryRecord& traj, const FilterConfig& cfg) {
  if (traj.measurements.empty() || traj.truth.size() != traj.measurements.size()) {
    throw DimensionMismatch("run_filter: trajectory is empty or inconsistent");
  }
  const Eigen::Vector2d ms = cfg.meas_std.cwiseMax(kMinFilterMeasStd);
  const Eigen::Matrix2d r = Eigen::Vector2d(ms.cwiseProduct(ms)).asDiagonal();
  const double dt = traj.params.dt;
  const auto& t0 = traj.truth.front();
  const Eigen::Vector2d& z0 = traj.measurements.front();

  switch (cfg.kind) {
    case FilterKind::LgEkfSE2xSE2:
    case FilterKind::LgEkfSE2xR3:
      return detail::run_lie_group(traj, cfg, ms);

    case FilterKind::KfCv: {
      CvState s;
      if (cfg.init == InitPolicy::Exact) s.x << t0.se2(0).translation(), detail::world_velocity(t0);
      else s.x << z0, 0.0, 0.0;
      s.cov = Vector4(ms(0) * ms(0), ms(1) * ms(1), 1.0, 1.0).asDiagonal();
      return detail::run_euclidean(
          traj, cfg.kind, s, [&](const CvState& st, const Eigen::Vector2d& z) { return kf_cv_step(st, z, cfg.cv_q, r, dt); },
          [](const CvState& st) { return Eigen::Vector2d(st.x.head<2>()); });
    }

    case FilterKind::EkfCtrv: {
      CtrvState s;
      if (cfg.init == InitPolicy::Exact) {
        const Eigen::Vector2d vw = detail::world_velocity(t0);
        s.x << t0.se2(0).translation(), std::atan2(vw(1), vw(0)), vw.norm(), velocity_of(t0)(2);
      } else {
        s.x << z0, 0.0, 0.0, 0.0;
      }
      s.cov = Vector5(ms(0) * ms(0), ms(1) * ms(1), std::pow(std::numbers::pi / 2.0, 2), 1.0, 0.25).asDiagonal();
      return detail::run_euclidean(
          traj, cfg.kind, s,
          [&](const CtrvState& st, const Eigen::Vector2d& z) { return ekf_ctrv_step(st, z, cfg.ctrv, r, dt); },
          [](const CtrvState& st) { return Eigen::Vector2d(st.x.head<2>()); });
    }

    case FilterKind::Measurement: {
      EstimateSequence out;
      out.kind = cfg.kind;
      for (const auto& z : traj.measurements) {
        out.positions.push_back(z);
        out.states.push_back(Vector(z));
        out.cov_trace.push_back(r.trace());
      }
      return out;
    }
  }
  throw ValidationError("run_filter: unknown filter");
}

/// sqrt(mean ||est_k - truth_k||^2) over k >= eval_start.
inline double position_rmse(const std::vector<Eigen::Vector2d>& estimates, const std::vector<Eigen::Vector2d>& truth,
                            std::size_t eval_start = 0) {
  if (estimates.size() != truth.size()) throw DimensionMismatch("position_rmse: length mismatch");
  if (eval_start >= estimates.size()) throw DimensionMismatch("position_rmse: no steps to evaluate");
  double acc = 0.0;
  for (std::size_t k = eval_start; k < estimates.size(); ++k) acc += (estimates[k] - truth[k]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(estimates.size() - eval_start));
}

inline std::vector<Eigen::Vector2d> truth_positions(const TrajectoryRecord& traj) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(traj.truth.size());
  for (const auto& x : traj.truth) out.push_back(x.se2(0).translation());
  return out;
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

enum class AngleUnit { Degrees, Radians };

inline std::string_view to_string(AngleUnit u) { return u == AngleUnit::Degrees ? "deg" : "rad"; }

inline AngleUnit angle_unit_from_string(std::string_view s) {
  if (s == "deg") return AngleUnit::Degrees;
  if (s == "rad") return AngleUnit::Radians;
  throw ValidationError("unknown units '" + std::string(s) + "' (valid: deg, rad)");
}

inline double to_radians(double v, AngleUnit u) { return u == AngleUnit::Degrees ? deg_to_rad(v) : v; }

/// `count` equidistant sigma_omega values over [min, max], given in `units`.
struct GridSpec {
  double min = 0.0;
  double max = 3.0;
  int count = 10;
  AngleUnit units = AngleUnit::Degrees;

  std::vector<double> radians() const {
    if (count < 1) throw ValidationError("grid count must be >= 1");
    if (!(max >= min) || !(min >= 0.0)) throw ValidationError("grid requires 0 <= min <= max");
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
      const double v = count == 1 ? min : min + (max - min) * i / (count - 1);
      out.push_back(to_radians(v, units));
    }
    return out;
  }
};

struct SweepConfig {
  StateModel generator = StateModel::SE2xSE2;
  GridSpec grid;
  int n_traj = 20;
  int steps = 100;
  double dt = 1.0;
  double sigma_v = 0.1;
  Eigen::Vector2d meas_std{0.5, 0.5};
  Eigen::Vector3d initial_velocity{1.0, 0.0, 0.0};
  std::vector<FilterKind> filters{std::begin(kAllFilters), std::end(kAllFilters)};
  std::uint64_t seed = 1;
  int eval_start = 5;
  bool tune_baselines = true;
  double cv_q = 0.01;         // used when tune_baselines is false
  double ctrv_intensity = 0.1;  // sigma_accel = sigma_yaw_accel, used when tune_baselines is false
  std::vector<double> cv_q_candidates{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
  std::vector<double> ctrv_candidates{3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0};
  int parallel = 1;

  void validate() const {
    (void)grid.radians();
    if (n_traj < 1) throw ValidationError("n_traj must be >= 1");
    if (steps < 1) throw ValidationError("steps must be >= 1");
    if (eval_start < 0 || eval_start >= steps) throw ValidationError("eval_start must be in [0, steps)");
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(sigma_v >= 0.0)) throw ValidationError("sigma_v must be non-negative");
    if (filters.empty()) throw ValidationError("filter list is empty");
    if (parallel < 1) throw ValidationError("parallel must be >= 1");
    if (tune_baselines && (cv_q_candidates.empty() || ctrv_candidates.empty())) {
      throw ValidationError("baseline tuning needs non-empty candidate lists");
    }
  }
};

struct FilterStats {
  double mean = 0.0;
  double std = 0.0;  // sample std (n - 1); 0 for n < 2
  int n = 0;
  int failures = 0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<double> sigma_grid;  // radians
  std::vector<FilterKind> filters;
  std::vector<std::vector<FilterStats>> stats;  // [filter][grid point]
  double cv_q = 0.0;
  double ctrv_intensity = 0.0;

  const std::vector<FilterStats>& of(FilterKind f) const {
    for (std::size_t i = 0; i < filters.size(); ++i) {
      if (filters[i] == f) return stats[i];
    }
    throw ValidationError("filter '" + std::string(to_string(f)) + "' not in sweep result");
  }
};

/// Mean and sample standard deviation (n - 1).
inline FilterStats summarize(const std::vector<double>& values, int failures = 0) {
  FilterStats s;
  s.n = static_cast<int>(values.size());
  s.failures = failures;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

/// splitmix64-based seed derivation; independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

/// Runs task(i) for i in [0, n) on `workers` threads; results go to caller-owned slots.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline TrajectoryParams sweep_trajectory_params(const SweepConfig& cfg, double sigma_omega, std::uint64_t seed) {
  TrajectoryParams p;
  p.model = cfg.generator;
  p.noise = {cfg.sigma_v, cfg.sigma_v, sigma_omega};
  p.meas_std = cfg.meas_std;
  p.steps = cfg.steps;
  p.dt = cfg.dt;
  p.initial_velocity = cfg.initial_velocity;
  p.seed = seed;
  return p;
}

namespace detail {

inline constexpr std::uint64_t kTuningStream = 0x7475'6e65ULL;

/// RMSE of one filter on one trajectory, or nullopt on numerical failure.
inline std::optional<double> try_rmse(const TrajectoryRecord& traj, const FilterConfig& fc, int eval_start) {
  try {
    const auto est = run_filter(traj, fc);
    const double e = position_rmse(est.positions, truth_positions(traj), static_cast<std::size_t>(eval_start));
    if (!std::isfinite(e)) return std::nullopt;
    return e;
  } catch (const NumericalFailure&) {
    return std::nullopt;
  } catch (const NonPsdCovariance&) {
    return std::nullopt;
  }
}

/// Picks the candidate with the lowest mean RMSE on the tuning trajectories.
inline double tune_scalar(const std::vector<TrajectoryRecord>& trajs, const std::vector<double>& candidates,
                          const std::function<FilterConfig(const TrajectoryParams&, double)>& make, int eval_start,
                          int workers) {
  std::vector<double> score(candidates.size(), std::numeric_limits<double>::infinity());
  parallel_for(candidates.size(), workers, [&](std::size_t c) {
    double sum = 0.0;
    for (const auto& t : trajs) {
      const auto e = try_rmse(t, make(t.params, candidates[c]), eval_start);
      if (!e) return;
      sum += *e;
    }
    score[c] = sum / static_cast<double>(trajs.size());
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (score[c] < score[best]) best = c;
  }
  return candidates[best];
}

}  // namespace detail

inline FilterConfig sweep_filter_config(FilterKind kind, const TrajectoryParams& p, double cv_q, double ctrv_intensity) {
  FilterConfig c = matched_config(kind, p);
  c.cv_q = cv_q;
  c.ctrv = {ctrv_intensity, ctrv_intensity};
  return c;
}

/**
 * @brief sigma_omega sweep: n_traj trajectories per grid point, every filter on each.
 *
 * Baseline noise intensities are grid-searched once at the middle of the
 * sigma range (on a separate seed stream) and frozen for the whole sweep.
 * The LG-EKF filters use the generator's noise intensities. Failed runs are
 * counted and excluded from the statistics. Output does not depend on
 * `parallel`.
 */
inline SweepResult sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.config = cfg;
  res.sigma_grid = cfg.grid.radians();
  res.filters = cfg.filters;
  res.cv_q = cfg.cv_q;
  res.ctrv_intensity = cfg.ctrv_intensity;

  const bool has_cv = std::find(cfg.filters.begin(), cfg.filters.end(), FilterKind::KfCv) != cfg.filters.end();
  const bool has_ctrv = std::find(cfg.filters.begin(), cfg.filters.end(), FilterKind::EkfCtrv) != cfg.filters.end();
  if (cfg.tune_baselines && (has_cv || has_ctrv)) {
    const double mid = 0.5 * (res.sigma_grid.front() + res.sigma_grid.back());
    std::vector<TrajectoryRecord> tuning(static_cast<std::size_t>(cfg.n_traj));
    parallel_for(tuning.size(), cfg.parallel, [&](std::size_t j) {
      tuning[j] = generate_trajectory(sweep_trajectory_params(cfg, mid, derive_seed(cfg.seed, detail::kTuningStream, j)));
    });
    if (has_cv) {
      res.cv_q = detail::tune_scalar(
          tuning, cfg.cv_q_candidates,
          [&](const TrajectoryParams& p, double q) { return sweep_filter_config(FilterKind::KfCv, p, q, cfg.ctrv_intensity); },
          cfg.eval_start, cfg.parallel);
    }
    if (has_ctrv) {
      res.ctrv_intensity = detail::tune_scalar(
          tuning, cfg.ctrv_candidates,
          [&](const TrajectoryParams& p, double s) { return sweep_filter_config(FilterKind::EkfCtrv, p, cfg.cv_q, s); },
          cfg.eval_start, cfg.parallel);
    }
  }

  const std::size_t n_grid = res.sigma_grid.size();
  const std::size_t n_traj = static_cast<std::size_t>(cfg.n_traj);
  const std::size_t n_filt = cfg.filters.size();
  // rmse[(g * n_traj + j) * n_filt + f]
  std::vector<std::optional<double>> rmse(n_grid * n_traj * n_filt);
  parallel_for(n_grid * n_traj, cfg.parallel, [&](std::size_t task) {
    const std::size_t g = task / n_traj, j = task % n_traj;
    const auto traj = generate_trajectory(sweep_trajectory_params(cfg, res.sigma_grid[g], derive_seed(cfg.seed, g, j)));
    for (std::size_t f = 0; f < n_filt; ++f) {
      rmse[task * n_filt + f] =
          detail::try_rmse(traj, sweep_filter_config(cfg.filters[f], traj.params, res.cv_q, res.ctrv_intensity), cfg.eval_start);
    }
  });

  res.stats.assign(n_filt, std::vector<FilterStats>(n_grid));
  for (std::size_t f = 0; f < n_filt; ++f) {
    for (std::size_t g = 0; g < n_grid; ++g) {
      std::vector<double> vals;
      int failures = 0;
      for (std::size_t j = 0; j < n_traj; ++j) {
        const auto& e = rmse[(g * n_traj + j) * n_filt + f];
        if (e) vals.push_back(*e);
        else ++failures;
      }
      res.stats[f][g] = summarize(vals, failures);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Compounded uncertain transformations (banana-shaped clouds)
// ---------------------------------------------------------------------------

struct ContourConfig {
  Eigen::Vector3d step{1.0, 0.0, 0.0};  // mean increment in se(2) coordinates
  double sigma_xy = 0.05;               // translational std per increment
  double sigma_omega = 0.0;             // rotational std per increment, radians
  int n_samples = 50;
  int n_compound = 2;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
    if (n_compound < 1) throw ValidationError("n_compound must be >= 1");
    if (!(sigma_xy >= 0.0) || !(sigma_omega >= 0.0)) throw ValidationError("contour sigmas must be non-negative");
  }
};

struct ContourResult {
  ContourConfig config;
  std::vector<std::vector<SE2>> samples;  // [sample][compound index], pose after each increment
  double arc_spread = 0.0;                // mean range times std of bearing of the final positions
};

/// Bearing spread of a point cloud around the origin, scaled to arc length.
inline double arc_spread(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 2) return 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  const double ref = std::atan2(mean(1), mean(0));
  double range = 0.0;
  std::vector<double> bearings;
  for (const auto& p : pts) {
    range += p.norm();
    bearings.push_back(wrap_angle(std::atan2(p(1), p(0)) - ref));
  }
  range /= static_cast<double>(pts.size());
  return range * summarize(bearings).std;
}

inline ContourResult compound_samples(const ContourConfig& cfg) {
  cfg.validate();
  const GroupSignature sig({FactorSpec::se2()});
  const ProductElement step(sig, {exp_se2(cfg.step)});
  const Eigen::Vector3d var(cfg.sigma_xy * cfg.sigma_xy, cfg.sigma_xy * cfg.sigma_xy, cfg.sigma_omega * cfg.sigma_omega);
  const GroupGaussian increment(step, Matrix(var.asDiagonal()));
  const Matrix root = covariance_sqrt(increment.covariance());

  ContourResult res;
  res.config = cfg;
  Rng rng(cfg.seed);
  std::vector<Eigen::Vector2d> finals;
  for (int i = 0; i < cfg.n_samples; ++i) {
    std::vector<SE2> path;
    ProductElement x = identity(sig);
    for (int c = 0; c < cfg.n_compound; ++c) {
      x = compose(x, compose(step, exp_group(sig, sample_tangent(root, rng))));
      path.push_back(x.se2(0));
    }
    finals.push_back(path.back().translation());
    res.samples.push_back(std::move(path));
  }
  res.arc_spread = arc_spread(finals);
  return res;
}

}  // namespace lietrack
