#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>

#include "lietrack/errors.hpp"
#include "lietrack/filter.hpp"
#include "lietrack/se2.hpp"

// Euclidean-state comparison filters: linear KF with a constant-velocity model
// and EKF with a constant turn rate and velocity model. Both use the standard
// textbook forms with a position-only measurement.

namespace lietrack {

using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

/// (x, y, v_x, v_y) with covariance.
struct CvState {
  Vector4 x = Vector4::Zero();
  Matrix4 cov = Matrix4::Identity();
};

/// (x, y, theta, v, omega): position, heading, speed, turn rate.
struct CtrvState {
  Vector5 x = Vector5::Zero();
  Matrix5 cov = Matrix5::Identity();
};

/// Longitudinal and yaw acceleration std driving the CTRV process noise.
struct CtrvNoise {
  double sigma_accel = 0.1;
  double sigma_yaw_accel = 0.1;
};

namespace detail {

template <int N>
void linear_position_update(Eigen::Matrix<double, N, 1>& x, Eigen::Matrix<double, N, N>& cov,
                            const Eigen::Vector2d& z, const Eigen::Matrix2d& r) {
  Eigen::Matrix<double, 2, N> h = Eigen::Matrix<double, 2, N>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  Eigen::Matrix2d s = h * cov * h.transpose() + r;
  s = (0.5 * (s + s.transpose())).eval();
  const Eigen::LLT<Eigen::Matrix2d> llt(s);
  const double cond = condition_estimate(s);
  if (llt.info() != Eigen::Success || !(cond < 1e12)) {
    throw UpdateRejected("position update: innovation covariance is not invertible", cond);
  }
  const Eigen::Matrix<double, N, 2> gain = llt.solve(h * cov).transpose();
  x += gain * (z - h * x);
  cov = (Eigen::Matrix<double, N, N>::Identity() - gain * h) * cov;
  cov = (0.5 * (cov + cov.transpose())).eval();
}

}  // namespace detail

inline Matrix4 cv_transition(double dt) {
  Matrix4 f = Matrix4::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

/// Discrete white-noise acceleration with variance `q_intensity` per axis.
inline Matrix4 cv_process_noise(double q_intensity, double dt) {
  Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
  g(0, 0) = g(1, 1) = 0.5 * dt * dt;
  g(2, 0) = g(3, 1) = dt;
  return q_intensity * g * g.transpose();
}

inline CvState cv_predict(const CvState& s, double q_intensity, double dt) {
  const Matrix4 f = cv_transition(dt);
  CvState out;
  out.x = f * s.x;
  out.cov = f * s.cov * f.transpose() + cv_process_noise(q_intensity, dt);
  out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  return out;
}

inline CvState cv_update(const CvState& s, const Eigen::Vector2d& z, const Eigen::Matrix2d& r) {
  CvState out = s;
  detail::linear_position_update<4>(out.x, out.cov, z, r);
  return out;
}

inline CvState kf_cv_step(const CvState& s, const Eigen::Vector2d& z, double q_intensity, const Eigen::Matrix2d& r,
                          double dt) {
  return cv_update(cv_predict(s, q_intensity, dt), z, r);
}

/// Turn rates below this use the straight-line limit of the CTRV equations.
inline constexpr double kCtrvStraightThreshold = 1e-7;

inline Vector5 ctrv_propagate(const Vector5& s, double dt) {
  const double th = s(2), v = s(3), w = s(4);
  Vector5 out = s;
  if (std::abs(w) < kCtrvStraightThreshold) {
    // second-order term keeps the switch continuous in w
    out(0) += v * dt * std::cos(th) - 0.5 * v * w * dt * dt * std::sin(th);
    out(1) += v * dt * std::sin(th) + 0.5 * v * w * dt * dt * std::cos(th);
  } else {
    out(0) += v / w * (std::sin(th + w * dt) - std::sin(th));
    out(1) += v / w * (std::cos(th) - std::cos(th + w * dt));
  }
  out(2) = wrap_angle(th + w * dt);
  return out;
}

inline Matrix5 ctrv_jacobian(const Vector5& s, double dt) {
  const double th = s(2), v = s(3), w = s(4);
  Matrix5 j = Matrix5::Identity();
  const double c0 = std::cos(th), s0 = std::sin(th);
  if (std::abs(w) < kCtrvStraightThreshold) {
    j(0, 2) = -v * dt * s0;
    j(0, 3) = dt * c0;
    j(0, 4) = -0.5 * v * dt * dt * s0;
    j(1, 2) = v * dt * c0;
    j(1, 3) = dt * s0;
    j(1, 4) = 0.5 * v * dt * dt * c0;
  } else {
    const double c1 = std::cos(th + w * dt), s1 = std::sin(th + w * dt);
    j(0, 2) = v / w * (c1 - c0);
    j(0, 3) = (s1 - s0) / w;
    j(0, 4) = v * dt * c1 / w - v / (w * w) * (s1 - s0);
    j(1, 2) = v / w * (s1 - s0);
    j(1, 3) = (c0 - c1) / w;
    j(1, 4) = v * dt * s1 / w - v / (w * w) * (c0 - c1);
  }
  j(2, 4) = dt;
  return j;
}

inline Matrix5 ctrv_process_noise(const Vector5& s, const CtrvNoise& q, double dt) {
  Eigen::Matrix<double, 5, 2> g = Eigen::Matrix<double, 5, 2>::Zero();
  g(0, 0) = 0.5 * dt * dt * std::cos(s(2));
  g(1, 0) = 0.5 * dt * dt * std::sin(s(2));
  g(2, 1) = 0.5 * dt * dt;
  g(3, 0) = dt;
  g(4, 1) = dt;
  const Eigen::Vector2d var(q.sigma_accel * q.sigma_accel, q.sigma_yaw_accel * q.sigma_yaw_accel);
  return g * var.asDiagonal() * g.transpose();
}

inline CtrvState ctrv_predict(const CtrvState& s, const CtrvNoise& q, double dt) {
  const Matrix5 f = ctrv_jacobian(s.x, dt);
  CtrvState out;
  out.x = ctrv_propagate(s.x, dt);
  out.cov = f * s.cov * f.transpose() + ctrv_process_noise(s.x, q, dt);
  out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  if (!out.x.allFinite() || !out.cov.allFinite()) throw NumericalFailure("ctrv_predict: non-finite state");
  return out;
}

inline CtrvState ctrv_update(const CtrvState& s, const Eigen::Vector2d& z, const Eigen::Matrix2d& r) {
  CtrvState out = s;
  detail::linear_position_update<5>(out.x, out.cov, z, r);
  out.x(2) = wrap_angle(out.x(2));
  return out;
}

inline CtrvState ekf_ctrv_step(const CtrvState& s, const Eigen::Vector2d& z, const CtrvNoise& q,
                               const Eigen::Matrix2d& r, double dt) {
  return ctrv_update(ctrv_predict(s, q, dt), z, r);
}

}  // namespace lietrack
