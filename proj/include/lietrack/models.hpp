#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "lietrack/errors.hpp"
#include "lietrack/filter.hpp"
#include "lietrack/product_group.hpp"

namespace lietrack {

/// The two state spaces: pose x velocity-as-SE(2), or pose x raw velocity vector.
enum class StateModel { SE2xSE2, SE2xR3 };

inline GroupSignature signature_of(StateModel m) {
  return m == StateModel::SE2xSE2 ? GroupSignature::se2_se2() : GroupSignature::se2_r3();
}

inline std::string_view to_string(StateModel m) { return m == StateModel::SE2xSE2 ? "se2xse2" : "se2xr3"; }

inline StateModel state_model_from_string(std::string_view s) {
  if (s == "se2xse2") return StateModel::SE2xSE2;
  if (s == "se2xr3") return StateModel::SE2xR3;
  throw ValidationError("unknown model '" + std::string(s) + "' (valid: se2xse2, se2xr3)");
}

inline double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Per-step acceleration-like noise std; sigma_omega is in radians.
struct NoiseIntensities {
  double sigma_vx = 0.0;
  double sigma_vy = 0.0;
  double sigma_omega = 0.0;

  void validate() const {
    if (!(sigma_vx >= 0.0) || !(sigma_vy >= 0.0) || !(sigma_omega >= 0.0)) {
      throw ValidationError("noise intensities must be non-negative");
    }
  }
};

namespace detail {

inline void require_model(const ProductElement& x, StateModel m, const char* where) {
  require_same(x.signature(), signature_of(m), where);
}

}  // namespace detail

/// (v_x, v_y, omega) of a state: T_d's translation and angle for SE(2)^2, the raw vector for SE(2)xR^3.
inline Eigen::Vector3d velocity_of(const ProductElement& x) {
  if (x.signature().factor(1).kind == FactorSpec::Kind::SE2) {
    const SE2& td = x.se2(1);
    return {td.translation()(0), td.translation()(1), td.theta()};
  }
  return x.vec(1).head<3>();
}

/// Builds a state from pose and (v_x, v_y, omega) in either model.
inline ProductElement make_state(StateModel m, const SE2& pose, const Eigen::Vector3d& velocity) {
  if (m == StateModel::SE2xSE2) {
    return {signature_of(m), {pose, SE2(velocity(2), velocity.head<2>())}};
  }
  return {signature_of(m), {pose, Vector(velocity)}};
}

inline Vector omega_se2se2(const ProductElement& x, double dt) {
  detail::require_model(x, StateModel::SE2xSE2, "omega_se2se2");
  Vector out = Vector::Zero(6);
  out.head<3>() = dt * velocity_of(x);
  return out;
}

/// Zero except the upper-right block dt [[cos w, -sin w, 0], [sin w, cos w, 0], [0, 0, 1]].
inline Matrix c_matrix_se2se2(const ProductElement& mu, double dt) {
  detail::require_model(mu, StateModel::SE2xSE2, "c_matrix_se2se2");
  Matrix c = Matrix::Zero(6, 6);
  c.block<2, 2>(0, 3) = dt * mu.se2(1).rotation();
  c(2, 5) = dt;
  return c;
}

inline Vector omega_se2r3(const ProductElement& x, double dt) {
  detail::require_model(x, StateModel::SE2xR3, "omega_se2r3");
  Vector out = Vector::Zero(6);
  out.head<3>() = dt * x.vec(1);
  return out;
}

inline Matrix c_matrix_se2r3(const ProductElement& mu, double dt) {
  detail::require_model(mu, StateModel::SE2xR3, "c_matrix_se2r3");
  Matrix c = Matrix::Zero(6, 6);
  c.block<3, 3>(0, 3) = dt * Eigen::Matrix3d::Identity();
  return c;
}

/// Noise map B = [dt^2/2 I3; dt I3], so n_k = B (n_x, n_y, n_omega).
inline Matrix noise_input_matrix(double dt) {
  Matrix b(6, 3);
  b.topRows<3>() = 0.5 * dt * dt * Eigen::Matrix3d::Identity();
  b.bottomRows<3>() = dt * Eigen::Matrix3d::Identity();
  return b;
}

/// Q = B diag(sigma^2) B^T: the covariance of the structured white-acceleration noise.
inline Matrix process_noise_q(const NoiseIntensities& n, double dt) {
  const Matrix b = noise_input_matrix(dt);
  const Eigen::Vector3d var(n.sigma_vx * n.sigma_vx, n.sigma_vy * n.sigma_vy, n.sigma_omega * n.sigma_omega);
  return b * var.asDiagonal() * b.transpose();
}

/// Position of the pose factor as an element of G' = R^2.
inline ProductElement h_position(const ProductElement& x) {
  if (x.size() == 0 || x.signature().factor(0).kind != FactorSpec::Kind::SE2) {
    throw DimensionMismatch("h_position: first factor must be SE2");
  }
  return {GroupSignature::euclidean(2), {Vector(x.se2(0).translation())}};
}

/// [[cos th, -sin th, 0, ...], [sin th, cos th, 0, ...]] with th the pose heading.
inline Matrix h_jacobian_position(const ProductElement& mu) {
  if (mu.size() == 0 || mu.signature().factor(0).kind != FactorSpec::Kind::SE2) {
    throw DimensionMismatch("h_jacobian_position: first factor must be SE2");
  }
  Matrix h = Matrix::Zero(2, mu.signature().dim());
  h.leftCols<2>() = mu.se2(0).rotation();
  return h;
}

inline MotionModel make_motion_model(StateModel m, const NoiseIntensities& n, double dt) {
  n.validate();
  MotionModel mm;
  if (m == StateModel::SE2xSE2) {
    mm.omega = omega_se2se2;
    mm.c_jacobian = c_matrix_se2se2;
  } else {
    mm.omega = omega_se2r3;
    mm.c_jacobian = c_matrix_se2r3;
  }
  mm.process_noise = process_noise_q(n, dt);
  mm.dt = dt;
  return mm;
}

inline MeasurementModel make_position_measurement(const Eigen::Vector2d& meas_std) {
  MeasurementModel mm;
  mm.h = h_position;
  mm.h_jacobian = h_jacobian_position;
  mm.noise = Eigen::Vector2d(meas_std.cwiseProduct(meas_std)).asDiagonal();
  mm.signature = GroupSignature::euclidean(2);
  return mm;
}

}  // namespace lietrack
