#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <numbers>

#include "lietrack/errors.hpp"

namespace lietrack {

/// Below this rotation magnitude exp/log switch to their second-order expansions.
inline constexpr double kSmallAngle = 1e-7;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/**
 * @brief Rigid body motion in the plane.
 *
 * Rotation is stored as an angle in (-pi, pi], so the SO(2) constraint
 * holds by construction; rotation() and matrix() are derived views.
 *
 * Tangent ordering: (x, y, theta), algebra matrix
 *   [ 0 -theta x ]
 *   [ theta 0  y ]
 *   [ 0     0  0 ]
 */
class SE2 {
public:
  SE2() = default;
  SE2(double theta, const Eigen::Vector2d& translation)
      : theta_(wrap_angle(theta)), t_(translation) {}

  static SE2 identity() { return {}; }

  /// Builds from a 3x3 homogeneous matrix; throws if the rotation block is not in SO(2).
  static SE2 from_matrix(const Eigen::Matrix3d& m) {
    const Eigen::Matrix2d r = m.topLeftCorner<2, 2>();
    if ((r.transpose() * r - Eigen::Matrix2d::Identity()).norm() >= 1e-9 || r.determinant() <= 0.0) {
      throw MalformedAlgebraElement("SE2::from_matrix: rotation block is not in SO(2)");
    }
    if (std::abs(m(2, 0)) > 1e-9 || std::abs(m(2, 1)) > 1e-9 || std::abs(m(2, 2) - 1.0) > 1e-9) {
      throw MalformedAlgebraElement("SE2::from_matrix: bottom row must be (0, 0, 1)");
    }
    return {std::atan2(r(1, 0), r(0, 0)), m.topRightCorner<2, 1>()};
  }

  double theta() const { return theta_; }
  const Eigen::Vector2d& translation() const { return t_; }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(theta_), s = std::sin(theta_);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m.topLeftCorner<2, 2>() = rotation();
    m.topRightCorner<2, 1>() = t_;
    return m;
  }

  SE2 operator*(const SE2& other) const {
    return {theta_ + other.theta_, t_ + rotation() * other.t_};
  }

  SE2 inverse() const {
    const SE2 r_inv(-theta_, Eigen::Vector2d::Zero());
    return {-theta_, -(r_inv.rotation() * t_)};
  }

  Eigen::Vector2d act(const Eigen::Vector2d& p) const { return rotation() * p + t_; }

  bool operator==(const SE2&) const = default;

private:
  double theta_ = 0.0;
  Eigen::Vector2d t_ = Eigen::Vector2d::Zero();
};

/// J = [[0, 1], [-1, 0]]; appears in both adjoints.
inline Eigen::Matrix2d se2_j() {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

inline Eigen::Matrix3d hat_se2(const Eigen::Vector3d& x) {
  Eigen::Matrix3d m;
  m << 0.0, -x(2), x(0),
       x(2), 0.0, x(1),
       0.0, 0.0, 0.0;
  return m;
}

inline Eigen::Vector3d vee_se2(const Eigen::Matrix3d& m) {
  constexpr double tol = 1e-9;
  const bool ok = std::abs(m(0, 0)) <= tol && std::abs(m(1, 1)) <= tol && std::abs(m(2, 0)) <= tol &&
                  std::abs(m(2, 1)) <= tol && std::abs(m(2, 2)) <= tol && std::abs(m(1, 0) + m(0, 1)) <= tol;
  if (!ok) throw MalformedAlgebraElement("vee_se2: matrix is not an element of se(2)");
  return {m(0, 2), m(1, 2), m(1, 0)};
}

inline SE2 exp_se2(const Eigen::Vector3d& x) {
  const double th = x(2);
  Eigen::Vector2d t;
  if (std::abs(th) < kSmallAngle) {
    t << x(0) - 0.5 * th * x(1), x(1) + 0.5 * th * x(0);
  } else {
    // (1 - cos) written as 2 sin^2(th/2) avoids cancellation near zero.
    const double s = std::sin(th);
    const double half = std::sin(0.5 * th);
    const double one_minus_c = 2.0 * half * half;
    t << (x(0) * s - x(1) * one_minus_c) / th, (x(0) * one_minus_c + x(1) * s) / th;
  }
  return {th, t};
}

/// Inverse of exp_se2 for |theta| < pi; theta = pi is the uniqueness boundary and is accepted.
inline Eigen::Vector3d log_se2(const SE2& g) {
  const double th = g.theta();
  const Eigen::Vector2d& t = g.translation();
  Eigen::Vector3d out;
  if (std::abs(th) < kSmallAngle) {
    out << t(0) + 0.5 * th * t(1), t(1) - 0.5 * th * t(0), th;
  } else {
    // th / (2 (1 - cos)) [[sin, 1 - cos], [cos - 1, sin]] = (th/2) [[cot(th/2), 1], [-1, cot(th/2)]]
    const double half = 0.5 * th;
    const double a = half * std::cos(half) / std::sin(half);
    out << a * t(0) + half * t(1), -half * t(0) + a * t(1), th;
  }
  return out;
}

inline Eigen::Matrix3d adjoint_se2(const SE2& g) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m.topLeftCorner<2, 2>() = g.rotation();
  m.topRightCorner<2, 1>() = se2_j() * g.translation();
  m(2, 2) = 1.0;
  return m;
}

/// ad(x) with ad(a) b = vee([hat(a), hat(b)]); the lower-right entry is 0.
inline Eigen::Matrix3d small_adjoint_se2(const Eigen::Vector3d& x) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m.topLeftCorner<2, 2>() = -x(2) * se2_j();
  m.topRightCorner<2, 1>() = se2_j() * x.head<2>();
  return m;
}

}  // namespace lietrack
