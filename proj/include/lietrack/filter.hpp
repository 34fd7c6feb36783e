#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <functional>
#include <limits>

#include "lietrack/distribution.hpp"
#include "lietrack/errors.hpp"
#include "lietrack/product_group.hpp"

namespace lietrack {

/**
 * @brief Motion model X_{k+1} = X_k exp(Omega(X_k) + n_k), n_k ~ N(0, Q).
 *
 * `c_jacobian` is d/d(eps) Omega(mean * exp(eps)) at eps = 0.
 */
struct MotionModel {
  std::function<Vector(const ProductElement&, double dt)> omega;
  std::function<Matrix(const ProductElement&, double dt)> c_jacobian;
  Matrix process_noise;
  double dt = 1.0;
};

/**
 * @brief Measurement model Z = h(X) exp(m), m ~ N(0, R), Z in the group G'.
 *
 * `h_jacobian` is d/d(eps) log(h(mean)^-1 h(mean * exp(eps))) at eps = 0.
 */
struct MeasurementModel {
  std::function<ProductElement(const ProductElement&)> h;
  std::function<Matrix(const ProductElement&)> h_jacobian;
  Matrix noise;
  GroupSignature signature;
};

/// Linearized transition Ad(exp(-Omega)) + Phi(Omega) C.
inline Matrix transition_jacobian(const GroupSignature& sig, const Vector& omega, const Matrix& c) {
  return adjoint_group(exp_group(sig, -omega)) + phi_right_jacobian(sig, omega) * c;
}

inline GroupGaussian predict(const GroupGaussian& state, const MotionModel& m) {
  const auto& sig = state.signature();
  const int p = sig.dim();
  const Vector omega = m.omega(state.mean(), m.dt);
  detail::require_dim(sig, omega.size(), "predict");
  const Matrix c = m.c_jacobian(state.mean(), m.dt);
  if (c.rows() != p || c.cols() != p || m.process_noise.rows() != p || m.process_noise.cols() != p) {
    throw DimensionMismatch("predict: model matrices must be " + std::to_string(p) + "x" + std::to_string(p));
  }
  if (!omega.allFinite() || !c.allFinite()) throw NumericalFailure("predict: motion model produced non-finite values");

  const Matrix phi = phi_right_jacobian(sig, omega);
  const Matrix f = adjoint_group(exp_group(sig, -omega)) + phi * c;
  const Matrix cov = f * state.covariance() * f.transpose() + phi * m.process_noise * phi.transpose();
  if (!cov.allFinite()) throw NumericalFailure("predict: covariance became non-finite");
  return {compose(state.mean(), exp_group(sig, omega)), cov};
}

/// Max/min eigenvalue ratio of a symmetric matrix; infinity when singular.
inline double condition_estimate(const Matrix& s) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

inline GroupGaussian update(const GroupGaussian& state, const ProductElement& z, const MeasurementModel& m) {
  const auto& sig = state.signature();
  const int p = sig.dim();
  const int q = m.signature.dim();
  detail::require_same(m.signature, z.signature(), "update");

  const Matrix h = m.h_jacobian(state.mean());
  if (h.rows() != q || h.cols() != p || m.noise.rows() != q || m.noise.cols() != q) {
    throw DimensionMismatch("update: measurement Jacobian must be " + std::to_string(q) + "x" + std::to_string(p));
  }
  const Matrix& cov = state.covariance();
  Matrix s = h * cov * h.transpose() + m.noise;
  s = (0.5 * (s + s.transpose())).eval();
  if (!s.allFinite()) throw NumericalFailure("update: innovation covariance is non-finite");

  const double cond = condition_estimate(s);
  const Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success || !(cond < 1e12)) {
    throw UpdateRejected("update: innovation covariance is not invertible", cond);
  }

  // K = P H^T S^-1, computed as (S^-1 H P)^T.
  const Matrix gain = llt.solve(h * cov).transpose();
  const Vector residual = log_group(compose(inverse(m.h(state.mean())), z));
  const Vector nu = gain * residual;
  if (!nu.allFinite()) throw NumericalFailure("update: innovation is non-finite");

  const Matrix phi = phi_right_jacobian(sig, nu);
  const Matrix post = phi * (Matrix::Identity(p, p) - gain * h) * cov * phi.transpose();
  if (!post.allFinite()) throw NumericalFailure("update: covariance became non-finite");
  return {compose(state.mean(), exp_group(sig, nu)), post};
}

}  // namespace lietrack
