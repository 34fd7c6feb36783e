#pragma once

// Linear models written in the LG-EKF interface, for checks on R^n signatures.

#include "lietrack/filter.hpp"

namespace testing_models {

using lietrack::Matrix;
using lietrack::Vector;

/// x_{k+1} = A x_k expressed as Omega(x) = (A - I) x.
inline lietrack::MotionModel linear_motion(const Matrix& a, const Matrix& q, double dt = 1.0) {
  lietrack::MotionModel m;
  const Matrix am = a - Matrix::Identity(a.rows(), a.cols());
  m.omega = [am](const lietrack::ProductElement& x, double) { return Vector(am * x.vec(0)); };
  m.c_jacobian = [am](const lietrack::ProductElement&, double) { return am; };
  m.process_noise = q;
  m.dt = dt;
  return m;
}

inline lietrack::MeasurementModel linear_measurement(const Matrix& h, const Matrix& r) {
  lietrack::MeasurementModel m;
  m.signature = lietrack::GroupSignature::euclidean(static_cast<int>(h.rows()));
  m.h = [h, sig = m.signature](const lietrack::ProductElement& x) {
    return lietrack::ProductElement(sig, {Vector(h * x.vec(0))});
  };
  m.h_jacobian = [h](const lietrack::ProductElement&) { return h; };
  m.noise = r;
  return m;
}

}  // namespace testing_models
