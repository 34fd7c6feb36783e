#include <gtest/gtest.h>

#include <cmath>

#include "lietrack/baselines.hpp"
#include "euclidean_models.hpp"
#include "oracles.hpp"

using namespace lietrack;

namespace {

Eigen::Matrix2d r_of(double std) { return std * std * Eigen::Matrix2d::Identity(); }

Vector5 random_ctrv(std::mt19937_64& rng) {
  Vector5 s;
  s << oracle::uniform_vector(rng, 2, -10, 10), oracle::uniform(rng, -3, 3), oracle::uniform(rng, 0.1, 3.0),
      oracle::uniform(rng, -1.0, 1.0);
  return s;
}

/// The straight-line branch applied regardless of |omega|.
Eigen::Vector2d straight_limit(const Vector5& s, double dt) {
  const double th = s(2), v = s(3), w = s(4);
  return {s(0) + v * dt * std::cos(th) - 0.5 * v * w * dt * dt * std::sin(th),
          s(1) + v * dt * std::sin(th) + 0.5 * v * w * dt * dt * std::cos(th)};
}

}  // namespace

TEST(KfCv, ZeroNoiseTracksConstantVelocity) {
  const double dt = 0.5;
  const Eigen::Vector2d p0(1.0, -2.0), v(0.7, 0.3);
  CvState s;
  s.x << 0.0, 0.0, 0.0, 0.0;
  s.cov = 100.0 * Matrix4::Identity();
  for (int k = 1; k <= 200; ++k) s = kf_cv_step(s, p0 + v * dt * k, 0.0, r_of(1e-3), dt);
  EXPECT_LT((s.x.head<2>() - (p0 + v * dt * 200)).norm(), 1e-6);
  EXPECT_LT((s.x.tail<2>() - v).norm(), 1e-6);
}

TEST(KfCv, ProcessNoiseForm) {
  const Matrix4 q = cv_process_noise(2.0, 1.0);
  EXPECT_DOUBLE_EQ(q(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(q(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(q(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(q(0, 1), 0.0);
  EXPECT_EQ(cv_transition(2.0)(1, 3), 2.0);
}

TEST(KfCv, MatchesLieGroupFilterOnEuclideanSignature) {
  std::mt19937_64 rng(11);
  const double dt = 0.8, q = 0.05;
  const Eigen::Matrix2d r = r_of(0.4);
  Matrix h = Matrix::Zero(2, 4);
  h(0, 0) = h(1, 1) = 1.0;
  const auto motion = testing_models::linear_motion(cv_transition(dt), cv_process_noise(q, dt), dt);
  const auto meas = testing_models::linear_measurement(h, r);
  const auto sig = GroupSignature::euclidean(4);

  CvState cv;
  cv.x << 1.0, 2.0, 0.5, -0.5;
  cv.cov = Vector4(0.25, 0.25, 1.0, 1.0).asDiagonal();
  GroupGaussian lg(ProductElement(sig, {Vector(cv.x)}), cv.cov);
  for (int k = 0; k < 100; ++k) {
    const Vector z = oracle::uniform_vector(rng, 2, -20, 20);
    cv = kf_cv_step(cv, z, q, r, dt);
    lg = update(predict(lg, motion), ProductElement(GroupSignature::euclidean(2), {z}), meas);
    ASSERT_LT((lg.mean().vec(0) - Vector(cv.x)).cwiseAbs().maxCoeff(), 1e-9);
    ASSERT_LT(oracle::max_abs_diff(lg.covariance(), cv.cov), 1e-9);
  }
}

TEST(KfCv, StationaryTargetConverges) {
  CvState s;
  s.cov = 10.0 * Matrix4::Identity();
  const Eigen::Vector2d z(3.0, 4.0);
  for (int k = 0; k < 500; ++k) s = kf_cv_step(s, z, 1e-4, r_of(0.5), 1.0);
  EXPECT_LT((s.x.head<2>() - z).norm(), 1e-3);
  EXPECT_LT(s.x.tail<2>().norm(), 1e-3);
}

TEST(KfCv, SingularInnovationRejected) {
  CvState s;
  s.cov = Matrix4::Zero();
  EXPECT_THROW(cv_update(s, {1.0, 1.0}, Eigen::Matrix2d::Zero()), UpdateRejected);
}

TEST(EkfCtrv, ZeroTurnRateIsStraightLine) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    Vector5 s = random_ctrv(rng);
    s(4) = 0.0;
    const double dt = oracle::uniform(rng, 0.1, 2.0);
    const Vector5 out = ctrv_propagate(s, dt);
    EXPECT_NEAR(out(0), s(0) + s(3) * dt * std::cos(s(2)), 1e-9);
    EXPECT_NEAR(out(1), s(1) + s(3) * dt * std::sin(s(2)), 1e-9);
    EXPECT_NEAR(out(2), s(2), 1e-15);
  }
}

TEST(EkfCtrv, JacobianMatchesFiniteDifference) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    Vector5 s = random_ctrv(rng);
    if (i % 10 == 0) s(4) = 0.0;
    const double dt = oracle::uniform(rng, 0.1, 2.0);
    // unwrapped heading so the difference quotient does not straddle the cut
    const Matrix fd = oracle::numerical_jacobian(
        [&](const Vector& x) {
          Vector out = ctrv_propagate(Vector5(x), dt);
          out(2) = x(2) + x(4) * dt;
          return out;
        },
        Vector(s), std::abs(s(4)) < kCtrvStraightThreshold ? 4e-8 : 1e-6);
    EXPECT_LT(oracle::max_abs_diff(fd, ctrv_jacobian(s, dt)), 1e-6) << "state " << i;
  }
}

TEST(EkfCtrv, StraightLineSwitchIsContinuous) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    Vector5 s = random_ctrv(rng);
    s(3) = oracle::uniform(rng, 0.1, 2.0);
    for (double sign : {-1.0, 1.0}) {
      Vector5 above = s, below = s;
      above(4) = sign * 1.01 * kCtrvStraightThreshold;
      below(4) = sign * 0.99 * kCtrvStraightThreshold;
      const Vector5 pa = ctrv_propagate(above, 1.0);
      EXPECT_LT((pa.head<2>() - straight_limit(above, 1.0)).norm(), 1e-8);
      EXPECT_LT((pa.head<2>() - ctrv_propagate(below, 1.0).head<2>()).norm(), 1e-8);
    }
  }
}

TEST(EkfCtrv, TracksCircularMotion) {
  const double dt = 1.0;
  Vector5 truth;
  truth << 0.0, 0.0, 0.3, 1.0, 0.1;
  CtrvState s;
  s.x << 0.0, 0.0, 0.0, 0.0, 0.0;
  s.cov = Vector5(1e-6, 1e-6, std::pow(M_PI / 2, 2), 1.0, 0.25).asDiagonal();
  double acc = 0.0;
  int n = 0;
  for (int k = 1; k <= 60; ++k) {
    truth = ctrv_propagate(truth, dt);
    s = ekf_ctrv_step(s, truth.head<2>(), {1e-4, 1e-4}, r_of(1e-3), dt);
    if (k > 20) {
      acc += (s.x.head<2>() - truth.head<2>()).squaredNorm();
      ++n;
    }
  }
  EXPECT_LT(std::sqrt(acc / n), 1e-3);
}

TEST(Baselines, CovarianceHygiene) {
  std::mt19937_64 rng(15);
  CvState cv;
  CtrvState ct;
  ct.x << 0.0, 0.0, 0.0, 1.0, 0.05;
  const Eigen::Matrix2d r = r_of(0.5);
  Eigen::Vector2d pos(0.0, 0.0);
  for (int k = 0; k < 10000; ++k) {
    pos += oracle::uniform_vector(rng, 2, -1.0, 1.0);
    cv = kf_cv_step(cv, pos, 0.1, r, 1.0);
    ct = ekf_ctrv_step(ct, pos, {0.3, 0.1}, r, 1.0);
    ASSERT_EQ(oracle::asymmetry(cv.cov), 0.0);
    ASSERT_EQ(oracle::asymmetry(ct.cov), 0.0);
    ASSERT_GE(oracle::min_eigenvalue(cv.cov), -1e-10);
    ASSERT_GE(oracle::min_eigenvalue(ct.cov), -1e-10);
  }
}
