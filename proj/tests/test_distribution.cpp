#include <gtest/gtest.h>

#include <cmath>

#include "lietrack/distribution.hpp"
#include "lietrack/models.hpp"
#include "lietrack/simbench.hpp"
#include "oracles.hpp"

using namespace lietrack;

namespace {

Matrix random_spd(std::mt19937_64& rng, int n, double max_eig) {
  const Matrix a = oracle::uniform_vector(rng, n * n, -1.0, 1.0).reshaped(n, n);
  Matrix s = a * a.transpose() + 0.1 * Matrix::Identity(n, n);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return s * (max_eig / es.eigenvalues().maxCoeff());
}

}  // namespace

TEST(GroupGaussian, SymmetrizesAndValidates) {
  Matrix p = Matrix::Identity(6, 6);
  p(0, 1) = 0.2;
  const GroupGaussian d(identity(GroupSignature::se2_se2()), p);
  EXPECT_DOUBLE_EQ(d.covariance()(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(d.covariance()(1, 0), 0.1);

  Matrix neg = Matrix::Identity(6, 6);
  neg(2, 2) = -1.0;
  EXPECT_THROW(GroupGaussian(identity(GroupSignature::se2_se2()), neg), NonPsdCovariance);
  EXPECT_THROW(GroupGaussian(identity(GroupSignature::se2_se2()), Matrix::Identity(5, 5)), DimensionMismatch);
  EXPECT_NO_THROW(GroupGaussian(identity(GroupSignature::se2_se2()), Matrix::Zero(6, 6)));
}

TEST(Sampling, ZeroCovarianceReturnsMean) {
  std::mt19937_64 rng(1);
  const auto mu = oracle::random_element(rng, GroupSignature::se2_se2());
  const GroupGaussian d(mu, Matrix::Zero(6, 6));
  Rng stream(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample(d, stream), mu);
}

TEST(Sampling, SingularCovarianceFactor) {
  const Matrix q = process_noise_q({0.3, 0.2, 0.1}, 1.0);
  const Matrix l = covariance_sqrt(q);
  EXPECT_LT(oracle::max_abs_diff(l * l.transpose(), q), 1e-14);
}

TEST(Sampling, EmpiricalCovarianceMatches) {
  std::mt19937_64 rng(3);
  const auto sig = GroupSignature::se2_se2();
  const auto mu = oracle::random_element(rng, sig);
  const Matrix p = random_spd(rng, 6, 1e-2);
  const GroupGaussian d(mu, p);
  Rng stream(99);
  const int n = 100000;
  Vector mean = Vector::Zero(6);
  Matrix second = Matrix::Zero(6, 6);
  const Matrix root = covariance_sqrt(d.covariance());
  for (int i = 0; i < n; ++i) {
    // same path as sample(), without refactorizing P every draw
    const auto x = compose(mu, exp_group(sig, sample_tangent(root, stream)));
    const Vector e = log_residual(d, x);
    mean += e;
    second += e * e.transpose();
  }
  mean /= n;
  const Matrix cov = second / n - mean * mean.transpose();
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(cov(i, i) / p(i, i), 1.0, 0.05) << "diag " << i;
  EXPECT_LT(mean.norm(), 3.0 * std::sqrt(p.trace() / n));
}

TEST(Sampling, MatchesSampleFunction) {
  const auto sig = GroupSignature::se2_r3();
  const GroupGaussian d(identity(sig), 0.01 * Matrix::Identity(6, 6));
  Rng a(4), b(4);
  const auto x = sample(d, a);
  const auto y = exp_group(sig, sample_tangent(covariance_sqrt(d.covariance()), b));
  EXPECT_EQ(x, y);
}

TEST(Sampling, RejectsIndefinite) {
  Matrix p = Matrix::Identity(3, 3);
  p(0, 1) = p(1, 0) = 2.0;
  EXPECT_THROW(covariance_sqrt(p), NonPsdCovariance);
}

TEST(LogResidual, MeanAndConstruction) {
  std::mt19937_64 rng(6);
  const auto sig = GroupSignature::se2_se2();
  const auto mu = oracle::random_element(rng, sig);
  const GroupGaussian d(mu, Matrix::Identity(6, 6));
  EXPECT_TRUE(log_residual(d, mu).isZero(1e-15));
  for (int i = 0; i < 100; ++i) {
    const Vector e0 = oracle::random_tangent(rng, sig, 1.0, 2.5);
    EXPECT_LT((log_residual(d, compose(mu, exp_group(sig, e0))) - e0).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_THROW(log_residual(d, identity(GroupSignature::se2_r3())), DimensionMismatch);
}

TEST(LogResidual, SampleResidualsStayInsideCut) {
  const auto sig = GroupSignature::se2_se2();
  const GroupGaussian d(identity(sig), 0.09 * Matrix::Identity(6, 6));
  Rng stream(8);
  const Matrix root = covariance_sqrt(d.covariance());
  for (int i = 0; i < 10000; ++i) {
    const Vector e = log_residual(d, exp_group(sig, sample_tangent(root, stream)));
    ASSERT_TRUE(e.allFinite());
    EXPECT_LT(max_rotation_component(sig, e), std::numbers::pi);
  }
}

TEST(LogResidual, LeftInvariance) {
  std::mt19937_64 rng(9);
  const auto sig = GroupSignature::se2_se2();
  for (int i = 0; i < 100; ++i) {
    const GroupGaussian d(oracle::random_element(rng, sig), random_spd(rng, 6, 0.5));
    const auto x = compose(d.mean(), exp_group(sig, oracle::random_tangent(rng, sig, 0.5, 1.0)));
    const auto a = oracle::random_element(rng, sig);
    const Vector lhs = log_residual(translate(d, a), compose(a, x));
    EXPECT_LT((lhs - log_residual(d, x)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(mahalanobis(translate(d, a), compose(a, x)), mahalanobis(d, x), 1e-9);
  }
}

TEST(Mahalanobis, ZeroAtMeanAndEuclideanReduction) {
  std::mt19937_64 rng(10);
  const auto sig = GroupSignature::euclidean(4);
  const Matrix p = random_spd(rng, 4, 2.0);
  const Vector m = oracle::uniform_vector(rng, 4, -3, 3), x = oracle::uniform_vector(rng, 4, -3, 3);
  const GroupGaussian d(ProductElement(sig, {m}), p);
  EXPECT_NEAR(mahalanobis(d, d.mean()), 0.0, 1e-15);
  const double expected = (x - m).dot(p.inverse() * (x - m));
  EXPECT_NEAR(mahalanobis(d, ProductElement(sig, {x})), expected, 1e-9 * expected);
}

TEST(Contour, SpreadGrowsWithRotationalNoise) {
  // grey clouds of the banana figure: sigma_omega in {0.01, 0.1, 1} degrees
  double previous = -1.0;
  for (double deg : {0.01, 0.1, 1.0}) {
    ContourConfig cfg;
    cfg.sigma_omega = deg_to_rad(deg);
    cfg.sigma_xy = 1e-3;
    cfg.n_samples = 2000;
    cfg.seed = 12;
    const double s = compound_samples(cfg).arc_spread;
    EXPECT_GT(s, previous);
    previous = s;
  }
}
