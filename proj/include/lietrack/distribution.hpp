#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "lietrack/errors.hpp"
#include "lietrack/product_group.hpp"

namespace lietrack {

/// Explicit random stream; owned by the caller, never global.
using Rng = std::mt19937_64;

/**
 * @brief Concentrated Gaussian X = mean * exp(eps), eps ~ N(0, covariance).
 *
 * The covariance is symmetrized on construction and must pass a Cholesky
 * factorization of P + 1e-12 I. The normalizing constant of the density is
 * never needed and not provided.
 *
 * The parameterization is only meaningful while the rotational spread stays
 * well inside (-pi, pi]; a maximum rotational std of about 0.5 rad is the
 * documented soft bound (not enforced).
 */
class GroupGaussian {
public:
  GroupGaussian(ProductElement mean, const Matrix& covariance) : mean_(std::move(mean)) {
    const int p = mean_.signature().dim();
    if (covariance.rows() != p || covariance.cols() != p) {
      throw DimensionMismatch("GroupGaussian: covariance must be " + std::to_string(p) + "x" + std::to_string(p));
    }
    if (!covariance.allFinite()) throw NonPsdCovariance("GroupGaussian: covariance has non-finite entries");
    cov_ = 0.5 * (covariance + covariance.transpose());
    const Eigen::LLT<Matrix> llt(cov_ + 1e-12 * Matrix::Identity(p, p));
    if (llt.info() != Eigen::Success) throw NonPsdCovariance("GroupGaussian: covariance is not positive semi-definite");
  }

  const ProductElement& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }
  const GroupSignature& signature() const { return mean_.signature(); }
  int dim() const { return mean_.signature().dim(); }

private:
  ProductElement mean_;
  Matrix cov_;
};

/// Square-root factor L with L L^T = P, from the eigendecomposition so singular P is fine.
inline Matrix covariance_sqrt(const Matrix& p) {
  if (!p.allFinite()) throw NonPsdCovariance("covariance_sqrt: non-finite entries");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  if (es.info() != Eigen::Success) throw NonPsdCovariance("covariance_sqrt: eigendecomposition failed");
  Vector d = es.eigenvalues();
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < -1e-10 * scale) throw NonPsdCovariance("covariance_sqrt: covariance is not positive semi-definite");
    d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
  }
  return es.eigenvectors() * d.asDiagonal();
}

/// Draws eps ~ N(0, P) with a precomputed square-root factor.
inline Vector sample_tangent(const Matrix& sqrt_p, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vector z(sqrt_p.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n01(rng);
  return sqrt_p * z;
}

inline ProductElement sample(const GroupGaussian& d, Rng& rng) {
  const Vector eps = sample_tangent(covariance_sqrt(d.covariance()), rng);
  return compose(d.mean(), exp_group(d.signature(), eps));
}

/// eps = log(mean^-1 X): tangent coordinates of X around the mean.
inline Vector log_residual(const GroupGaussian& d, const ProductElement& x) {
  detail::require_same(d.signature(), x.signature(), "log_residual");
  return log_group(compose(inverse(d.mean()), x));
}

/// eps^T P^-1 eps; P is inverted through its Cholesky factor.
inline double mahalanobis(const GroupGaussian& d, const ProductElement& x) {
  const Vector eps = log_residual(d, x);
  const Eigen::LLT<Matrix> llt(d.covariance());
  if (llt.info() != Eigen::Success) throw NumericalFailure("mahalanobis: covariance is singular");
  return eps.dot(llt.solve(eps));
}

/// Left-translates the mean by `a`, keeping the covariance.
inline GroupGaussian translate(const GroupGaussian& d, const ProductElement& a) {
  return {compose(a, d.mean()), d.covariance()};
}

}  // namespace lietrack
