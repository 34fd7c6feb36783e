#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lietrack/errors.hpp"
#include "lietrack/se2.hpp"

namespace lietrack {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One factor of a direct-product group: SE(2), or R^n under addition.
struct FactorSpec {
  enum class Kind { SE2, Euclidean };

  Kind kind = Kind::SE2;
  int dim = 3;  // tangent dimension

  static FactorSpec se2() { return {Kind::SE2, 3}; }
  static FactorSpec euclidean(int n) { return {Kind::Euclidean, n}; }

  bool operator==(const FactorSpec&) const = default;
};

/// Ordered list of factors; the tangent space is the concatenation of factor tangents.
class GroupSignature {
public:
  GroupSignature() = default;
  explicit GroupSignature(std::vector<FactorSpec> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      if (f.dim <= 0 || (f.kind == FactorSpec::Kind::SE2 && f.dim != 3)) {
        throw DimensionMismatch("GroupSignature: invalid factor dimension");
      }
      offsets_.push_back(dim_);
      dim_ += f.dim;
    }
  }

  /// SE(2) x SE(2): pose factor T_s followed by the velocity factor T_d.
  static GroupSignature se2_se2() { return GroupSignature({FactorSpec::se2(), FactorSpec::se2()}); }
  /// SE(2) x R^3: pose factor followed by a raw (v_x, v_y, omega) vector.
  static GroupSignature se2_r3() { return GroupSignature({FactorSpec::se2(), FactorSpec::euclidean(3)}); }
  static GroupSignature euclidean(int n) { return GroupSignature({FactorSpec::euclidean(n)}); }

  int dim() const { return dim_; }
  std::size_t size() const { return factors_.size(); }
  const FactorSpec& factor(std::size_t i) const { return factors_.at(i); }
  int offset(std::size_t i) const { return offsets_.at(i); }
  const std::vector<FactorSpec>& factors() const { return factors_; }

  std::string name() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += "x";
      out += factors_[i].kind == FactorSpec::Kind::SE2 ? "SE2" : "R" + std::to_string(factors_[i].dim);
    }
    return out;
  }

  bool operator==(const GroupSignature& o) const { return factors_ == o.factors_; }

private:
  std::vector<FactorSpec> factors_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

using Factor = std::variant<SE2, Vector>;

/// Element of a product group; factor kinds always match the signature.
class ProductElement {
public:
  ProductElement() = default;
  ProductElement(GroupSignature sig, std::vector<Factor> factors)
      : sig_(std::move(sig)), factors_(std::move(factors)) {
    if (factors_.size() != sig_.size()) throw DimensionMismatch("ProductElement: factor count mismatch");
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& spec = sig_.factor(i);
      if (spec.kind == FactorSpec::Kind::SE2) {
        if (!std::holds_alternative<SE2>(factors_[i])) throw DimensionMismatch("ProductElement: expected SE2 factor");
      } else {
        const auto* v = std::get_if<Vector>(&factors_[i]);
        if (!v || v->size() != spec.dim) throw DimensionMismatch("ProductElement: Euclidean factor size mismatch");
      }
    }
  }

  static ProductElement identity(const GroupSignature& sig) {
    std::vector<Factor> f;
    f.reserve(sig.size());
    for (const auto& spec : sig.factors()) {
      if (spec.kind == FactorSpec::Kind::SE2) f.emplace_back(SE2::identity());
      else f.emplace_back(Vector::Zero(spec.dim));
    }
    return {sig, std::move(f)};
  }

  const GroupSignature& signature() const { return sig_; }
  std::size_t size() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const SE2& se2(std::size_t i) const { return std::get<SE2>(factors_.at(i)); }
  const Vector& vec(std::size_t i) const { return std::get<Vector>(factors_.at(i)); }

  bool operator==(const ProductElement& o) const { return sig_ == o.sig_ && factors_ == o.factors_; }

private:
  GroupSignature sig_;
  std::vector<Factor> factors_;
};

namespace detail {

inline void require_same(const GroupSignature& a, const GroupSignature& b, const char* where) {
  if (!(a == b)) throw DimensionMismatch(std::string(where) + ": signature mismatch (" + a.name() + " vs " + b.name() + ")");
}

inline void require_dim(const GroupSignature& sig, Eigen::Index n, const char* where) {
  if (n != sig.dim()) {
    throw DimensionMismatch(std::string(where) + ": expected tangent dimension " + std::to_string(sig.dim()) +
                            ", got " + std::to_string(n));
  }
}

}  // namespace detail

inline ProductElement identity(const GroupSignature& sig) { return ProductElement::identity(sig); }

inline ProductElement compose(const ProductElement& a, const ProductElement& b) {
  detail::require_same(a.signature(), b.signature(), "compose");
  std::vector<Factor> f;
  f.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.signature().factor(i).kind == FactorSpec::Kind::SE2) f.emplace_back(a.se2(i) * b.se2(i));
    else f.emplace_back(Vector(a.vec(i) + b.vec(i)));
  }
  return {a.signature(), std::move(f)};
}

inline ProductElement inverse(const ProductElement& a) {
  std::vector<Factor> f;
  f.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.signature().factor(i).kind == FactorSpec::Kind::SE2) f.emplace_back(a.se2(i).inverse());
    else f.emplace_back(Vector(-a.vec(i)));
  }
  return {a.signature(), std::move(f)};
}

inline ProductElement exp_group(const GroupSignature& sig, const Vector& x) {
  detail::require_dim(sig, x.size(), "exp_group");
  std::vector<Factor> f;
  f.reserve(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    const auto seg = x.segment(sig.offset(i), spec.dim);
    if (spec.kind == FactorSpec::Kind::SE2) f.emplace_back(exp_se2(Eigen::Vector3d(seg)));
    else f.emplace_back(Vector(seg));
  }
  return {sig, std::move(f)};
}

inline Vector log_group(const ProductElement& g) {
  const auto& sig = g.signature();
  Vector out(sig.dim());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    if (spec.kind == FactorSpec::Kind::SE2) out.segment<3>(sig.offset(i)) = log_se2(g.se2(i));
    else out.segment(sig.offset(i), spec.dim) = g.vec(i);
  }
  return out;
}

/// Block-diagonal hat; Euclidean factors embed as [[0, v], [0, 0]].
inline Matrix hat_group(const GroupSignature& sig, const Vector& x) {
  detail::require_dim(sig, x.size(), "hat_group");
  int n = 0;
  for (const auto& s : sig.factors()) n += s.kind == FactorSpec::Kind::SE2 ? 3 : s.dim + 1;
  Matrix m = Matrix::Zero(n, n);
  int r = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    if (spec.kind == FactorSpec::Kind::SE2) {
      m.block<3, 3>(r, r) = hat_se2(x.segment<3>(sig.offset(i)));
      r += 3;
    } else {
      m.block(r, r + spec.dim, spec.dim, 1) = x.segment(sig.offset(i), spec.dim);
      r += spec.dim + 1;
    }
  }
  return m;
}

inline Vector vee_group(const GroupSignature& sig, const Matrix& m) {
  Vector x(sig.dim());
  int r = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    if (spec.kind == FactorSpec::Kind::SE2) {
      if (r + 3 > m.rows() || r + 3 > m.cols()) throw DimensionMismatch("vee_group: matrix too small");
      x.segment<3>(sig.offset(i)) = vee_se2(m.block<3, 3>(r, r));
      r += 3;
    } else {
      if (r + spec.dim + 1 > m.rows() || r + spec.dim + 1 > m.cols()) throw DimensionMismatch("vee_group: matrix too small");
      x.segment(sig.offset(i), spec.dim) = m.block(r, r + spec.dim, spec.dim, 1);
      r += spec.dim + 1;
    }
  }
  return x;
}

/// Block-diagonal homogeneous matrix of a product element.
inline Matrix matrix_form(const ProductElement& g) {
  const auto& sig = g.signature();
  int n = 0;
  for (const auto& s : sig.factors()) n += s.kind == FactorSpec::Kind::SE2 ? 3 : s.dim + 1;
  Matrix m = Matrix::Zero(n, n);
  int r = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    if (spec.kind == FactorSpec::Kind::SE2) {
      m.block<3, 3>(r, r) = g.se2(i).matrix();
      r += 3;
    } else {
      m.block(r, r, spec.dim + 1, spec.dim + 1).setIdentity();
      m.block(r, r + spec.dim, spec.dim, 1) = g.vec(i);
      r += spec.dim + 1;
    }
  }
  return m;
}

inline Matrix adjoint_group(const ProductElement& g) {
  const auto& sig = g.signature();
  Matrix m = Matrix::Zero(sig.dim(), sig.dim());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& spec = sig.factor(i);
    const int o = sig.offset(i);
    if (spec.kind == FactorSpec::Kind::SE2) m.block<3, 3>(o, o) = adjoint_se2(g.se2(i));
    else m.block(o, o, spec.dim, spec.dim).setIdentity();
  }
  return m;
}

inline Matrix small_adjoint_group(const GroupSignature& sig, const Vector& x) {
  detail::require_dim(sig, x.size(), "small_adjoint_group");
  Matrix m = Matrix::Zero(sig.dim(), sig.dim());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig.factor(i).kind != FactorSpec::Kind::SE2) continue;
    const int o = sig.offset(i);
    m.block<3, 3>(o, o) = small_adjoint_se2(x.segment<3>(o));
  }
  return m;
}

/// Right Jacobian sum_{m>=0} (-1)^m / (m+1)! ad(v)^m, truncated once a term drops
/// below `tol` in max-abs or after `max_order`.
inline Matrix phi_right_jacobian(const GroupSignature& sig, const Vector& v, int max_order = 20, double tol = 1e-14) {
  const Matrix ad = small_adjoint_group(sig, v);
  Matrix term = Matrix::Identity(sig.dim(), sig.dim());
  Matrix sum = term;
  for (int m = 1; m <= max_order; ++m) {
    term = (-1.0 / static_cast<double>(m + 1)) * (ad * term).eval();
    sum += term;
    if (term.cwiseAbs().maxCoeff() < tol) break;
  }
  return sum;
}

/// Largest |theta| component over all SE(2) factors of a tangent vector.
inline double max_rotation_component(const GroupSignature& sig, const Vector& x) {
  double m = 0.0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig.factor(i).kind == FactorSpec::Kind::SE2) m = std::max(m, std::abs(x(sig.offset(i) + 2)));
  }
  return m;
}

}  // namespace lietrack
