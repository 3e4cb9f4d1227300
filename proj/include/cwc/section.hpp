// The section s: a rotated copy of the tangency set T is read off the
// adjusted support function g, and the result is reduced modulo the
// restrictions of linear functions. Zeros of s are circumscriptions.
#pragma once

#include "cwc/body.hpp"
#include "cwc/errors.hpp"
#include "cwc/polytope.hpp"
#include "cwc/sphere_grid.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace cwc {

/// Number of antipodal tangency pairs for polytopes with n(n+1) facets.
template <int Dim>
inline constexpr int kPairs = Dim * (Dim + 1) / 2;
/// Fibre dimension of E, equal to dim SO(n).
template <int Dim>
inline constexpr int kFiber = Dim * (Dim - 1) / 2;

template <int Dim>
using PairVec = Eigen::Matrix<double, kPairs<Dim>, 1>;
template <int Dim>
using FiberVec = Eigen::Matrix<double, kFiber<Dim>, 1>;
template <int Dim>
using FiberMat = Eigen::Matrix<double, kFiber<Dim>, kFiber<Dim>>;

/// Skew-symmetric generator k of so(Dim).
template <int Dim>
Mat<Dim> so_generator(int k) {
  if constexpr (Dim == 2) {
    Mat<2> j;
    j << 0, -1, 1, 0;
    return j;
  } else {
    Mat<3> g = Mat<3>::Zero();
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    g(b, a) = 1.0;
    g(a, b) = -1.0;
    return g;
  }
}

/// A rotation of R^Dim: unit quaternion (q ~ -q) in 3D, angle in 2D.
template <int Dim>
class Frame {
 public:
  Frame() { set_rotation(); }

  static Frame from_quaternion(const Eigen::Quaterniond& q) requires(Dim == 3) {
    Frame f;
    f.q_ = q.normalized();
    f.set_rotation();
    return f;
  }

  static Frame from_angle(double t) requires(Dim == 2) {
    Frame f;
    f.angle_ = t;
    f.set_rotation();
    return f;
  }

  static Frame from_matrix(const Mat<Dim>& r) {
    if constexpr (Dim == 2) {
      return from_angle(std::atan2(r(1, 0), r(0, 0)));
    } else {
      return from_quaternion(Eigen::Quaterniond(r));
    }
  }

  const Mat<Dim>& rotation() const { return r_; }
  const Eigen::Quaterniond& quaternion() const { return q_; }
  double angle() const { return angle_; }

  /// R * exp(sum_k delta_k G_k): perturbation in the body frame.
  Frame retract(const FiberVec<Dim>& delta) const {
    if constexpr (Dim == 2) {
      return from_angle(angle_ + delta[0]);
    } else {
      return from_quaternion(q_ * quat_exp(Eigen::Vector3d(delta)));
    }
  }

  Frame compose_left(const Mat<Dim>& g) const { return from_matrix(g * r_); }
  Frame compose_right(const Mat<Dim>& g) const { return from_matrix(r_ * g); }

 private:
  void set_rotation() {
    if constexpr (Dim == 2) {
      r_ << std::cos(angle_), -std::sin(angle_), std::sin(angle_), std::cos(angle_);
    } else {
      r_ = q_.toRotationMatrix();
    }
  }

  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
  double angle_ = 0.0;
  Mat<Dim> r_;
};

/// Fixed coordinates for the quotient fibre: U holds the pair
/// representatives as rows (restricted linear functions are U t), Q is the
/// Gram-Schmidt completion of the standard basis e_0, e_1, ... against the
/// column span of U.
template <int Dim>
struct FiberBasis {
  Eigen::Matrix<double, kPairs<Dim>, Dim> U;
  Eigen::Matrix<double, kPairs<Dim>, kFiber<Dim>> Q;
  Eigen::Matrix<double, Dim, kPairs<Dim>> linear_fit;  // (U^T U)^{-1} U^T
  std::vector<Vec<Dim>> representatives;

  explicit FiberBasis(const TangentPolytope<Dim>& p) {
    if (p.facet_count() != static_cast<std::size_t>(Dim * (Dim + 1)))
      throw Error(ErrorCode::BadParameter, "section needs a polytope with n(n+1) facets");
    for (int i = 0; i < kPairs<Dim>; ++i) {
      representatives.push_back(p.normals[i]);
      U.row(i) = p.normals[i].transpose();
    }
    linear_fit = (U.transpose() * U).inverse() * U.transpose();
    // orthonormal basis of span(U), then complete with e_i
    std::vector<PairVec<Dim>> ortho;
    auto add = [&](PairVec<Dim> v) {
      for (const auto& o : ortho) v -= o.dot(v) * o;
      for (const auto& o : ortho) v -= o.dot(v) * o;
      if (v.norm() < 1e-8) return false;
      ortho.push_back(v.normalized());
      return true;
    };
    for (int c = 0; c < Dim; ++c)
      if (!add(U.col(c))) throw Error(ErrorCode::BasisMismatch, "restricted linear functions are not injective");
    int col = 0;
    for (int i = 0; i < kPairs<Dim> && col < kFiber<Dim>; ++i) {
      if (add(PairVec<Dim>::Unit(i))) Q.col(col++) = ortho.back();
    }
    if (col != kFiber<Dim>) throw Error(ErrorCode::BasisMismatch, "fibre basis is incomplete");
  }

  /// Orthogonal projector onto the complement of the restricted linear span.
  Eigen::Matrix<double, kPairs<Dim>, kPairs<Dim>> projector() const { return Q * Q.transpose(); }
};

/// Value of s in the quotient fibre, in the coordinates given by FiberBasis::Q.
template <int Dim>
struct SectionResidual {
  FiberVec<Dim> coords = FiberVec<Dim>::Zero();
  PairVec<Dim> embedded = PairVec<Dim>::Zero();  // Q * coords
  Vec<Dim> linear_part = Vec<Dim>::Zero();        // least-squares t in frame coordinates

  double norm() const { return coords.norm(); }
};

/// g at one representative per antipodal pair of the rotated tangency set,
/// in the polytope's pair order. Requires a constant-width body.
template <int Dim>
PairVec<Dim> restrict_to_frame(const Body<Dim>& body, const FiberBasis<Dim>& basis, const Frame<Dim>& frame,
                               bool check = true) {
  if (check && !body.is_constant_width())
    throw Error(ErrorCode::NotConstantWidth, "body has a non-antisymmetric adjusted support function");
  PairVec<Dim> w;
  for (int i = 0; i < kPairs<Dim>; ++i) w[i] = body.g(frame.rotation() * basis.representatives[i]);
  return w;
}

/// Splits pair values into the quotient residual and the least-squares linear part.
template <int Dim>
SectionResidual<Dim> project_to_E(const FiberBasis<Dim>& basis, const PairVec<Dim>& values) {
  SectionResidual<Dim> r;
  r.coords = basis.Q.transpose() * values;
  r.embedded = basis.Q * r.coords;
  r.linear_part = basis.linear_fit * values;
  return r;
}

template <int Dim>
SectionResidual<Dim> section(const Body<Dim>& body, const FiberBasis<Dim>& basis, const Frame<Dim>& frame) {
  return project_to_E(basis, restrict_to_frame(body, basis, frame));
}

/// Evaluates s and its derivative along the right-perturbation chart
/// R exp(sum delta_k G_k). Analytic when the body has closed-form gradients,
/// central differences (step 1e-5) otherwise.
template <int Dim>
class SectionEvaluator {
 public:
  SectionEvaluator(const Body<Dim>& body, const FiberBasis<Dim>& basis, double fd_step = 1e-5)
      : body_(body), basis_(basis), fd_step_(fd_step) {
    if (!body.is_constant_width())
      throw Error(ErrorCode::NotConstantWidth, "body has a non-antisymmetric adjusted support function");
    for (int k = 0; k < kFiber<Dim>; ++k) gens_[k] = so_generator<Dim>(k);
  }

  FiberVec<Dim> residual(const Frame<Dim>& f) const {
    return basis_.Q.transpose() * restrict_to_frame(body_, basis_, f, false);
  }

  FiberVec<Dim> residual_jacobian(const Frame<Dim>& f, FiberMat<Dim>& jac) const {
    if (!body_.analytic_gradient()) {
      for (int k = 0; k < kFiber<Dim>; ++k) {
        FiberVec<Dim> d = FiberVec<Dim>::Zero();
        d[k] = fd_step_;
        jac.col(k) = (residual(f.retract(d)) - residual(f.retract(-d))) / (2.0 * fd_step_);
      }
      return residual(f);
    }
    PairVec<Dim> w;
    Eigen::Matrix<double, kPairs<Dim>, kFiber<Dim>> dw;
    const Mat<Dim>& r = f.rotation();
    for (int i = 0; i < kPairs<Dim>; ++i) {
      const Vec<Dim> x = r * basis_.representatives[i];
      Vec<Dim> grad;
      w[i] = body_.g_and_gradient(x, grad);
      for (int k = 0; k < kFiber<Dim>; ++k) dw(i, k) = grad.dot(r * (gens_[k] * basis_.representatives[i]));
    }
    jac = basis_.Q.transpose() * dw;
    return basis_.Q.transpose() * w;
  }

  const Body<Dim>& body() const { return body_; }
  const FiberBasis<Dim>& basis() const { return basis_; }

 private:
  const Body<Dim>& body_;
  const FiberBasis<Dim>& basis_;
  double fd_step_;
  std::array<Mat<Dim>, kFiber<Dim>> gens_;
};

}  // namespace cwc
