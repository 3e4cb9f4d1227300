// Convex bodies described by their adjusted support function g = f - 1,
// where f(v) is the distance from the origin to the supporting hyperplane
// with outer normal v.
#pragma once

#include "cwc/errors.hpp"
#include "cwc/harmonics.hpp"
#include "cwc/sphere_grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace cwc {

enum class BodyKind { Harmonic, Ball, Reuleaux, PolytopeHull, Ellipsoid };

inline const char* body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::Harmonic: return "harmonic";
    case BodyKind::Ball: return "ball";
    case BodyKind::Reuleaux: return "reuleaux_polygon";
    case BodyKind::PolytopeHull: return "polytope_hull";
    case BodyKind::Ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;
template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

template <int Dim>
Mat<Dim> tangent_projector(const Vec<Dim>& u) {
  return Mat<Dim>::Identity() - u * u.transpose();
}

/// Orthonormal basis of the tangent space at unit vector u (Dim - 1 columns).
template <int Dim>
Eigen::Matrix<double, Dim, Dim - 1> tangent_basis(const Vec<Dim>& u) {
  Eigen::Matrix<double, Dim, Dim - 1> e;
  if constexpr (Dim == 2) {
    e.col(0) = Vec<2>(-u[1], u[0]);
  } else {
    Vec<3> a = std::abs(u[0]) < 0.9 ? Vec<3>::UnitX() : Vec<3>::UnitY();
    Vec<3> e1 = (a - a.dot(u) * u).normalized();
    e.col(0) = e1;
    e.col(1) = u.cross(e1);
  }
  return e;
}

/// Smallest eigenvalue of a symmetric matrix restricted to the tangent space at u.
template <int Dim>
double tangential_min_eigenvalue(const Mat<Dim>& h, const Vec<Dim>& u) {
  const auto e = tangent_basis<Dim>(u);
  const Eigen::Matrix<double, Dim - 1, Dim - 1> m = e.transpose() * h * e;
  if constexpr (Dim == 2) {
    return m(0, 0);
  } else {
    const double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), c = m(1, 1);
    return 0.5 * (a + c - std::sqrt((a - c) * (a - c) + 4.0 * b * b));
  }
}

template <int Dim>
class Body {
 public:
  static_assert(Dim == 2 || Dim == 3, "bodies live in R^2 or R^3");
  static constexpr int dimension = Dim;
  using VecD = Vec<Dim>;
  using MatD = Mat<Dim>;

  /// Harmonic scalar field g; not checked for convexity. Use
  /// convex_harmonic() for a validated body.
  static Body from_harmonics(std::vector<double> coeffs, int lmax) {
    if (lmax < 0 || lmax > kMaxHarmonicDegree)
      throw Error(ErrorCode::BadParameter, "harmonic degree out of range");
    if (static_cast<int>(coeffs.size()) != harmonic_count(Dim, lmax))
      throw Error(ErrorCode::BadParameter, "coefficient count does not match L_max");
    Body b;
    b.kind_ = BodyKind::Harmonic;
    b.lmax_ = lmax;
    b.coeffs_ = std::move(coeffs);
    b.rebuild();
    return b;
  }

  static Body convex_harmonic(std::vector<double> coeffs, int lmax);

  /// Ball of the given radius; g is constant plus a degree-1 term for the centre.
  static Body ball(double radius = 1.0, const VecD& center = VecD::Zero()) {
    if (!(radius > 0.0)) throw Error(ErrorCode::BadParameter, "ball radius must be positive");
    std::vector<double> c(harmonic_count(Dim, 1), 0.0);
    const double c0 = Dim == 2 ? std::sqrt(2.0 * std::numbers::pi) : std::sqrt(4.0 * std::numbers::pi);
    c[0] = (radius - 1.0) * c0;
    Body b = from_harmonics(std::move(c), 1);
    b = b.translated(center);
    b.kind_ = BodyKind::Ball;
    return b;
  }

  /// Reuleaux polygon of width 2 with k (odd) vertices, first vertex at
  /// angle `phase`, centred at the origin.
  static Body reuleaux(int k, double phase = 0.0) requires(Dim == 2) {
    if (k < 3 || k % 2 == 0) throw Error(ErrorCode::BadParameter, "Reuleaux polygon needs an odd k >= 3");
    Body b;
    b.kind_ = BodyKind::Reuleaux;
    b.reuleaux_k_ = k;
    b.phase_ = phase;
    b.lmax_ = 0;
    return b;
  }

  static Body polytope_hull(std::vector<VecD> vertices) {
    if (vertices.size() < static_cast<std::size_t>(Dim + 1))
      throw Error(ErrorCode::BadParameter, "polytope hull needs at least Dim+1 vertices");
    Body b;
    b.kind_ = BodyKind::PolytopeHull;
    b.vertices_ = std::move(vertices);
    return b;
  }

  /// Image of the unit ball under x -> shape * x + center.
  static Body ellipsoid(const MatD& shape, const VecD& center = VecD::Zero()) {
    if (!(shape.determinant() != 0.0)) throw Error(ErrorCode::BadParameter, "ellipsoid shape is singular");
    Body b;
    b.kind_ = BodyKind::Ellipsoid;
    b.shape_ = shape;
    b.shift_ = center;
    return b;
  }

  BodyKind kind() const { return kind_; }
  int lmax() const { return lmax_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int reuleaux_k() const { return reuleaux_k_; }
  double reuleaux_phase() const { return phase_; }
  const std::vector<VecD>& vertices() const { return vertices_; }
  const MatD& shape() const { return shape_; }
  const VecD& shift() const { return shift_; }
  bool is_harmonic() const { return kind_ == BodyKind::Harmonic || kind_ == BodyKind::Ball; }

  /// Harmonic, ball and ellipsoid bodies have closed-form derivatives.
  bool analytic_gradient() const { return is_harmonic() || kind_ == BodyKind::Ellipsoid; }

  /// Width 2 in every direction, i.e. g antisymmetric.
  bool is_constant_width(double tol = 1e-10) const {
    switch (kind_) {
      case BodyKind::Harmonic:
      case BodyKind::Ball:
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
          if (harmonic_degree(Dim, static_cast<int>(i)) % 2 == 0 && std::abs(coeffs_[i]) > tol) return false;
        return true;
      case BodyKind::Reuleaux: return true;
      case BodyKind::Ellipsoid: return (shape_ * shape_.transpose() - MatD::Identity()).norm() <= tol;
      case BodyKind::PolytopeHull: return false;
    }
    return false;
  }

  /// Adjusted support value at a unit direction.
  double g(const VecD& u) const { return support(u) - 1.0; }

  /// Support value f(u) = g(u) + 1 at a unit direction.
  double support(const VecD& u) const {
    switch (kind_) {
      case BodyKind::Harmonic:
      case BodyKind::Ball: return 1.0 + harmonic_value(u);
      case BodyKind::Reuleaux:
        if constexpr (Dim == 2) return reuleaux_eval(u, nullptr, nullptr);
        break;
      case BodyKind::PolytopeHull: {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : vertices_) best = std::max(best, v.dot(u));
        return best + shift_.dot(u);
      }
      case BodyKind::Ellipsoid: return (shape_.transpose() * u).norm() + shift_.dot(u);
    }
    return 0.0;
  }

  double width(const VecD& u) const { return support(u) + support(-u); }

  /// 1-homogeneous extension of the support function.
  double support_h(const VecD& y) const {
    const double r = y.norm();
    if (r == 0.0) return 0.0;
    return r * support(y / r);
  }

  /// Point of the body where the supporting hyperplane with normal u touches
  /// (the gradient of the 1-homogeneous support function).
  VecD support_point(const VecD& u) const {
    switch (kind_) {
      case BodyKind::Harmonic:
      case BodyKind::Ball: {
        VecD grad;
        const double gv = harmonic_value_grad(u, grad);
        return (1.0 + gv) * u + grad;
      }
      case BodyKind::Reuleaux:
        if constexpr (Dim == 2) {
          VecD p;
          reuleaux_eval(u, &p, nullptr);
          return p;
        }
        break;
      case BodyKind::PolytopeHull: {
        std::size_t best = 0;
        for (std::size_t i = 1; i < vertices_.size(); ++i)
          if (vertices_[i].dot(u) > vertices_[best].dot(u)) best = i;
        return vertices_[best] + shift_;
      }
      case BodyKind::Ellipsoid: {
        const VecD st = shape_.transpose() * u;
        return shape_ * st / st.norm() + shift_;
      }
    }
    return VecD::Zero();
  }

  /// g(u) and its tangential gradient at a unit direction.
  double g_and_gradient(const VecD& u, VecD& grad) const {
    if (is_harmonic()) return harmonic_value_grad(u, grad);
    const VecD p = support_point(u);
    grad = tangent_projector<Dim>(u) * p;
    return p.dot(u) - 1.0;
  }

  /// Smallest tangential eigenvalue of the Hessian of the 1-homogeneous
  /// support function at u (radius of curvature in 2D). Non-negative
  /// everywhere iff the support function is convex.
  double tangential_min_eig(const VecD& u) const {
    switch (kind_) {
      case BodyKind::Harmonic:
      case BodyKind::Ball: return tangential_min_eigenvalue<Dim>(support_hessian(u), u);
      case BodyKind::Reuleaux:
        if constexpr (Dim == 2) {
          // radius 2 on the arcs, 0 in the vertex normal cones
          bool on_arc = false;
          reuleaux_eval(u, nullptr, &on_arc);
          return on_arc ? 2.0 : 0.0;
        }
        break;
      case BodyKind::PolytopeHull: return 0.0;
      case BodyKind::Ellipsoid: {
        const MatD sst = shape_ * shape_.transpose();
        const double r = (shape_.transpose() * u).norm();
        const VecD w = sst * u;
        const MatD h = (sst - w * w.transpose() / (r * r)) / r;
        return tangential_min_eigenvalue<Dim>(h, u);
      }
    }
    return 0.0;
  }

  /// Hessian of the 1-homogeneous support function at unit u (harmonic kinds).
  MatD support_hessian(const VecD& u) const {
    MatD h = tangent_projector<Dim>(u);
    h += harmonic_hessian_part(u);
    return h;
  }

  /// Tangential Hessian of the 1-homogeneous extension of g alone (the part
  /// that scales linearly with the coefficients); harmonic kinds only.
  MatD harmonic_hessian_part(const VecD& u) const {
    const MatD t = tangent_projector<Dim>(u);
    if constexpr (Dim == 2) {
      double g0, g1, g2;
      circle_eval(u, g0, g1, g2);
      return (g0 + g2) * t;
    } else {
      MatD acc = MatD::Zero();
      for (int l = 0; l < static_cast<int>(parts_.size()); ++l) {
        if (parts_[l].empty()) continue;
        Eigen::Vector3d grad;
        Eigen::Matrix3d hess;
        const double p = parts_[l].value_gradient_hessian(u, grad, hess);
        acc += (1.0 - l) * p * t + t * hess * t;
      }
      return acc;
    }
  }

  /// Same body translated by t; for harmonic bodies this adds the matching
  /// degree-1 harmonic to g.
  Body translated(const VecD& t) const {
    Body b = *this;
    if (is_harmonic()) {
      if (b.lmax_ < 1) b.raise_lmax(1);
      if constexpr (Dim == 2) {
        const double s = std::sqrt(std::numbers::pi);
        b.coeffs_[1] += t[0] * s;
        b.coeffs_[2] += t[1] * s;
      } else {
        const double s = std::sqrt(4.0 * std::numbers::pi / 3.0);
        b.coeffs_[sh_index(1, 1)] += t[0] * s;
        b.coeffs_[sh_index(1, -1)] += t[1] * s;
        b.coeffs_[sh_index(1, 0)] += t[2] * s;
      }
      b.rebuild();
    } else {
      b.shift_ += t;
    }
    return b;
  }

  /// Same body rotated by q (support of the result at u equals the support
  /// of this body at q^T u).
  Body rotated(const MatD& q) const {
    Body b = *this;
    switch (kind_) {
      case BodyKind::Harmonic:
      case BodyKind::Ball:
        if constexpr (Dim == 2) {
          // rotate each frequency pair
          const double angle = std::atan2(q(1, 0), q(0, 0));
          for (int k = 1; k <= lmax_; ++k) {
            const double a = coeffs_[2 * k - 1], s = coeffs_[2 * k];
            const double c = std::cos(k * angle), sn = std::sin(k * angle);
            b.coeffs_[2 * k - 1] = a * c - s * sn;
            b.coeffs_[2 * k] = a * sn + s * c;
          }
        } else {
          b.coeffs_ = fit_sphere_harmonics(
              [&](const Eigen::Vector3d& u) { return harmonic_value(q.transpose() * u); }, lmax_);
        }
        b.rebuild();
        break;
      case BodyKind::Reuleaux:
        b.phase_ += std::atan2(q(1, 0), q(0, 0));
        b.shift_ = q * shift_;
        break;
      case BodyKind::PolytopeHull:
        for (auto& v : b.vertices_) v = q * v;
        b.shift_ = q * shift_;
        break;
      case BodyKind::Ellipsoid:
        b.shape_ = q * shape_;
        b.shift_ = q * shift_;
        break;
    }
    return b;
  }

  double reuleaux_radius() const {
    return 1.0 / std::cos(std::numbers::pi / (2.0 * reuleaux_k_));
  }

 private:
  Body() = default;

  void raise_lmax(int lmax) {
    std::vector<double> c(harmonic_count(Dim, lmax), 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin());
    coeffs_ = std::move(c);
    lmax_ = lmax;
  }

  void rebuild() {
    if constexpr (Dim == 3) {
      const auto& basis = solid_harmonics();
      parts_.assign(lmax_ + 1, HomogeneousPoly());
      for (int l = 0; l <= lmax_; ++l) {
        HomogeneousPoly p(l, {});
        bool any = false;
        for (int m = -l; m <= l; ++m) {
          const double c = coeffs_[sh_index(l, m)];
          if (c == 0.0) continue;
          p.add_scaled(basis[sh_index(l, m)], c);
          any = true;
        }
        if (any) parts_[l] = p;
      }
    }
  }

  // g and first two angular derivatives for circular harmonics.
  void circle_eval(const Vec<2>& u, double& g0, double& g1, double& g2) const requires(Dim == 2) {
    const double c1 = u[0], s1 = u[1];
    g0 = coeffs_[0] / std::sqrt(2.0 * std::numbers::pi);
    g1 = g2 = 0.0;
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    double ck = 1.0, sk = 0.0;
    for (int k = 1; k <= lmax_; ++k) {
      const double cn = ck * c1 - sk * s1, sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      const double a = coeffs_[2 * k - 1] * norm, b = coeffs_[2 * k] * norm;
      g0 += a * ck + b * sk;
      g1 += k * (-a * sk + b * ck);
      g2 += -k * k * (a * ck + b * sk);
    }
  }

  double harmonic_value(const VecD& u) const {
    if constexpr (Dim == 2) {
      double g0, g1, g2;
      circle_eval(u, g0, g1, g2);
      return g0;
    } else {
      double v = 0.0;
      for (const auto& p : parts_)
        if (!p.empty()) v += p.value(u);
      return v;
    }
  }

  double harmonic_value_grad(const VecD& u, VecD& grad) const {
    if constexpr (Dim == 2) {
      double g0, g1, g2;
      circle_eval(u, g0, g1, g2);
      grad = g1 * Vec<2>(-u[1], u[0]);
      return g0;
    } else {
      double v = 0.0;
      grad.setZero();
      for (int l = 0; l < static_cast<int>(parts_.size()); ++l) {
        if (parts_[l].empty()) continue;
        Eigen::Vector3d gp;
        const double p = parts_[l].value_gradient(u, gp);
        v += p;
        grad += gp - l * p * u;  // tangential by Euler's identity
      }
      return v;
    }
  }

  double reuleaux_eval(const Vec<2>& u, Vec<2>* point, bool* on_arc) const requires(Dim == 2) {
    const int k = reuleaux_k_;
    const double step = 2.0 * std::numbers::pi / k;
    const double half_cone = std::numbers::pi / (2.0 * k);
    const double r = reuleaux_radius();
    const double phi = std::atan2(u[1], u[0]);
    auto wrap = [](double a) { return a - 2.0 * std::numbers::pi * std::floor(a / (2.0 * std::numbers::pi)); };
    auto vertex = [&](int i) {
      const double b = phase_ + step * i;
      return Vec<2>(r * std::cos(b), r * std::sin(b));
    };
    const double d = wrap(phi - phase_);
    const int i = static_cast<int>(std::lround(d / step)) % k;
    const double delta = d - step * std::lround(d / step);
    double h;
    Vec<2> p;
    if (std::abs(delta) <= half_cone) {
      p = vertex(i);
      h = p.dot(u);
    } else {
      const double dp = wrap(phi - std::numbers::pi - phase_);
      const int j = static_cast<int>(std::lround(dp / step)) % k;
      p = vertex(j) + 2.0 * u;
      h = p.dot(u);
    }
    if (point) *point = p + shift_;
    if (on_arc) *on_arc = std::abs(delta) > half_cone;
    return h + shift_.dot(u);
  }

  BodyKind kind_ = BodyKind::Harmonic;
  int lmax_ = 0;
  std::vector<double> coeffs_;
  std::vector<HomogeneousPoly> parts_;  // per degree, Dim == 3
  int reuleaux_k_ = 0;
  double phase_ = 0.0;
  std::vector<VecD> vertices_;
  MatD shape_ = MatD::Identity();
  VecD shift_ = VecD::Zero();
};

// ---------------------------------------------------------------------------
// Convexity

inline constexpr int kDefaultGridSphere = 10242;
inline constexpr int kDefaultGridCircle = 4096;

template <int Dim>
const std::vector<Vec<Dim>>& default_convexity_grid() {
  static const std::vector<Vec<Dim>> grid =
      direction_grid<Dim>(Dim == 2 ? kDefaultGridCircle : kDefaultGridSphere);
  return grid;
}

/// Minimum over the grid of the tangential Hessian eigenvalue of the
/// 1-homogeneous support function. Positive means convex on the grid.
template <int Dim>
double preconvexity_margin(const Body<Dim>& body, const std::vector<Vec<Dim>>& grid) {
  double min_support = std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& u : grid) {
    min_support = std::min(min_support, body.support(u));
    margin = std::min(margin, body.tangential_min_eig(u));
  }
  if (!(min_support > 0.0))
    throw Error(ErrorCode::NonPositiveSupport, "min(g)+1 = " + std::to_string(min_support));
  return margin;
}

template <int Dim>
double preconvexity_margin(const Body<Dim>& body) {
  return preconvexity_margin(body, default_convexity_grid<Dim>());
}

template <int Dim>
Body<Dim> Body<Dim>::convex_harmonic(std::vector<double> coeffs, int lmax) {
  Body b = from_harmonics(std::move(coeffs), lmax);
  const double m = preconvexity_margin(b);
  if (!(m > 0.0)) throw Error(ErrorCode::BadParameter, "harmonic body is not convex (margin " + std::to_string(m) + ")");
  return b;
}

/// Support values and Hessian parts of a harmonic field on a grid, so that
/// the convexity margin of lambda * g can be re-evaluated cheaply.
template <int Dim>
class ConvexityProfile {
 public:
  ConvexityProfile(const Body<Dim>& field, const std::vector<Vec<Dim>>& grid) {
    values_.reserve(grid.size());
    blocks_.reserve(grid.size());
    for (const auto& u : grid) {
      values_.push_back(field.g(u));
      const auto e = tangent_basis<Dim>(u);
      blocks_.push_back(e.transpose() * field.harmonic_hessian_part(u) * e);
    }
  }

  /// Convexity margin of lambda * g (+inf never returned; support
  /// positivity is reported separately).
  double margin(double lambda) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks_) {
      const Block h = Block::Identity() + lambda * b;
      if constexpr (Dim == 2) {
        m = std::min(m, h(0, 0));
      } else {
        const double a = h(0, 0), c = h(1, 1), off = 0.5 * (h(0, 1) + h(1, 0));
        m = std::min(m, 0.5 * (a + c - std::sqrt((a - c) * (a - c) + 4.0 * off * off)));
      }
    }
    return m;
  }

  double min_support(double lambda) const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, 1.0 + lambda * v);
    return m;
  }

  /// Largest lambda in [0, 1] (to `tol`) with margin >= target and positive
  /// support. Both constraints are concave in lambda, so bisection is exact.
  double max_scale(double target, double tol = 1e-6) const {
    auto ok = [&](double l) { return margin(l) >= target && min_support(l) > 0.0; };
    if (ok(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    return lo;
  }

 private:
  using Block = Eigen::Matrix<double, Dim - 1, Dim - 1>;
  std::vector<double> values_;
  std::vector<Block> blocks_;
};

// ---------------------------------------------------------------------------
// Construction of constant-width bodies

inline constexpr double kDefaultTargetMargin = 0.05;

template <int Dim>
struct ScaledBody {
  Body<Dim> body;
  double scale = 1.0;
  bool symmetric_input = false;  // the input had no odd part; result is the ball
};

/// Odd part of a harmonic field, scaled down (if needed) until its
/// convexity margin reaches `target_margin`.
template <int Dim>
ScaledBody<Dim> antisymmetrize(const std::vector<double>& coeffs, int lmax,
                               double target_margin = kDefaultTargetMargin,
                               const std::vector<Vec<Dim>>& grid = default_convexity_grid<Dim>()) {
  std::vector<double> odd(coeffs.size(), 0.0);
  double scale = 0.0, odd_size = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    scale = std::max(scale, std::abs(coeffs[i]));
    if (harmonic_degree(Dim, static_cast<int>(i)) % 2 == 1) {
      odd[i] = coeffs[i];
      odd_size = std::max(odd_size, std::abs(coeffs[i]));
    }
  }
  // odd part at rounding level (e.g. from a quadrature fit) counts as symmetric
  if (odd_size <= 1e-12 * scale || odd_size == 0.0) return {Body<Dim>::ball(), 1.0, true};
  const Body<Dim> field = Body<Dim>::from_harmonics(odd, lmax);
  const double lambda = ConvexityProfile<Dim>(field, grid).max_scale(target_margin);
  for (auto& c : odd) c *= lambda;
  return {Body<Dim>::from_harmonics(std::move(odd), lmax), lambda, false};
}

/// Scales an arbitrary harmonic field (all degrees) to a convex body with the
/// requested margin.
template <int Dim>
ScaledBody<Dim> scale_to_margin(const std::vector<double>& coeffs, int lmax,
                                double target_margin = kDefaultTargetMargin,
                                const std::vector<Vec<Dim>>& grid = default_convexity_grid<Dim>()) {
  const Body<Dim> field = Body<Dim>::from_harmonics(coeffs, lmax);
  const double lambda = ConvexityProfile<Dim>(field, grid).max_scale(target_margin);
  std::vector<double> scaled = coeffs;
  for (auto& c : scaled) c *= lambda;
  return {Body<Dim>::from_harmonics(std::move(scaled), lmax), lambda, false};
}

/// g = eps * xyz, a pure degree-3 harmonic.
inline Body<3> xyz_body(double eps) {
  std::vector<double> c(harmonic_count(3, 3), 0.0);
  c[sh_index(3, -2)] = eps * 2.0 * std::sqrt(std::numbers::pi / 105.0);
  return Body<3>::from_harmonics(std::move(c), 3);
}

/// Random harmonic coefficients with standard-normal entries on the listed degrees.
template <int Dim>
std::vector<double> random_harmonic_coeffs(std::uint64_t seed, int lmax, const std::vector<int>& degrees) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::vector<double> c(harmonic_count(Dim, lmax), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = n01(rng);
    const int l = harmonic_degree(Dim, static_cast<int>(i));
    if (std::find(degrees.begin(), degrees.end(), l) != degrees.end()) c[i] = v;
  }
  return c;
}

/// Seeded random constant-width body: odd harmonics on `degrees`, antisymmetrized
/// and scaled to the target margin.
template <int Dim>
ScaledBody<Dim> random_constant_width_body(std::uint64_t seed, int lmax = 5,
                                           const std::vector<int>& degrees = {1, 3, 5},
                                           double target_margin = kDefaultTargetMargin) {
  return antisymmetrize<Dim>(random_harmonic_coeffs<Dim>(seed, lmax, degrees), lmax, target_margin);
}

/// Seeded random strictly convex body with harmonics of every degree up to lmax.
template <int Dim>
ScaledBody<Dim> random_convex_body(std::uint64_t seed, int lmax = 4, double target_margin = 0.2) {
  std::vector<int> degrees;
  for (int l = 1; l <= lmax; ++l) degrees.push_back(l);
  auto c = random_harmonic_coeffs<Dim>(seed, lmax, degrees);
  // smooth: damp higher degrees
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int l = harmonic_degree(Dim, static_cast<int>(i));
    c[i] /= (1.0 + l * l);
  }
  return scale_to_margin<Dim>(c, lmax, target_margin);
}

}  // namespace cwc
