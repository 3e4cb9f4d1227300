// Real orthonormal harmonic bases on S^1 and S^2.
//
// Basis order (shared by the JSON body format):
//   n = 2: index 0 -> 1/sqrt(2 pi); index 2k-1 -> cos(k t)/sqrt(pi);
//          index 2k -> sin(k t)/sqrt(pi).
//   n = 3: index l*l + l + m for -l <= m <= l. m > 0 uses the cosine
//          (Re (x+iy)^m) family, m < 0 the sine family, no Condon-Shortley
//          phase. Each basis function is stored as a homogeneous harmonic
//          polynomial of degree l, so derivatives are exact.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cwc {

inline constexpr int kMaxHarmonicDegree = 16;

constexpr int harmonic_count(int dim, int lmax) {
  return dim == 2 ? 2 * lmax + 1 : (lmax + 1) * (lmax + 1);
}

constexpr int sh_index(int l, int m) { return l * l + l + m; }

/// Degree of the basis function stored at `index`.
constexpr int harmonic_degree(int dim, int index) {
  if (dim == 2) return (index + 1) / 2;
  int l = 0;
  while ((l + 1) * (l + 1) <= index) ++l;
  return l;
}

struct Monomial {
  int a = 0, b = 0, c = 0;  // exponents of x, y, z
  double coef = 0.0;
};

/// Homogeneous polynomial in (x, y, z) with value, gradient and Hessian.
class HomogeneousPoly {
 public:
  HomogeneousPoly() = default;
  HomogeneousPoly(int degree, std::vector<Monomial> terms)
      : degree_(degree), terms_(std::move(terms)) {}

  int degree() const { return degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  HomogeneousPoly& add_scaled(const HomogeneousPoly& other, double s) {
    for (const auto& t : other.terms_) {
      bool merged = false;
      for (auto& u : terms_) {
        if (u.a == t.a && u.b == t.b && u.c == t.c) {
          u.coef += s * t.coef;
          merged = true;
          break;
        }
      }
      if (!merged) terms_.push_back({t.a, t.b, t.c, s * t.coef});
    }
    if (degree_ < other.degree_) degree_ = other.degree_;
    return *this;
  }

  double value(const Eigen::Vector3d& p) const {
    Powers pw(p, degree_);
    double v = 0.0;
    for (const auto& t : terms_) v += t.coef * pw.x[t.a] * pw.y[t.b] * pw.z[t.c];
    return v;
  }

  /// Value and gradient in one pass.
  double value_gradient(const Eigen::Vector3d& p, Eigen::Vector3d& grad) const {
    Powers pw(p, degree_);
    double v = 0.0;
    grad.setZero();
    for (const auto& t : terms_) {
      const double px = pw.x[t.a], py = pw.y[t.b], pz = pw.z[t.c];
      v += t.coef * px * py * pz;
      if (t.a > 0) grad[0] += t.coef * t.a * pw.x[t.a - 1] * py * pz;
      if (t.b > 0) grad[1] += t.coef * t.b * px * pw.y[t.b - 1] * pz;
      if (t.c > 0) grad[2] += t.coef * t.c * px * py * pw.z[t.c - 1];
    }
    return v;
  }

  double value_gradient_hessian(const Eigen::Vector3d& p, Eigen::Vector3d& grad,
                                Eigen::Matrix3d& hess) const {
    Powers pw(p, degree_);
    double v = 0.0;
    grad.setZero();
    hess.setZero();
    auto d = [](const std::array<double, kMaxHarmonicDegree + 1>& pows, int e, int order) {
      // order-th derivative of s^e evaluated from the power table
      if (order == 0) return pows[e];
      if (order == 1) return e >= 1 ? e * pows[e - 1] : 0.0;
      return e >= 2 ? e * (e - 1) * pows[e - 2] : 0.0;
    };
    for (const auto& t : terms_) {
      const double x0 = pw.x[t.a], y0 = pw.y[t.b], z0 = pw.z[t.c];
      const double x1 = d(pw.x, t.a, 1), y1 = d(pw.y, t.b, 1), z1 = d(pw.z, t.c, 1);
      const double x2 = d(pw.x, t.a, 2), y2 = d(pw.y, t.b, 2), z2 = d(pw.z, t.c, 2);
      v += t.coef * x0 * y0 * z0;
      grad[0] += t.coef * x1 * y0 * z0;
      grad[1] += t.coef * x0 * y1 * z0;
      grad[2] += t.coef * x0 * y0 * z1;
      hess(0, 0) += t.coef * x2 * y0 * z0;
      hess(1, 1) += t.coef * x0 * y2 * z0;
      hess(2, 2) += t.coef * x0 * y0 * z2;
      hess(0, 1) += t.coef * x1 * y1 * z0;
      hess(0, 2) += t.coef * x1 * y0 * z1;
      hess(1, 2) += t.coef * x0 * y1 * z1;
    }
    hess(1, 0) = hess(0, 1);
    hess(2, 0) = hess(0, 2);
    hess(2, 1) = hess(1, 2);
    return v;
  }

 private:
  struct Powers {
    std::array<double, kMaxHarmonicDegree + 1> x{}, y{}, z{};
    Powers(const Eigen::Vector3d& p, int n) {
      x[0] = y[0] = z[0] = 1.0;
      for (int i = 1; i <= n; ++i) {
        x[i] = x[i - 1] * p[0];
        y[i] = y[i - 1] * p[1];
        z[i] = z[i - 1] * p[2];
      }
    }
  };

  int degree_ = 0;
  std::vector<Monomial> terms_;
};

namespace detail {

// Sparse polynomial used only while building the basis.
using SparsePoly = std::map<std::array<int, 3>, double>;

inline SparsePoly poly_mul(const SparsePoly& p, const SparsePoly& q) {
  SparsePoly r;
  for (const auto& [e1, c1] : p)
    for (const auto& [e2, c2] : q)
      r[{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}] += c1 * c2;
  return r;
}

inline SparsePoly poly_axpy(double a, const SparsePoly& p, double b, const SparsePoly& q) {
  SparsePoly r;
  for (const auto& [e, c] : p) r[e] += a * c;
  for (const auto& [e, c] : q) r[e] += b * c;
  return r;
}

inline HomogeneousPoly to_homogeneous(const SparsePoly& p, int degree, double scale) {
  std::vector<Monomial> terms;
  for (const auto& [e, c] : p) {
    if (std::abs(c) == 0.0) continue;
    terms.push_back({e[0], e[1], e[2], c * scale});
  }
  return HomogeneousPoly(degree, std::move(terms));
}

inline std::vector<HomogeneousPoly> build_solid_harmonics() {
  constexpr int L = kMaxHarmonicDegree;
  const SparsePoly X{{{1, 0, 0}, 1.0}}, Y{{{0, 1, 0}, 1.0}}, Z{{{0, 0, 1}, 1.0}};
  const SparsePoly R2{{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}};
  const SparsePoly One{{{0, 0, 0}, 1.0}};

  // A_m = Re (x+iy)^m, B_m = Im (x+iy)^m
  std::vector<SparsePoly> A(L + 1), B(L + 1);
  A[0] = One;
  B[0] = {};
  for (int m = 1; m <= L; ++m) {
    A[m] = poly_axpy(1.0, poly_mul(X, A[m - 1]), -1.0, poly_mul(Y, B[m - 1]));
    B[m] = poly_axpy(1.0, poly_mul(X, B[m - 1]), 1.0, poly_mul(Y, A[m - 1]));
  }

  std::vector<HomogeneousPoly> basis(harmonic_count(3, L));
  for (int m = 0; m <= L; ++m) {
    // Pi_l^m(z, r^2): r^{l-m} P_l^m(z/r) / sin^m, polynomial in z and r^2.
    std::vector<SparsePoly> Pi(L + 1);
    double dfact = 1.0;
    for (int k = 1; k <= 2 * m - 1; k += 2) dfact *= k;
    Pi[m] = {{{0, 0, 0}, dfact}};
    if (m + 1 <= L) Pi[m + 1] = poly_axpy(2.0 * m + 1.0, poly_mul(Z, Pi[m]), 0.0, {});
    for (int l = m + 2; l <= L; ++l) {
      Pi[l] = poly_axpy((2.0 * l - 1.0) / (l - m), poly_mul(Z, Pi[l - 1]),
                        -(l + m - 1.0) / (l - m), poly_mul(R2, Pi[l - 2]));
    }
    for (int l = m; l <= L; ++l) {
      double ratio = 1.0;  // (l-m)!/(l+m)!
      for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
      double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
      if (m == 0) {
        basis[sh_index(l, 0)] = to_homogeneous(Pi[l], l, norm);
      } else {
        norm *= std::numbers::sqrt2;
        basis[sh_index(l, m)] = to_homogeneous(poly_mul(Pi[l], A[m]), l, norm);
        basis[sh_index(l, -m)] = to_homogeneous(poly_mul(Pi[l], B[m]), l, norm);
      }
    }
  }
  return basis;
}

}  // namespace detail

/// Orthonormal real spherical harmonics up to kMaxHarmonicDegree, as solid
/// harmonic polynomials.
inline const std::vector<HomogeneousPoly>& solid_harmonics() {
  static const std::vector<HomogeneousPoly> basis = detail::build_solid_harmonics();
  return basis;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Projects a function on S^2 onto the harmonic basis up to degree lmax.
/// Exact (to rounding) for band-limited inputs of degree <= lmax.
inline std::vector<double> fit_sphere_harmonics(const std::function<double(const Eigen::Vector3d&)>& fn,
                                                int lmax) {
  if (lmax < 0 || lmax > kMaxHarmonicDegree) throw std::invalid_argument("harmonic degree out of range");
  const auto& basis = solid_harmonics();
  const int nz = lmax + 2, nphi = 2 * lmax + 3;
  std::vector<double> zs, ws;
  gauss_legendre(nz, zs, ws);
  std::vector<double> coeffs(harmonic_count(3, lmax), 0.0);
  for (int i = 0; i < nz; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - zs[i] * zs[i]));
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / nphi;
      Eigen::Vector3d p(s * std::cos(phi), s * std::sin(phi), zs[i]);
      const double w = ws[i] * 2.0 * std::numbers::pi / nphi;
      const double f = fn(p);
      for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += w * f * basis[k].value(p);
    }
  }
  return coeffs;
}

/// Circular harmonic basis value at angle t.
inline double circle_harmonic(int index, double t) {
  if (index == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const int k = (index + 1) / 2;
  const double s = 1.0 / std::sqrt(std::numbers::pi);
  return index % 2 == 1 ? s * std::cos(k * t) : s * std::sin(k * t);
}

/// Projects a function on S^1 onto circular harmonics up to degree lmax
/// (trapezoid rule, exact for band-limited inputs).
inline std::vector<double> fit_circle_harmonics(const std::function<double(double)>& fn, int lmax,
                                                int samples = 0) {
  if (samples <= 0) samples = 4 * lmax + 8;
  std::vector<double> coeffs(harmonic_count(2, lmax), 0.0);
  for (int j = 0; j < samples; ++j) {
    const double t = 2.0 * std::numbers::pi * j / samples;
    const double f = fn(t);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      coeffs[k] += f * circle_harmonic(static_cast<int>(k), t) * 2.0 * std::numbers::pi / samples;
  }
  return coeffs;
}

}  // namespace cwc
