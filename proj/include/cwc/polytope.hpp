// Root systems A_n and polytopes whose facets are tangent to the unit sphere.
#pragma once

#include "cwc/body.hpp"
#include "cwc/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cwc {

/// Root system A_n as n(n+1) unit vectors. Points [0, n(n+1)/2) are the pair
/// representatives; point i + n(n+1)/2 is the negative of point i.
struct RootSystem {
  int dim = 0;
  std::vector<Eigen::VectorXd> points;

  std::size_t pair_count() const { return points.size() / 2; }
};

inline RootSystem root_system(int n) {
  if (n < 2) throw Error(ErrorCode::UnsupportedDim, "root system A_n needs n >= 2");
  RootSystem rs;
  rs.dim = n;
  std::vector<Eigen::VectorXd> reps;
  if (n == 2) {
    for (int k = 0; k < 3; ++k) {
      const double t = k * std::numbers::pi / 3.0;
      reps.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
  } else if (n == 3) {
    const double s = 1.0 / std::numbers::sqrt2;
    reps = {Eigen::Vector3d(s, s, 0), Eigen::Vector3d(s, -s, 0), Eigen::Vector3d(s, 0, s),
            Eigen::Vector3d(s, 0, -s), Eigen::Vector3d(0, s, s), Eigen::Vector3d(0, s, -s)};
  } else {
    // e_i - e_j in R^{n+1}, written in the Helmert basis of the sum-zero hyperplane
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n + 1, n);
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) basis(i, k - 1) = 1.0;
      basis(k, k - 1) = -k;
      basis.col(k - 1) /= std::sqrt(k * (k + 1.0));
    }
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n + 1);
        d[i] = 1.0;
        d[j] = -1.0;
        reps.push_back((basis.transpose() * d).normalized());
      }
    }
  }
  rs.points = reps;
  for (const auto& p : reps) rs.points.push_back(-p);
  return rs;
}

template <int Dim>
std::vector<Vec<Dim>> root_points() {
  std::vector<Vec<Dim>> out;
  for (const auto& p : root_system(Dim).points) out.push_back(p);
  return out;
}

/// Polytope {x : <x, m_i> <= offset_i} with unit normals m_i. Normals come in
/// antipodal pairs: normals[i + pair_count()] == -normals[i].
template <int Dim>
struct TangentPolytope {
  std::string name;
  std::vector<Vec<Dim>> normals;
  std::vector<double> offsets;
  std::vector<Vec<Dim>> vertices;

  std::size_t facet_count() const { return normals.size(); }
  std::size_t pair_count() const { return normals.size() / 2; }

  /// Vertices lying on facet i.
  std::vector<std::size_t> facet_vertices(std::size_t i, double tol = 1e-9) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (std::abs(vertices[v].dot(normals[i]) - offsets[i]) < tol) out.push_back(v);
    return out;
  }

  /// Number of facet planes through vertex v.
  int vertex_valence(std::size_t v, double tol = 1e-9) const {
    int count = 0;
    for (std::size_t i = 0; i < normals.size(); ++i)
      if (std::abs(vertices[v].dot(normals[i]) - offsets[i]) < tol) ++count;
    return count;
  }

  bool contains(const Vec<Dim>& x, double tol = 1e-10) const {
    for (std::size_t i = 0; i < normals.size(); ++i)
      if (x.dot(normals[i]) > offsets[i] + tol) return false;
    return true;
  }
};

/// Vertices of {x : <x, m_i> <= c_i} by intersecting every Dim-subset of
/// facet planes and keeping the feasible points.
template <int Dim>
std::vector<Vec<Dim>> enumerate_vertices(const std::vector<Vec<Dim>>& normals, const std::vector<double>& offsets,
                                         double tol = 1e-10) {
  std::vector<Vec<Dim>> out;
  const std::size_t n = normals.size();
  auto consider = [&](const std::vector<std::size_t>& idx) {
    Mat<Dim> a;
    Vec<Dim> b;
    for (int r = 0; r < Dim; ++r) {
      a.row(r) = normals[idx[r]].transpose();
      b[r] = offsets[idx[r]];
    }
    if (std::abs(a.determinant()) < 1e-12) return;
    const Vec<Dim> x = a.partialPivLu().solve(b);
    for (std::size_t i = 0; i < n; ++i)
      if (x.dot(normals[i]) > offsets[i] + tol) return;
    for (const auto& y : out)
      if ((y - x).norm() < 1e-9) return;
    out.push_back(x);
  };
  if constexpr (Dim == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) consider({i, j});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) consider({i, j, k});
  }
  return out;
}

/// Centrally symmetric polytope circumscribing the unit sphere, tangent at
/// the given (normalized) pair representatives and their negatives.
template <int Dim>
TangentPolytope<Dim> tangent_polytope(std::string name, const std::vector<Vec<Dim>>& representatives) {
  TangentPolytope<Dim> p;
  p.name = std::move(name);
  for (const auto& r : representatives) p.normals.push_back(r.normalized());
  for (const auto& r : representatives) p.normals.push_back(-r.normalized());
  p.offsets.assign(p.normals.size(), 1.0);
  p.vertices = enumerate_vertices<Dim>(p.normals, p.offsets);
  for (std::size_t i = 0; i < p.normals.size(); ++i)
    if (p.facet_vertices(i).size() < static_cast<std::size_t>(Dim))
      throw Error(ErrorCode::BadParameter, "polytope is unbounded or has a degenerate facet");
  return p;
}

/// D_n: facets tangent to the unit sphere at the root system A_n (regular
/// hexagon for n = 2, rhombic dodecahedron for n = 3).
template <int Dim>
TangentPolytope<Dim> dual_difference_polytope() {
  const auto pts = root_points<Dim>();
  std::vector<Vec<Dim>> reps(pts.begin(), pts.begin() + pts.size() / 2);
  return tangent_polytope<Dim>(Dim == 2 ? "hexagon" : "d3", reps);
}

inline TangentPolytope<3> dual_difference_polytope(int n) {
  if (n != 3) throw Error(ErrorCode::UnsupportedDim, "use dual_difference_polytope<2>() for n = 2; n >= 4 unsupported");
  return dual_difference_polytope<3>();
}

/// {|x| <= 1, |y| <= 1, a|x| + a|y| + b|z| <= sqrt(2a^2 + b^2)}.
inline TangentPolytope<3> polytope_P(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::BadParameter, "P(a,b) needs a > 0 and b > 0");
  const std::vector<Vec<3>> reps = {Vec<3>(1, 0, 0), Vec<3>(0, 1, 0), Vec<3>(a, a, b),
                                    Vec<3>(a, a, -b), Vec<3>(a, -a, b), Vec<3>(a, -a, -b)};
  return tangent_polytope<3>("P(" + std::to_string(a) + "," + std::to_string(b) + ")", reps);
}

/// Normals and offsets of the polytope rotated by r and translated by t.
template <int Dim>
TangentPolytope<Dim> placed(const TangentPolytope<Dim>& p, const Mat<Dim>& r, const Vec<Dim>& t) {
  TangentPolytope<Dim> q = p;
  for (std::size_t i = 0; i < p.normals.size(); ++i) {
    q.normals[i] = r * p.normals[i];
    q.offsets[i] = p.offsets[i] + t.dot(q.normals[i]);
  }
  for (auto& v : q.vertices) v = r * v + t;
  return q;
}

}  // namespace cwc
