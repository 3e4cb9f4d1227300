// Boundary meshes of bodies and polytopes, written as ASCII OFF or OBJ.
#pragma once

#include "cwc/body.hpp"
#include "cwc/errors.hpp"
#include "cwc/polytope.hpp"
#include "cwc/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace cwc {

/// Polygon mesh in R^3; planar objects get z = 0 and a single closed face.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::vector<int>> faces;
};

namespace detail {

inline Eigen::Vector3d lift3(const Vec<2>& v) { return {v[0], v[1], 0.0}; }
inline Eigen::Vector3d lift3(const Vec<3>& v) { return v; }

}  // namespace detail

/// Body boundary: support points of an icosphere (3D) or circle grid (2D).
/// Faces follow the direction grid, so flat pieces of the boundary produce
/// repeated vertices.
template <int Dim>
Mesh body_mesh(const Body<Dim>& body, int resolution = 2562) {
  Mesh m;
  if constexpr (Dim == 2) {
    std::vector<int> face;
    for (const auto& u : circle_grid(resolution)) {
      face.push_back(static_cast<int>(m.vertices.size()));
      m.vertices.push_back(detail::lift3(body.support_point(u)));
    }
    m.faces.push_back(face);
  } else {
    const auto sphere = icosphere(icosphere_level_for(resolution));
    for (const auto& u : sphere.vertices) m.vertices.push_back(body.support_point(u));
    for (const auto& f : sphere.faces) m.faces.push_back({f[0], f[1], f[2]});
  }
  return m;
}

/// Polytope boundary with one polygon per facet, vertices in counter-clockwise
/// order seen from outside.
template <int Dim>
Mesh polytope_mesh(const TangentPolytope<Dim>& p) {
  Mesh m;
  for (const auto& v : p.vertices) m.vertices.push_back(detail::lift3(v));
  Vec<Dim> centroid = Vec<Dim>::Zero();
  for (const auto& v : p.vertices) centroid += v;
  centroid /= static_cast<double>(p.vertices.size());
  if constexpr (Dim == 2) {
    std::vector<int> order(p.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto ang = [&](int i) {
      const Vec<2> d = p.vertices[i] - centroid;
      return std::atan2(d[1], d[0]);
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ang(a) < ang(b); });
    m.faces.push_back(order);
  } else {
    for (std::size_t f = 0; f < p.normals.size(); ++f) {
      const auto idx = p.facet_vertices(f);
      if (idx.size() < 3) continue;
      const Vec<3> n = p.normals[f];
      Vec<3> c = Vec<3>::Zero();
      for (auto i : idx) c += p.vertices[i];
      c /= static_cast<double>(idx.size());
      const auto e = tangent_basis<3>(n);
      std::vector<std::pair<double, int>> order;
      for (auto i : idx) {
        const Vec<3> d = p.vertices[i] - c;
        // (e0, e1, n) is right-handed, so increasing angle is counter-clockwise from outside
        order.emplace_back(std::atan2(d.dot(e.col(1)), d.dot(e.col(0))), static_cast<int>(i));
      }
      std::sort(order.begin(), order.end());
      std::vector<int> face;
      for (const auto& [a, i] : order) face.push_back(i);
      m.faces.push_back(face);
    }
  }
  return m;
}

/// Concatenation of meshes (body and placed polytope in one file).
inline Mesh merge(const Mesh& a, const Mesh& b) {
  Mesh m = a;
  const int off = static_cast<int>(a.vertices.size());
  m.vertices.insert(m.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto f : b.faces) {
    for (auto& i : f) i += off;
    m.faces.push_back(f);
  }
  return m;
}

inline std::string to_off(const Mesh& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "OFF\n" << m.vertices.size() << ' ' << m.faces.size() << " 0\n";
  for (const auto& v : m.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : m.faces) {
    out << f.size();
    for (int i : f) out << ' ' << i;
    out << '\n';
  }
  return out.str();
}

inline std::string to_obj(const Mesh& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& v : m.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : m.faces) {
    out << 'f';
    for (int i : f) out << ' ' << i + 1;
    out << '\n';
  }
  return out.str();
}

/// Parses ASCII OFF as written by to_off (no comments, no colours).
inline Mesh parse_off(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  if (head != "OFF") throw Error(ErrorCode::Io, "not an OFF file");
  std::size_t nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  Mesh m;
  m.vertices.resize(nv);
  for (auto& v : m.vertices) in >> v[0] >> v[1] >> v[2];
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t k = 0;
    in >> k;
    std::vector<int> face(k);
    for (auto& i : face) in >> i;
    m.faces.push_back(face);
  }
  if (!in) throw Error(ErrorCode::Io, "truncated OFF data");
  return m;
}

/// Writes OFF, or OBJ when the path ends in ".obj".
inline void export_mesh(const Mesh& m, const std::string& path) {
  const bool obj = path.size() >= 4 && path.compare(path.size() - 4, 4, ".obj") == 0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << (obj ? to_obj(m) : to_off(m));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

template <int Dim>
void export_mesh(const Body<Dim>& body, const std::string& path) {
  export_mesh(body_mesh(body), path);
}

template <int Dim>
void export_mesh(const TangentPolytope<Dim>& p, const std::string& path) {
  export_mesh(polytope_mesh(p), path);
}

}  // namespace cwc
