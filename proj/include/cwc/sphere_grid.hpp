// Direction grids on S^1 and S^2 and rotation grids on SO(3).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace cwc {

struct Icosphere {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Subdivided icosahedron; level k has 10*4^k + 2 vertices (level 5: 10242).
inline Icosphere icosphere(int level) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere s;
  s.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : s.vertices) v.normalize();
  s.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int it = 0; it < level; ++it) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto found = midpoint.find(key);
      if (found != midpoint.end()) return found->second;
      s.vertices.push_back((s.vertices[a] + s.vertices[b]).normalized());
      const int idx = static_cast<int>(s.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(s.faces.size() * 4);
    for (const auto& f : s.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    s.faces = std::move(next);
  }
  return s;
}

/// Smallest icosphere level with at least `count` vertices.
inline int icosphere_level_for(int count) {
  int level = 0;
  while (10 * (1 << (2 * level)) + 2 < count) ++level;
  return level;
}

inline std::vector<Eigen::Vector2d> circle_grid(int count) {
  std::vector<Eigen::Vector2d> out(count);
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    out[i] = {std::cos(t), std::sin(t)};
  }
  return out;
}

/// Default dense direction grid used for convexity and containment tests.
template <int Dim>
std::vector<Eigen::Matrix<double, Dim, 1>> direction_grid(int count) {
  if constexpr (Dim == 2) {
    return circle_grid(count);
  } else {
    return icosphere(icosphere_level_for(count)).vertices;
  }
}

/// HEALPix ring-scheme pixel centres as (theta, phi); 12 * nside^2 points.
inline std::vector<std::pair<double, double>> healpix_centers(int nside) {
  std::vector<std::pair<double, double>> out;
  out.reserve(12 * nside * nside);
  const double n = nside;
  for (int i = 1; i <= 4 * nside - 1; ++i) {
    if (i < nside) {
      const double z = 1.0 - i * i / (3.0 * n * n);
      for (int j = 1; j <= 4 * i; ++j)
        out.emplace_back(std::acos(z), std::numbers::pi / (2.0 * i) * (j - 0.5));
    } else if (i <= 3 * nside) {
      const double z = 4.0 / 3.0 - 2.0 * i / (3.0 * n);
      const int shift = (i - nside + 1) % 2;
      for (int j = 1; j <= 4 * nside; ++j)
        out.emplace_back(std::acos(z), std::numbers::pi / (2.0 * n) * (j - shift / 2.0));
    } else {
      const int ip = 4 * nside - i;
      const double z = -(1.0 - ip * ip / (3.0 * n * n));
      for (int j = 1; j <= 4 * ip; ++j)
        out.emplace_back(std::acos(z), std::numbers::pi / (2.0 * ip) * (j - 0.5));
    }
  }
  return out;
}

/// Quasi-uniform SO(3) grid from the Hopf fibration: HEALPix base points on
/// S^2 times equally spaced fibre angles. Size 12 * nside^2 * npsi
/// (defaults give 24576 rotations).
inline std::vector<Eigen::Quaterniond> hopf_grid(int nside = 8, int npsi = 32) {
  std::vector<Eigen::Quaterniond> out;
  const auto base = healpix_centers(nside);
  out.reserve(base.size() * npsi);
  for (const auto& [theta, phi] : base) {
    for (int k = 0; k < npsi; ++k) {
      const double psi = 2.0 * std::numbers::pi * (k + 0.5) / npsi;
      const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
      out.emplace_back(c * std::cos(psi / 2.0), c * std::sin(psi / 2.0), s * std::cos(phi + psi / 2.0),
                       s * std::sin(phi + psi / 2.0));
    }
  }
  return out;
}

/// Rotation angle between two rotations given as unit quaternions.
inline double rotation_distance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  const double d = std::min(1.0, std::abs(a.coeffs().dot(b.coeffs())));
  return 2.0 * std::acos(d);
}

inline Eigen::Quaterniond random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  q.normalize();
  return q;
}

/// Quaternion of the rotation with rotation vector `w` (axis * angle).
inline Eigen::Quaterniond quat_exp(const Eigen::Vector3d& w) {
  const double angle = w.norm();
  if (angle < 1e-300) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, w / angle));
}

/// Empirical covering radius of a rotation grid: the largest distance from
/// `probes` seeded random rotations to their nearest grid element.
inline double covering_radius(const std::vector<Eigen::Quaterniond>& grid, int probes = 2000,
                              std::uint64_t seed = 12345) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Eigen::Quaterniond q = random_rotation(rng);
    double best = 0.0;
    for (const auto& g : grid) best = std::max(best, std::abs(q.coeffs().dot(g.coeffs())));
    worst = std::max(worst, 2.0 * std::acos(std::min(1.0, best)));
  }
  return worst;
}

/// Cached covering radius of hopf_grid(nside, npsi).
inline double hopf_grid_covering_radius(int nside, int npsi) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nside, npsi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double r = covering_radius(hopf_grid(nside, npsi));
  cache.emplace(key, r);
  return r;
}

}  // namespace cwc
