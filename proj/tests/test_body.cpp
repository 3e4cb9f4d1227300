#include "cwc/body.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cwc;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
}

Eigen::Vector2d unit2(double t) { return {std::cos(t), std::sin(t)}; }

// Reuleaux triangle built from three circular arcs, sampled densely.
std::vector<Eigen::Vector2d> reuleaux_boundary(double phase, int per_arc) {
  std::vector<Eigen::Vector2d> v;
  for (int i = 0; i < 3; ++i) v.push_back(2.0 / std::sqrt(3.0) * unit2(phase + 2 * kPi * i / 3));
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d a = v[(i + 1) % 3] - v[i], b = v[(i + 2) % 3] - v[i];
    double ta = std::atan2(a.y(), a.x()), tb = std::atan2(b.y(), b.x());
    if (tb < ta) std::swap(ta, tb);
    if (tb - ta > kPi) {
      std::swap(ta, tb);
      tb += 2 * kPi;
    }
    for (int s = 0; s <= per_arc; ++s) pts.push_back(v[i] + 2.0 * unit2(ta + (tb - ta) * s / per_arc));
  }
  return pts;
}

std::vector<double> constant_g(double value) {
  return {value * std::sqrt(4 * kPi)};
}

}  // namespace

TEST(Body, BallSupportAndWidth) {
  const auto b = Body<3>::ball();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto u = random_unit3(rng);
    EXPECT_NEAR(b.support(u), 1.0, 1e-15);
    EXPECT_NEAR(b.width(u), 2.0, 1e-15);
  }
  EXPECT_TRUE(b.is_constant_width());
  const auto shifted = Body<3>::ball(0.5, Vec<3>(1, 2, 3));
  const Vec<3> u = Vec<3>(1, 1, 0).normalized();
  EXPECT_NEAR(shifted.support(u), 0.5 + 3 / std::sqrt(2.0), 1e-14);
}

TEST(Body, CubeHullSupportAndWidth) {
  std::vector<Vec<3>> cube;
  for (int s = 0; s < 8; ++s) cube.emplace_back(s & 1 ? 1 : -1, s & 2 ? 1 : -1, s & 4 ? 1 : -1);
  const auto b = Body<3>::polytope_hull(cube);
  EXPECT_DOUBLE_EQ(b.support(Vec<3>(1, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(b.width(Vec<3>(0, 1, 0)), 2.0);
  EXPECT_NEAR(b.width(Vec<3>(1, 1, 1).normalized()), 2 * std::sqrt(3.0), 1e-14);
  EXPECT_FALSE(b.is_constant_width());
}

TEST(Body, ReuleauxMatchesArcSamplingOracle) {
  for (double phase : {0.0, 0.37}) {
    const auto b = Body<2>::reuleaux(3, phase);
    const auto pts = reuleaux_boundary(phase, 20000);
    for (int i = 0; i < 90; ++i) {
      const auto u = unit2(2 * kPi * i / 90 + 0.013);
      double best = -1e9;
      for (const auto& p : pts) best = std::max(best, p.dot(u));
      EXPECT_NEAR(b.support(u), best, 1e-7) << "direction " << i;
    }
    // vertex-opposing direction: support there is the arc, value 2 - r
    const auto opp = unit2(phase + kPi);
    EXPECT_NEAR(b.support(opp), 2.0 - 2.0 / std::sqrt(3.0), 1e-14);
  }
}

TEST(Body, ReuleauxHasConstantWidth) {
  const auto b = Body<2>::reuleaux(3, 0.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int i = 0; i < 1000; ++i) EXPECT_NEAR(b.width(unit2(ang(rng))), 2.0, 1e-10);
  const auto p5 = Body<2>::reuleaux(5);
  for (int i = 0; i < 200; ++i) EXPECT_NEAR(p5.width(unit2(ang(rng))), 2.0, 1e-10);
}

TEST(Body, SupportPointAttainsSupport) {
  const auto body = random_convex_body<3>(4).body;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto u = random_unit3(rng);
    EXPECT_NEAR(body.support_point(u).dot(u), body.support(u), 1e-12);
  }
  const auto r = Body<2>::reuleaux(3);
  for (int i = 0; i < 50; ++i) {
    const auto u = unit2(0.1 * i);
    EXPECT_NEAR(r.support_point(u).dot(u), r.support(u), 1e-12);
  }
}

TEST(Body, PreconvexityMarginSimpleCases) {
  EXPECT_NEAR(preconvexity_margin(Body<3>::ball()), 1.0, 1e-12);
  const auto half = Body<3>::from_harmonics(constant_g(-0.5), 0);
  EXPECT_NEAR(preconvexity_margin(half), 0.5, 1e-12);
  const auto bad = Body<3>::from_harmonics(constant_g(-2.0), 0);
  try {
    preconvexity_margin(bad);
    FAIL() << "expected NonPositiveSupport";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveSupport);
  }
  EXPECT_NEAR(preconvexity_margin(Body<2>::reuleaux(3)), 0.0, 0.0);
}

// Threshold c* for g = c xyz: library bisection against an independent oracle
// that takes finite-difference Hessians of h(y) = |y| + c xyz / |y|^2.
TEST(Body, XyzConvexityThresholdMatchesFiniteDifferenceOracle) {
  const auto grid = direction_grid<3>(642);
  auto oracle_margin = [&](double c) {
    auto h = [c](const Eigen::Vector3d& y) { return y.norm() + c * y.x() * y.y() * y.z() / y.squaredNorm(); };
    const double e = 1e-4;
    double m = 1e9;
    for (const auto& u : grid) {
      Eigen::Matrix3d hess;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const Eigen::Vector3d da = Eigen::Vector3d::Unit(a) * e, db = Eigen::Vector3d::Unit(b) * e;
          hess(a, b) = (h(u + da + db) - h(u + da - db) - h(u - da + db) + h(u - da - db)) / (4 * e * e);
        }
      Eigen::Vector3d t1 = u.unitOrthogonal(), t2 = u.cross(t1);
      Eigen::Matrix2d red;
      red << t1.dot(hess * t1), t1.dot(hess * t2), t2.dot(hess * t1), t2.dot(hess * t2);
      m = std::min(m, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(red).eigenvalues()[0]);
    }
    return m;
  };
  auto lib_margin = [&](double c) { return preconvexity_margin(xyz_body(c), grid); };
  auto threshold = [](auto margin) {
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      (margin(mid) > 0 ? lo : hi) = mid;
    }
    return lo;
  };
  const double c_lib = threshold(lib_margin), c_oracle = threshold(oracle_margin);
  EXPECT_GT(c_lib, 0.1);
  EXPECT_LT(c_lib, 10.0);
  EXPECT_NEAR(c_lib, c_oracle, 1e-4 * c_oracle);
  EXPECT_GT(lib_margin(0.5 * c_lib), 0.0);
  EXPECT_LT(lib_margin(1.5 * c_lib), 0.0);
}

TEST(Body, AntisymmetrizeExamples) {
  // x^2 -> ball
  const auto x2 = fit_sphere_harmonics([](const Eigen::Vector3d& p) { return p.x() * p.x(); }, 2);
  const auto r1 = antisymmetrize<3>(x2, 2);
  EXPECT_TRUE(r1.symmetric_input);
  EXPECT_EQ(r1.body.kind(), BodyKind::Ball);
  // xyz -> lambda xyz
  const auto xyz = xyz_body(1.0);
  const auto r2 = antisymmetrize<3>(xyz.coeffs(), 3);
  EXPECT_GT(r2.scale, 0.0);
  EXPECT_LE(r2.scale, 1.0);
  const Vec<3> p = Vec<3>(1, 2, 3).normalized();
  EXPECT_NEAR(r2.body.g(p), r2.scale * p.x() * p.y() * p.z(), 1e-13);
  EXPECT_GE(preconvexity_margin(r2.body), kDefaultTargetMargin - 1e-5);
  // x + x^2 -> lambda x; at lambda = 1 the origin would sit on the boundary
  const auto xx = fit_sphere_harmonics([](const Eigen::Vector3d& q) { return q.x() + q.x() * q.x(); }, 2);
  const auto r3 = antisymmetrize<3>(xx, 2);
  EXPECT_GT(r3.scale, 0.999);
  EXPECT_LT(r3.scale, 1.0);
  EXPECT_NEAR(r3.body.g(p), r3.scale * p.x(), 1e-13);
  EXPECT_NEAR(r3.body.g(Vec<3>(0, 1, 0)), 0.0, 1e-15);
}

TEST(Body, AntisymmetrizeIsIdempotent) {
  const auto first = random_constant_width_body<3>(9);
  const auto again = antisymmetrize<3>(first.body.coeffs(), first.body.lmax());
  EXPECT_DOUBLE_EQ(again.scale, 1.0);
  EXPECT_EQ(again.body.coeffs(), first.body.coeffs());
}

TEST(Body, OddBodiesHaveWidthTwo) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto b = random_constant_width_body<3>(seed).body;
    EXPECT_TRUE(b.is_constant_width());
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(b.width(random_unit3(rng)), 2.0, 1e-10);
  }
  const auto b2 = random_constant_width_body<2>(3).body;
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(b2.width(unit2(0.07 * i)), 2.0, 1e-10);
}

TEST(Body, SupportIsSublinear) {
  const auto b = random_convex_body<3>(12).body;
  ASSERT_GT(preconvexity_margin(b), 0.0);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> s(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Vec<3> u = random_unit3(rng) * s(rng), v = random_unit3(rng) * s(rng);
    EXPECT_LE(b.support_h(u + v), b.support_h(u) + b.support_h(v) + 1e-12);
  }
}

TEST(Body, DegreeOneTermTranslates) {
  const auto b = random_constant_width_body<3>(21).body;
  const Vec<3> t(0.3, -0.2, 0.5);
  const auto bt = b.translated(t);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto u = random_unit3(rng);
    EXPECT_NEAR(bt.support(u), b.support(u) + t.dot(u), 1e-13);
  }
  const auto c2 = random_constant_width_body<2>(4).body;
  const auto c2t = c2.translated(Vec<2>(0.1, 0.2));
  EXPECT_NEAR(c2t.support(unit2(0.4)), c2.support(unit2(0.4)) + Vec<2>(0.1, 0.2).dot(unit2(0.4)), 1e-13);
}

TEST(Body, RotationActsOnSupport) {
  const auto b = random_constant_width_body<3>(5).body;
  std::mt19937_64 rng(5);
  const Mat<3> q = random_rotation(rng).toRotationMatrix();
  const auto br = b.rotated(q);
  for (int i = 0; i < 100; ++i) {
    const auto u = random_unit3(rng);
    EXPECT_NEAR(br.support(u), b.support(q.transpose() * u), 1e-12);
  }
  const auto r = Body<2>::reuleaux(3, 0.0);
  Mat<2> q2;
  q2 << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  EXPECT_NEAR(r.rotated(q2).support(unit2(1.0)), r.support(unit2(0.7)), 1e-14);
}

TEST(Body, EllipsoidSupport) {
  Mat<3> s = Eigen::Vector3d(0.8, 1.0, 1.25).asDiagonal();
  const auto e = Body<3>::ellipsoid(s, Vec<3>(0.1, 0, 0));
  // sampled-boundary oracle
  const auto dirs = direction_grid<3>(10242);
  const Vec<3> u = Vec<3>(1, 2, -1).normalized();
  double best = -1e9;
  for (const auto& d : dirs) best = std::max(best, (s * d + Vec<3>(0.1, 0, 0)).dot(u));
  EXPECT_NEAR(e.support(u), best, 1e-3);
  EXPECT_LE(best, e.support(u) + 1e-14);
  EXPECT_GT(preconvexity_margin(e), 0.5);
}

TEST(Body, GradientMatchesFiniteDifferences) {
  const auto b = random_constant_width_body<3>(8).body;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto u = random_unit3(rng);
    Vec<3> grad;
    b.g_and_gradient(u, grad);
    EXPECT_NEAR(grad.dot(u), 0.0, 1e-13);
    const Vec<3> t = u.unitOrthogonal();
    const double e = 1e-6;
    const double fd = (b.g((u + e * t).normalized()) - b.g((u - e * t).normalized())) / (2 * e);
    EXPECT_NEAR(grad.dot(t), fd, 1e-7);
  }
}
