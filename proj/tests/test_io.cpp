#include "cwc/io.hpp"
#include "cwc/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace cwc;

namespace {

template <int Dim>
void expect_same_support(const Body<Dim>& a, const Body<Dim>& b, double tol) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 200; ++i) {
    Vec<Dim> u;
    for (int k = 0; k < Dim; ++k) u[k] = n01(rng);
    u.normalize();
    EXPECT_NEAR(a.support(u), b.support(u), tol);
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cwc_test_io_" + name)).string();
}

}  // namespace

TEST(Mesh, BallVerticesOnUnitSphere) {
  const auto m = body_mesh(Body<3>::ball());
  EXPECT_GE(m.vertices.size(), 2562u);
  for (const auto& v : m.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-6);
  // closed triangulated surface: V - E + F = 2 with E = 3F/2
  EXPECT_EQ(static_cast<long>(m.vertices.size()) - static_cast<long>(3 * m.faces.size() / 2) +
                static_cast<long>(m.faces.size()),
            2);
}

TEST(Mesh, RhombicDodecahedronFaces) {
  const auto d3 = dual_difference_polytope<3>();
  const auto m = polytope_mesh(d3);
  EXPECT_EQ(m.vertices.size(), 14u);
  EXPECT_EQ(m.faces.size(), 12u);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    const auto& face = m.faces[f];
    ASSERT_EQ(face.size(), 4u);
    // rhombus: equal sides, outward orientation
    const double side = (m.vertices[face[1]] - m.vertices[face[0]]).norm();
    Eigen::Vector3d area = Eigen::Vector3d::Zero();
    for (int k = 0; k < 4; ++k) {
      const auto& a = m.vertices[face[k]];
      const auto& b = m.vertices[face[(k + 1) % 4]];
      EXPECT_NEAR((b - a).norm(), side, 1e-12);
      area += a.cross(b);
    }
    EXPECT_GT(area.dot(d3.normals[f]), 0.0);
  }
}

TEST(Mesh, ReuleauxPolylineHasDiameterTwo) {
  const auto m = body_mesh(Body<2>::reuleaux(3));
  ASSERT_EQ(m.faces.size(), 1u);
  EXPECT_EQ(m.faces[0].size(), m.vertices.size());
  double diam = 0;
  for (std::size_t i = 0; i < m.vertices.size(); i += 7)
    for (const auto& w : m.vertices) diam = std::max(diam, (m.vertices[i] - w).norm());
  EXPECT_NEAR(diam, 2.0, 1e-9);
  for (const auto& v : m.vertices) EXPECT_EQ(v[2], 0.0);
}

TEST(Mesh, HexagonIsOneOrderedPolygon) {
  const auto m = polytope_mesh(dual_difference_polytope<2>());
  ASSERT_EQ(m.faces.size(), 1u);
  ASSERT_EQ(m.faces[0].size(), 6u);
  for (int k = 0; k < 6; ++k) {
    const auto& a = m.vertices[m.faces[0][k]];
    const auto& b = m.vertices[m.faces[0][(k + 1) % 6]];
    EXPECT_NEAR((b - a).norm(), 2.0 / std::sqrt(3.0), 1e-12);
    EXPECT_GT(a.cross(b)[2], 0.0);
  }
}

TEST(Mesh, OffRoundTripAndObj) {
  const auto m = polytope_mesh(dual_difference_polytope<3>());
  const auto back = parse_off(to_off(m));
  ASSERT_EQ(back.vertices.size(), m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], m.vertices[i]);
  EXPECT_EQ(back.faces, m.faces);
  const auto obj = to_obj(m);
  EXPECT_EQ(std::count(obj.begin(), obj.end(), 'v'), 14);
  const auto path = temp_path("d3.off");
  export_mesh(dual_difference_polytope<3>(), path);
  std::ifstream in(path);
  std::string head;
  in >> head;
  EXPECT_EQ(head, "OFF");
  std::filesystem::remove(path);
  EXPECT_THROW(parse_off("PLY 1 2"), Error);
}

TEST(Json, BodyRoundTrips) {
  const auto cw = random_constant_width_body<3>(1, 5).body;
  expect_same_support(body_from_json<3>(Json::parse(body_to_json(cw).dump())), cw, 0.0);
  const auto ball = Body<3>::ball(0.7, Vec<3>(0.1, 0.2, -0.3));
  const auto ball_back = body_from_json<3>(Json::parse(body_to_json(ball).dump()));
  EXPECT_EQ(ball_back.kind(), BodyKind::Ball);
  expect_same_support(ball_back, ball, 1e-15);
  const auto reuleaux = Body<2>::reuleaux(5, 0.3);
  expect_same_support(body_from_json<2>(Json::parse(body_to_json(reuleaux).dump())), reuleaux, 0.0);
  const auto ell = Body<3>::ellipsoid(Eigen::Vector3d(0.5, 1.0, 2.0).asDiagonal(), Vec<3>(0, 0, 1));
  expect_same_support(body_from_json<3>(Json::parse(body_to_json(ell).dump())), ell, 0.0);
  const auto hull = Body<2>::polytope_hull({Vec<2>(1, 0), Vec<2>(0, 1), Vec<2>(-1, -1)}).translated(Vec<2>(0.5, 0));
  expect_same_support(body_from_json<2>(Json::parse(body_to_json(hull).dump())), hull, 1e-15);
}

TEST(Json, BodyRecordsAreValidated) {
  EXPECT_THROW(body_from_json<3>(Json{{"dim", 2}, {"kind", "ball"}}), Error);
  EXPECT_THROW(body_from_json<3>(Json{{"dim", 3}, {"kind", "banana"}}), Error);
  EXPECT_THROW(body_from_json<3>(Json{{"dim", 3}, {"kind", "harmonic"}, {"L_max", 2}, {"coeffs", {0.0, 0.0}}}), Error);
  EXPECT_THROW(body_from_json<3>(Json{{"dim", 3}, {"kind", "reuleaux_polygon"}, {"k", 3}}), Error);
  EXPECT_THROW(json_dim(Json{{"dim", 4}}), Error);
}

TEST(Json, GeneratedBodyIsByteIdentical) {
  const auto a = body_to_json(random_constant_width_body<3>(1, 5).body).dump(2);
  const auto b = body_to_json(random_constant_width_body<3>(1, 5).body).dump(2);
  EXPECT_EQ(a, b);
  const auto ball = body_to_json(Body<3>::ball());
  for (double c : ball["coeffs"]) EXPECT_EQ(c, 0.0);
}

TEST(Json, PolytopeAndGroupRoundTrip) {
  const auto d3 = dual_difference_polytope<3>();
  const auto p = polytope_from_json<3>(Json::parse(polytope_to_json(d3).dump()));
  EXPECT_EQ(p.normals, d3.normals);
  EXPECT_EQ(p.offsets, d3.offsets);
  EXPECT_EQ(p.vertices.size(), 14u);
  Json no_vertices = polytope_to_json(d3);
  no_vertices.erase("vertices");
  EXPECT_EQ(polytope_from_json<3>(no_vertices).vertices.size(), 14u);
  const auto g = rotation_group<3>(d3);
  const auto back = group_from_json(Json::parse(group_to_json(g).dump()));
  EXPECT_EQ(back.order(), 24u);
  EXPECT_EQ(back.conjugacy_classes().size(), 5u);
}

TEST(Json, ResultRecordsCarryRequiredFields) {
  ZeroSearchOptions o;
  o.nside = 4;
  o.npsi = 16;
  const auto zs = find_zeros<3>(xyz_body(0.05), dual_difference_polytope<3>(), o);
  const auto j = zero_set_to_json(zs);
  ASSERT_FALSE(j["zeros"].empty());
  for (const char* key : {"quaternion", "translation", "residual", "jacobian_det", "transverse"})
    EXPECT_TRUE(j["zeros"][0].contains(key)) << key;
  EXPECT_TRUE(j["parity"].contains("certified"));
}
