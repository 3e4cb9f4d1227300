// JSON records for bodies, polytopes, groups and solver results.
#pragma once

#include "cwc/affine.hpp"
#include "cwc/body.hpp"
#include "cwc/errors.hpp"
#include "cwc/group.hpp"
#include "cwc/group_checks.hpp"
#include "cwc/polytope.hpp"
#include "cwc/width_circumscriber.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cwc {

using Json = nlohmann::ordered_json;

template <typename Derived>
Json to_json_array(const Eigen::MatrixBase<Derived>& v) {
  Json a = Json::array();
  if (v.cols() == 1) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) a.push_back(v(i, 0));
  } else {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < v.cols(); ++j) row.push_back(v(i, j));
      a.push_back(row);
    }
  }
  return a;
}

template <int Dim>
Vec<Dim> vec_from_json(const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != Dim) throw Error(ErrorCode::Config, "expected a vector of length " + std::to_string(Dim));
  Vec<Dim> v;
  for (int i = 0; i < Dim; ++i) v[i] = j.at(i).get<double>();
  return v;
}

template <int Dim>
Mat<Dim> mat_from_json(const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != Dim) throw Error(ErrorCode::Config, "expected a square matrix");
  Mat<Dim> m;
  for (int i = 0; i < Dim; ++i) m.row(i) = vec_from_json<Dim>(j.at(i)).transpose();
  return m;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = j.size();
  const auto cols = rows ? j.at(0).size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw Error(ErrorCode::Config, "ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Body

/// Basis order note written next to harmonic coefficients.
inline const char* harmonic_basis_description(int dim) {
  return dim == 2 ? "index 0: 1/sqrt(2pi); 2k-1: cos(k t)/sqrt(pi); 2k: sin(k t)/sqrt(pi)"
                  : "index l^2+l+m, real orthonormal spherical harmonics Y_lm (m<0 sine type), no Condon-Shortley phase";
}

template <int Dim>
Json body_to_json(const Body<Dim>& b) {
  Json j;
  j["dim"] = Dim;
  j["kind"] = body_kind_name(b.kind());
  j["L_max"] = b.lmax();
  j["coeffs"] = b.coeffs();
  switch (b.kind()) {
    case BodyKind::Harmonic:
    case BodyKind::Ball: j["basis"] = harmonic_basis_description(Dim); break;
    case BodyKind::Reuleaux:
      j["k"] = b.reuleaux_k();
      j["phase"] = b.reuleaux_phase();
      break;
    case BodyKind::PolytopeHull: {
      Json v = Json::array();
      for (const auto& x : b.vertices()) v.push_back(to_json_array(x));
      j["vertices"] = v;
      j["center"] = to_json_array(b.shift());
      break;
    }
    case BodyKind::Ellipsoid:
      j["shape"] = to_json_array(b.shape());
      j["center"] = to_json_array(b.shift());
      break;
  }
  return j;
}

template <int Dim>
Body<Dim> body_from_json(const Json& j) {
  if (!j.contains("dim") || j.at("dim").get<int>() != Dim) throw Error(ErrorCode::Config, "body record has the wrong dimension");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "harmonic" || kind == "ball") {
    const int lmax = j.at("L_max").get<int>();
    Body<Dim> b = Body<Dim>::from_harmonics(j.at("coeffs").get<std::vector<double>>(), lmax);
    bool zero_higher = true;
    for (std::size_t i = 0; i < b.coeffs().size(); ++i)
      if (harmonic_degree(Dim, static_cast<int>(i)) > 1 && b.coeffs()[i] != 0.0) zero_higher = false;
    if (kind == "ball" && zero_higher) {
      // keep the kind tag; radius and centre are encoded in degrees 0 and 1
      const double c0 = Dim == 2 ? std::sqrt(2.0 * std::numbers::pi) : std::sqrt(4.0 * std::numbers::pi);
      const double radius = 1.0 + b.coeffs()[0] / c0;
      Vec<Dim> center = Vec<Dim>::Zero();
      for (int i = 0; i < Dim; ++i) center[i] = b.support(Vec<Dim>::Unit(i)) - radius;
      return Body<Dim>::ball(radius, center);
    }
    return b;
  }
  if (kind == "reuleaux_polygon") {
    if constexpr (Dim == 2) {
      return Body<2>::reuleaux(j.at("k").get<int>(), j.value("phase", 0.0));
    } else {
      throw Error(ErrorCode::UnsupportedDim, "Reuleaux polygons are planar");
    }
  }
  if (kind == "polytope_hull") {
    std::vector<Vec<Dim>> v;
    for (const auto& x : j.at("vertices")) v.push_back(vec_from_json<Dim>(x));
    auto b = Body<Dim>::polytope_hull(std::move(v));
    if (j.contains("center")) b = b.translated(vec_from_json<Dim>(j.at("center")));
    return b;
  }
  if (kind == "ellipsoid") {
    const Vec<Dim> c = j.contains("center") ? vec_from_json<Dim>(j.at("center")) : Vec<Dim>::Zero();
    return Body<Dim>::ellipsoid(mat_from_json<Dim>(j.at("shape")), c);
  }
  throw Error(ErrorCode::Config, "unknown body kind '" + kind + "'");
}

inline int json_dim(const Json& j) {
  if (!j.contains("dim")) throw Error(ErrorCode::Config, "record has no 'dim'");
  const int d = j.at("dim").get<int>();
  if (d != 2 && d != 3) throw Error(ErrorCode::UnsupportedDim, "only dimensions 2 and 3 are supported");
  return d;
}

// ---------------------------------------------------------------------------
// Polytopes and groups

template <int Dim>
Json polytope_to_json(const TangentPolytope<Dim>& p) {
  Json j;
  j["name"] = p.name;
  j["dim"] = Dim;
  Json n = Json::array(), v = Json::array();
  for (const auto& x : p.normals) n.push_back(to_json_array(x));
  for (const auto& x : p.vertices) v.push_back(to_json_array(x));
  j["normals"] = n;
  j["offsets"] = p.offsets;
  j["vertices"] = v;
  return j;
}

template <int Dim>
TangentPolytope<Dim> polytope_from_json(const Json& j) {
  TangentPolytope<Dim> p;
  p.name = j.value("name", std::string("custom"));
  for (const auto& x : j.at("normals")) p.normals.push_back(vec_from_json<Dim>(x));
  p.offsets = j.at("offsets").get<std::vector<double>>();
  if (p.offsets.size() != p.normals.size()) throw Error(ErrorCode::Config, "normals and offsets differ in length");
  if (j.contains("vertices")) {
    for (const auto& x : j.at("vertices")) p.vertices.push_back(vec_from_json<Dim>(x));
  } else {
    p.vertices = enumerate_vertices<Dim>(p.normals, p.offsets);
  }
  return p;
}

inline Json group_to_json(const FiniteGroup& g) {
  Json j = Json::array();
  for (const auto& e : g.elements()) j.push_back(to_json_array(e));
  return j;
}

inline FiniteGroup group_from_json(const Json& j) {
  std::vector<Eigen::MatrixXd> elems;
  for (const auto& m : j) elems.push_back(matrix_from_json(m));
  return FiniteGroup::from_elements(std::move(elems));
}

// ---------------------------------------------------------------------------
// Results

inline Json quaternion_json(const Eigen::Quaterniond& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

inline Json validation_to_json(const ValidationReport& v) {
  return Json{{"pass", v.pass},
              {"worst_touch_gap", v.worst_touch_gap},
              {"worst_containment_excess", v.worst_containment_excess},
              {"worst_facet", v.worst_facet}};
}

template <int Dim>
Json circumscription_to_json(const Circumscription<Dim>& c) {
  Json j;
  if constexpr (Dim == 2) {
    j["angle"] = c.frame.angle();
    j["quaternion"] = quaternion_json(Eigen::Quaterniond(Eigen::AngleAxisd(c.frame.angle(), Vec<3>::UnitZ())));
  } else {
    j["quaternion"] = quaternion_json(c.frame.quaternion());
  }
  j["rotation"] = to_json_array(c.frame.rotation());
  j["translation"] = to_json_array(c.translation);
  j["residual"] = c.residual;
  j["jacobian_det"] = c.jacobian_det;
  j["relative_det"] = c.relative_det;
  j["transverse"] = c.transverse;
  j["validation"] = validation_to_json(c.validation);
  return j;
}

template <int Dim>
Json zero_set_to_json(const ZeroSet<Dim>& zs) {
  Json zeros = Json::array();
  for (const auto& z : zs.zeros) zeros.push_back(circumscription_to_json(z));
  const auto rep = parity_report(zs);
  return Json{{"zeros", zeros},
              {"degenerate", zs.degenerate},
              {"seeds", zs.seeds},
              {"converged_seeds", zs.converged_seeds},
              {"max_seed_residual", zs.max_seed_residual},
              {"parity", Json{{"count", rep.count},
                              {"transverse_count", rep.transverse_count},
                              {"parity", rep.parity},
                              {"certified", rep.certified},
                              {"covering_radius", rep.covering_radius},
                              {"separation_bound", rep.separation_bound}}}};
}

template <int Dim>
Json affine_solution_to_json(const AffineSolution<Dim>& s) {
  return Json{{"matrix", to_json_array(s.placement.linear)},
              {"translation", to_json_array(s.placement.translation)},
              {"det", s.placement.det()},
              {"residual", s.residual},
              {"condition", s.condition},
              {"singular_ratio", s.singular_ratio},
              {"degenerate_flag", s.degenerate},
              {"validation", validation_to_json(s.validation)}};
}

template <int Dim>
Json affine_result_to_json(const AffineResult<Dim>& r) {
  Json sols = Json::array();
  for (const auto& s : r.solutions) sols.push_back(affine_solution_to_json(s));
  Json j{{"solutions", sols},
         {"degenerate_flag", r.degenerate_family},
         {"seeds", r.seeds},
         {"converged_seeds", r.converged_seeds},
         {"escapes", r.escapes},
         {"best_residual", r.best_residual},
         {"preconvexity_margin", r.preconvexity_margin}};
  if (r.collapse.observed)
    j["collapse"] = Json{{"flatness", r.collapse.flatness},
                         {"direction", to_json_array(r.collapse.collapse_direction)},
                         {"residual", r.collapse.residual}};
  return j;
}

inline Json verdict(const std::string& name, bool pass, Json data, Json witness = nullptr) {
  Json j{{"name", name}, {"pass", pass}};
  if (!witness.is_null()) j["witness"] = std::move(witness);
  j["data"] = std::move(data);
  return j;
}

inline Json character_verdict(const CharacterReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back(Json{{"class_size", r.class_size},
                        {"element_order", r.element_order},
                        {"chi_E", r.chi_e},
                        {"chi_V", r.chi_v},
                        {"chi_L", r.chi_l},
                        {"match", r.match}});
  return verdict("E_character_equals_V_times_L", rep.pass, Json{{"classes", rows}, {"integral", rep.integral}});
}

inline Json lift_verdict(const std::string& name, const LiftResult& r, bool expect_lift) {
  Json w = nullptr;
  if (r.witness) w = Json{{"images", r.witness->images}, {"modulus", r.witness->modulus}};
  return verdict(name, r.exists == expect_lift,
                 Json{{"lift_exists", r.exists}, {"expected", expect_lift}, {"generators", r.generators},
                      {"candidates_tried", r.candidates_tried}},
                 w);
}

inline Json orbit_verdict(const OrbitReport& r) {
  Json w = nullptr;
  if (r.found)
    w = Json{{"quaternion", quaternion_json(r.witness)},
             {"axis", to_json_array(r.witness_axis)},
             {"angle", r.witness_angle},
             {"axis_kind", r.axis_kind}};
  const bool pass = r.identity_orbit == 1 && r.found && r.witness_orbit == 3 && r.random_generic == r.random_frames;
  return verdict("special_orbits", pass,
                 Json{{"identity_orbit", r.identity_orbit},
                      {"witness_orbit", r.witness_orbit},
                      {"random_frames", r.random_frames},
                      {"random_with_full_orbit", r.random_generic}},
                 w);
}

inline Json commutant_verdict(const CommutantReport& r, bool expect_empty) {
  Json ws = Json::array();
  bool certified = true;
  for (const auto& w : r.witnesses) {
    certified = certified && w.certified;
    ws.push_back(Json{{"matrix", to_json_array(w.matrix)},
                      {"signs", w.signs},
                      {"square_error", w.square_error},
                      {"det_error", w.det_error},
                      {"commute_error", w.commute_error},
                      {"distance_to_excluded", w.distance_to_excluded},
                      {"certified", w.certified}});
  }
  const bool pass = expect_empty ? r.empty() : (!r.empty() && certified);
  return verdict("commutant_involutions_n" + std::to_string(r.n), pass,
                 Json{{"n", r.n},
                      {"sylow_order", r.sylow_order},
                      {"commutant_dim", r.commutant_dim},
                      {"component_dims", r.component_dims},
                      {"complete", r.complete},
                      {"exclusion", r.exclusion == CommutantExclusion::GroupCenter ? "center" : "plus_minus_identity"},
                      {"excluded_count", r.excluded_count},
                      {"expected_empty", expect_empty},
                      {"empty", r.empty()}},
                 ws.empty() ? Json(nullptr) : ws);
}

// ---------------------------------------------------------------------------
// Files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace cwc
