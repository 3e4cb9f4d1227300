// cwc: command-line driver for body generation, circumscription searches,
// affine fits, the finite-group checks and mesh export.
//
// Exit codes: 0 success, 1 usage/config/input error, 2 validation failure,
// 3 numerical non-convergence, 4 degenerate input (circumscribe: the zero set
// is not isolated, e.g. for a ball).

#include "cwc/affine.hpp"
#include "cwc/body.hpp"
#include "cwc/group_checks.hpp"
#include "cwc/io.hpp"
#include "cwc/mesh.hpp"
#include "cwc/polytope.hpp"
#include "cwc/width_circumscriber.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <variant>

using namespace cwc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitDegenerate = 4;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string polytope;
  std::string out;
  int threads = 0;
  std::optional<double> tol;
  // per-command extras
  std::string body;
  std::string kind;
  std::optional<int> dim;
  std::optional<int> lmax;
  std::optional<int> k;
  std::optional<int> count;
  std::optional<int> random_seeds;
  std::string mesh;
  std::string what = "body";
  int nside = 8;
  int npsi = 32;
};

using AnyBody = std::variant<Body<2>, Body<3>>;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoConvergence: return kExitNoConvergence;
    case ErrorCode::ValidationFailed: return kExitValidation;
    default: return kExitInput;
  }
}

// Config file merged with command-line flags; flags win.
Json build_config(const std::string& command, const Flags& f) {
  Json cfg = f.config.empty() ? Json::object() : read_json_file(f.config);
  if (!cfg.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  cfg["command"] = command;
  if (f.seed) cfg["seed"] = *f.seed;
  if (!cfg.contains("seed")) cfg["seed"] = 1;
  if (!f.polytope.empty()) cfg["polytope"] = f.polytope;
  if (f.threads > 0) cfg["threads"] = f.threads;
  if (f.tol) cfg["tol"] = *f.tol;
  if (!f.out.empty()) cfg["out"] = f.out;
  if (!cfg.contains("out")) cfg["out"] = command + ".json";
  if (!f.mesh.empty()) cfg["mesh"] = f.mesh;
  if (f.count) cfg["count"] = *f.count;
  if (f.random_seeds) cfg["random_seeds"] = *f.random_seeds;
  if (f.nside != 8 || !cfg.contains("nside")) cfg["nside"] = f.nside;
  if (f.npsi != 32 || !cfg.contains("npsi")) cfg["npsi"] = f.npsi;
  Json body = cfg.contains("body") ? cfg["body"] : Json::object();
  if (!f.body.empty()) body = Json{{"file", f.body}};
  if (body.is_string()) body = Json{{"file", body.get<std::string>()}};
  if (!f.kind.empty()) body["kind"] = f.kind;
  if (f.dim) body["dim"] = *f.dim;
  if (f.lmax) body["L_max"] = *f.lmax;
  if (f.k) body["k"] = *f.k;
  cfg["body"] = body;
  return cfg;
}

std::uint64_t config_seed(const Json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

template <int Dim>
Body<Dim> seeded_ellipsoid(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ratio(std::log(0.5), std::log(2.0));
  Vec<Dim> axes;
  for (int i = 0; i < Dim; ++i) axes[i] = std::exp(ratio(rng));
  Mat<Dim> r;
  if constexpr (Dim == 3) {
    r = random_rotation(rng).toRotationMatrix();
  } else {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    const double a = ang(rng);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  }
  return Body<Dim>::ellipsoid(r * axes.asDiagonal() * r.transpose());
}

template <int Dim>
Body<Dim> body_of_kind(const Json& spec, std::uint64_t seed, const std::string& fallback_kind) {
  const std::string kind = spec.value("kind", fallback_kind);
  const int lmax = spec.value("L_max", 5);
  const double margin = spec.value("margin", kDefaultTargetMargin);
  if (kind == "random") {
    const auto degrees = spec.value("degrees", std::vector<int>{1, 3, 5});
    return random_constant_width_body<Dim>(seed, lmax, degrees, margin).body;
  }
  if (kind == "random_convex") return random_convex_body<Dim>(seed, spec.value("L_max", 4), spec.value("margin", 0.2)).body;
  if (kind == "ball" && !spec.contains("coeffs")) return Body<Dim>::ball(spec.value("radius", 1.0));
  if (kind == "ellipsoid" && !spec.contains("shape")) return seeded_ellipsoid<Dim>(seed);
  if (kind == "reuleaux" || (kind == "reuleaux_polygon" && !spec.contains("coeffs"))) {
    if constexpr (Dim == 2) return Body<2>::reuleaux(spec.value("k", 3), spec.value("phase", 0.0));
    throw Error(ErrorCode::UnsupportedDim, "Reuleaux polygons are planar (use dim 2)");
  }
  if (kind == "xyz") {
    if constexpr (Dim == 3) return xyz_body(spec.value("eps", 0.05));
    throw Error(ErrorCode::UnsupportedDim, "the xyz body is three-dimensional");
  }
  return body_from_json<Dim>(spec);
}

// Body described by the config: a file, a full record, or a generator spec.
AnyBody resolve_body(const Json& cfg, const std::string& fallback_kind) {
  Json spec = cfg.at("body");
  if (spec.contains("file")) {
    Json rec = read_json_file(spec.at("file").get<std::string>());
    spec = rec;
  }
  const std::string kind = spec.value("kind", fallback_kind);
  int dim = spec.value("dim", 0);
  if (dim == 0) dim = (kind == "reuleaux" || kind == "reuleaux_polygon") ? 2 : 3;
  if (dim != 2 && dim != 3) throw Error(ErrorCode::UnsupportedDim, "only dimensions 2 and 3 are supported");
  const std::uint64_t seed = spec.value("seed", config_seed(cfg));
  if (dim == 2) return body_of_kind<2>(spec, seed, fallback_kind);
  return body_of_kind<3>(spec, seed, fallback_kind);
}

template <int Dim>
TangentPolytope<Dim> resolve_polytope(const Json& cfg) {
  const std::string name = cfg.value("polytope", Dim == 2 ? std::string("hexagon") : std::string("d3"));
  if constexpr (Dim == 2) {
    if (name == "hexagon") return dual_difference_polytope<2>();
    throw Error(ErrorCode::Config, "planar bodies need --polytope hexagon (got '" + name + "')");
  } else {
    if (name == "d3") return dual_difference_polytope<3>();
    if (name.rfind("P:", 0) == 0) {
      const auto colon = name.find(':', 2);
      if (colon == std::string::npos) throw Error(ErrorCode::Config, "polytope P needs the form P:a:b");
      try {
        return polytope_P(std::stod(name.substr(2, colon - 2)), std::stod(name.substr(colon + 1)));
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::Config, "cannot parse '" + name + "' as P:a:b");
      }
    }
    throw Error(ErrorCode::Config, "spatial bodies need --polytope d3 or P:a:b (got '" + name + "')");
  }
}

Json envelope(const Json& cfg) {
  return Json{{"command", cfg.at("command")}, {"seed", cfg.at("seed")}, {"config", cfg}};
}

void emit(const Json& cfg, const Json& result) { write_json_file(cfg.at("out").get<std::string>(), result); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <int Dim>
ZeroSearchOptions zero_options(const Json& cfg) {
  ZeroSearchOptions o;
  o.nside = cfg.value("nside", o.nside);
  o.npsi = cfg.value("npsi", o.npsi);
  o.threads = cfg.value("threads", 0);
  if (cfg.contains("tol")) o.validation_tol = cfg.at("tol").get<double>();
  return o;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_gen_body(const Json& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const AnyBody body = resolve_body(cfg, "random");
  return std::visit(
      [&](const auto& b) {
        constexpr int Dim = std::decay_t<decltype(b)>::dimension;
        Json rec = body_to_json(b);
        rec["seed"] = cfg.at("seed");
        rec["config"] = cfg;
        emit(cfg, rec);
        if (cfg.contains("mesh")) export_mesh(b, cfg.at("mesh").get<std::string>());
        const double margin = preconvexity_margin(b);
        std::printf("%-10s %-18s %-6s %-12s %-10s\n", "dim", "kind", "L_max", "margin", "seconds");
        std::printf("%-10d %-18s %-6d %-12.6g %-10.3f\n", Dim, body_kind_name(b.kind()), b.lmax(), margin,
                    seconds_since(t0));
        std::printf("wrote %s\n", cfg.at("out").get<std::string>().c_str());
        return kExitOk;
      },
      body);
}

template <int Dim>
int circumscribe(const Json& cfg, const Body<Dim>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto polytope = resolve_polytope<Dim>(cfg);
  const auto zs = find_zeros<Dim>(body, polytope, zero_options<Dim>(cfg));
  Json out = envelope(cfg);
  out["polytope"] = polytope.name;
  out["result"] = zero_set_to_json(zs);
  int code = kExitOk;
  if (zs.degenerate) {
    out["flag"] = "DegenerateZeroSet";
    code = kExitDegenerate;
  } else if (zs.zeros.empty()) {
    out["error"] = Json{{"code", "NoConvergence"}, {"message", "no seed converged to a zero"}};
    code = kExitNoConvergence;
  } else {
    for (const auto& z : zs.zeros)
      if (!z.validation.pass) code = kExitValidation;
  }
  emit(cfg, out);
  if (cfg.contains("mesh") && !zs.zeros.empty()) {
    const auto& z = zs.zeros.front();
    export_mesh(merge(body_mesh(body), polytope_mesh(z.placed_polytope(polytope))), cfg.at("mesh").get<std::string>());
  }
  const auto rep = parity_report(zs);
  std::printf("%-4s %-40s %-12s %-12s %-10s %-6s\n", "#", "rotation", "residual", "rel_det", "transverse", "valid");
  for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
    const auto& z = zs.zeros[i];
    char rot[64];
    if constexpr (Dim == 2) {
      std::snprintf(rot, sizeof rot, "angle %.12f", z.frame.angle());
    } else {
      const auto q = z.frame.quaternion();
      std::snprintf(rot, sizeof rot, "(%.6f, %.6f, %.6f, %.6f)", q.w(), q.x(), q.y(), q.z());
    }
    std::printf("%-4zu %-40s %-12.3e %-12.3e %-10s %-6s\n", i, rot, z.residual, z.relative_det,
                z.transverse ? "yes" : "no", z.validation.pass ? "yes" : "no");
  }
  std::printf("zeros %zu  transverse %zu  parity %d  certified %s  degenerate %s  (%.2f s)\n", rep.count,
              rep.transverse_count, rep.parity, rep.certified ? "yes" : "no", zs.degenerate ? "yes" : "no",
              seconds_since(t0));
  return code;
}

int cmd_circumscribe(const Json& cfg) {
  const AnyBody body = resolve_body(cfg, "random");
  return std::visit([&](const auto& b) { return circumscribe(cfg, b); }, body);
}

template <int Dim>
int parity_sweep(const Json& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto polytope = resolve_polytope<Dim>(cfg);
  const int count = cfg.value("count", 50);
  const std::uint64_t seed0 = config_seed(cfg);
  const Json& spec = cfg.at("body");
  const int lmax = spec.value("L_max", 5);
  const auto degrees = spec.value("degrees", std::vector<int>{1, 3, 5});
  const double margin = spec.value("margin", kDefaultTargetMargin);
  const auto opts = zero_options<Dim>(cfg);
  Json bodies = Json::array();
  std::size_t certified = 0, odd_certified = 0, missing = 0, invalid = 0;
  std::printf("%-8s %-8s %-8s %-11s %-10s %-12s\n", "seed", "zeros", "transv", "certified", "parity", "max_resid");
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
    const auto body = random_constant_width_body<Dim>(seed, lmax, degrees, margin).body;
    const auto zs = find_zeros<Dim>(body, polytope, opts);
    const auto rep = parity_report(zs);
    double worst = 0.0;
    bool valid = true;
    for (const auto& z : zs.zeros) {
      worst = std::max(worst, z.residual);
      valid = valid && z.validation.pass;
    }
    if (zs.zeros.empty()) ++missing;
    if (!valid) ++invalid;
    if (rep.certified) {
      ++certified;
      if (rep.parity == 1) ++odd_certified;
    }
    bodies.push_back(Json{{"seed", seed},
                          {"zero_count", rep.count},
                          {"transverse_count", rep.transverse_count},
                          {"parity", rep.parity},
                          {"certified", rep.certified},
                          {"degenerate", zs.degenerate},
                          {"max_residual", worst},
                          {"all_validated", valid}});
    std::printf("%-8llu %-8zu %-8zu %-11s %-10d %-12.3e\n", static_cast<unsigned long long>(seed), rep.count,
                rep.transverse_count, rep.certified ? "yes" : "no", rep.parity, worst);
  }
  Json out = envelope(cfg);
  out["polytope"] = polytope.name;
  out["bodies"] = bodies;
  out["summary"] = Json{{"count", count},
                        {"certified", certified},
                        {"odd_among_certified", odd_certified},
                        {"all_certified_odd", odd_certified == certified},
                        {"bodies_without_zero", missing},
                        {"bodies_failing_validation", invalid}};
  emit(cfg, out);
  std::printf("certified %zu/%d, odd among certified %zu, without zero %zu, failing validation %zu (%.1f s)\n",
              certified, count, odd_certified, missing, invalid, seconds_since(t0));
  if (missing > 0) return kExitNoConvergence;
  if (invalid > 0 || odd_certified != certified) return kExitValidation;
  return kExitOk;
}

int cmd_parity_sweep(const Json& cfg) {
  const int dim = cfg.at("body").value("dim", 3);
  if (dim == 2) return parity_sweep<2>(cfg);
  if (dim == 3) return parity_sweep<3>(cfg);
  throw Error(ErrorCode::UnsupportedDim, "only dimensions 2 and 3 are supported");
}

template <int Dim>
int affine_fit(const Json& cfg, const Body<Dim>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto polytope = resolve_polytope<Dim>(cfg);
  AffineOptions opts;
  opts.seed = config_seed(cfg);
  opts.random_seeds = cfg.value("random_seeds", opts.random_seeds);
  opts.threads = cfg.value("threads", 0);
  if (cfg.contains("tol")) opts.accept_tol = cfg.at("tol").get<double>();
  const auto res = solve_affine<Dim>(body, polytope, opts);
  Json out = envelope(cfg);
  out["polytope"] = polytope.name;
  out["result"] = affine_result_to_json(res);
  int code = kExitOk;
  for (const auto& s : res.solutions)
    if (!s.validation.pass) code = kExitValidation;
  // a solution family (ball or ellipsoid) still yields valid placements
  if (res.degenerate_family) out["flag"] = "DegenerateSolutionFamily";
  emit(cfg, out);
  std::printf("%-4s %-12s %-12s %-12s %-11s %-6s\n", "#", "residual", "det", "condition", "degenerate", "valid");
  const std::size_t shown = std::min<std::size_t>(res.solutions.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& s = res.solutions[i];
    std::printf("%-4zu %-12.3e %-12.6f %-12.4f %-11s %-6s\n", i, s.residual, s.placement.det(), s.condition,
                s.degenerate ? "yes" : "no", s.validation.pass ? "yes" : "no");
  }
  if (shown < res.solutions.size())
    std::printf("... %zu more in %s\n", res.solutions.size() - shown, cfg.at("out").get<std::string>().c_str());
  std::printf("seeds %zu  converged %zu  escapes %zu  degenerate family %s  (%.2f s)\n", res.seeds, res.converged_seeds,
              res.escapes, res.degenerate_family ? "yes" : "no", seconds_since(t0));
  return code;
}

int cmd_affine_fit(const Json& cfg) {
  const AnyBody body = resolve_body(cfg, "ellipsoid");
  return std::visit([&](const auto& b) { return affine_fit(cfg, b); }, body);
}

int cmd_group_checks(const Json& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d3 = dual_difference_polytope<3>();
  const auto gamma = rotation_group<3>(d3);
  Json verdicts = Json::array();
  verdicts.push_back(character_verdict(E_representation_character(gamma, d3)));
  verdicts.push_back(lift_verdict("gamma_sign_has_no_Z4_lift", lift_to_cyclic(sign_homomorphism(gamma, d3), 4), false));
  {
    const auto s3 = symmetric_group(3);
    // listed with the claimed outcome (lifts); an odd involution rules a lift out, so this verdict fails
    verdicts.push_back(lift_verdict("S3_sign_lifts_to_Z4", lift_to_cyclic(permutation_sign(s3), 4), true));
  }
  verdicts.push_back(orbit_verdict(special_orbit_analysis(d3, 1000, config_seed(cfg))));
  for (int n = 3; n <= 6; ++n) verdicts.push_back(commutant_verdict(commutant_involutions(n), n == 3));
  Json alt = Json::array();
  for (int n = 3; n <= 6; ++n) {
    const auto r = commutant_involutions(n, CommutantExclusion::PlusMinusIdentity);
    alt.push_back(Json{{"n", n}, {"involutions_other_than_plus_minus_identity", r.witnesses.size()}});
  }
  bool all = true;
  for (const auto& v : verdicts) all = all && v.at("pass").get<bool>();
  Json out = envelope(cfg);
  out["verdicts"] = verdicts;
  out["commutant_with_identity_exclusion"] = alt;
  out["all_pass"] = all;
  emit(cfg, out);
  std::printf("%-40s %-6s\n", "check", "pass");
  for (const auto& v : verdicts)
    std::printf("%-40s %-6s\n", v.at("name").get<std::string>().c_str(), v.at("pass").get<bool>() ? "yes" : "NO");
  std::printf("(%.2f s)\n", seconds_since(t0));
  return all ? kExitOk : kExitValidation;
}

int cmd_export_mesh(const Json& cfg) {
  const std::string what = cfg.value("what", std::string("body"));
  std::string path = cfg.at("out").get<std::string>();
  if (path == "export-mesh.json") path = "mesh.off";
  Mesh m;
  if (what == "polytope") {
    const std::string name = cfg.value("polytope", std::string("d3"));
    m = name == "hexagon" ? polytope_mesh(dual_difference_polytope<2>()) : polytope_mesh(resolve_polytope<3>(cfg));
  } else if (what == "body") {
    const AnyBody body = resolve_body(cfg, "random");
    m = std::visit([](const auto& b) { return body_mesh(b); }, body);
  } else {
    throw Error(ErrorCode::Config, "--what must be body or polytope");
  }
  export_mesh(m, path);
  std::printf("%-10s %-10s %-10s\n", "vertices", "faces", "file");
  std::printf("%-10zu %-10zu %s\n", m.vertices.size(), m.faces.size(), path.c_str());
  return kExitOk;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--seed", f.seed, "random seed (recorded in the output)");
  sub->add_option("--polytope", f.polytope, "d3 | hexagon | P:a:b");
  sub->add_option("--out", f.out, "output path (JSON, or mesh for export-mesh)");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  sub->add_option("--tol", f.tol, "acceptance tolerance");
}

void add_body(CLI::App* sub, Flags& f) {
  sub->add_option("--body", f.body, "body JSON file");
  sub->add_option("--kind", f.kind, "random | random_convex | ball | reuleaux | xyz | ellipsoid");
  sub->add_option("--dim", f.dim, "2 or 3");
  sub->add_option("--lmax", f.lmax, "harmonic truncation degree");
  sub->add_option("--k", f.k, "Reuleaux polygon vertex count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circumscribing constant-width bodies"};
  app.require_subcommand(1);
  Flags f;
  auto* gen = app.add_subcommand("gen-body", "generate a body record");
  auto* circ = app.add_subcommand("circumscribe", "find circumscribing rotations of the tangent polytope");
  auto* sweep = app.add_subcommand("parity-sweep", "parity of zero counts over seeded random bodies");
  auto* aff = app.add_subcommand("affine-fit", "find affine images of a polytope circumscribing a body");
  auto* grp = app.add_subcommand("group-checks", "finite-group verdicts behind the parity argument");
  auto* mesh = app.add_subcommand("export-mesh", "write an OFF/OBJ mesh of a body or polytope");
  for (auto* s : {gen, circ, sweep, aff, grp, mesh}) add_common(s, f);
  for (auto* s : {gen, circ, sweep, aff, mesh}) add_body(s, f);
  for (auto* s : {gen, circ}) s->add_option("--mesh", f.mesh, "also export a mesh (body, plus polytope for circumscribe)");
  for (auto* s : {circ, sweep}) {
    s->add_option("--nside", f.nside, "Hopf grid base resolution");
    s->add_option("--npsi", f.npsi, "Hopf grid fibre resolution");
  }
  sweep->add_option("--count", f.count, "number of bodies");
  aff->add_option("--random-seeds", f.random_seeds, "random initial placements");
  mesh->add_option("--what", f.what, "body | polytope")->check(CLI::IsMember({"body", "polytope"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Json cfg;
  try {
    cfg = build_config(command, f);
    if (command == "export-mesh") cfg["what"] = f.what;
    if (command == "gen-body") return cmd_gen_body(cfg);
    if (command == "circumscribe") return cmd_circumscribe(cfg);
    if (command == "parity-sweep") return cmd_parity_sweep(cfg);
    if (command == "affine-fit") return cmd_affine_fit(cfg);
    if (command == "group-checks") return cmd_group_checks(cfg);
    if (command == "export-mesh") return cmd_export_mesh(cfg);
  } catch (const Error& e) {
    Json err{{"command", command},
             {"error", Json{{"code", error_name(e.code())}, {"message", e.what()}}},
             {"config", cfg}};
    std::cerr << err.dump(2) << "\n";
    if (!cfg.is_null() && cfg.contains("out") && command != "export-mesh") {
      try {
        write_json_file(cfg.at("out").get<std::string>(), err);
      } catch (const Error&) {
      }
    }
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    Json err{{"command", command}, {"error", Json{{"code", "Config"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return kExitInput;
  }
  return kExitInput;
}
