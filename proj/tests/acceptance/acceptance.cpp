// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Usage: acceptance [--criterion N]...   (no arguments: all criteria)

#include "cwc/affine.hpp"
#include "cwc/body.hpp"
#include "cwc/group_checks.hpp"
#include "cwc/polytope.hpp"
#include "cwc/section.hpp"
#include "cwc/width_circumscriber.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace cwc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Parity experiment on seeded random constant-width bodies.
struct SweepStats {
  int bodies = 0;
  int with_zero = 0;  // at least one zero below the residual bound
  int certified = 0;
  int certified_odd = 0;
  int validated = 0;
  double min_margin = 1e9;
  std::vector<std::string> problems;
};

SweepStats parity_sweep(const TangentPolytope<3>& polytope, int count, std::uint64_t first_seed, double residual_bound) {
  SweepStats s;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = first_seed + i;
    const auto body = random_constant_width_body<3>(seed, 5, {1, 3, 5}, 0.05).body;
    s.min_margin = std::min(s.min_margin, preconvexity_margin(body));
    const auto zs = find_zeros<3>(body, polytope);
    const auto rep = parity_report(zs);
    ++s.bodies;
    bool good = false, valid = !zs.zeros.empty();
    for (const auto& z : zs.zeros) {
      good = good || z.residual < residual_bound;
      valid = valid && z.validation.pass;
    }
    if (good) ++s.with_zero;
    if (valid) ++s.validated;
    if (rep.certified) {
      ++s.certified;
      if (rep.parity == 1) ++s.certified_odd;
    }
    if (!good) s.problems.push_back(fmt("seed %llu: no zero below %.0e", (unsigned long long)seed, residual_bound));
    if (rep.certified && rep.parity != 1)
      s.problems.push_back(fmt("seed %llu: certified even count %zu", (unsigned long long)seed, rep.count));
  }
  return s;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = parity_sweep(dual_difference_polytope<3>(), 50, 1, 1e-9);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = s.with_zero == s.bodies && s.certified_odd == s.certified && s.min_margin >= 0.05 - 1e-9;
  o.detail = fmt("%d/%d bodies with a zero (resid<1e-9), %d certified, %d odd among certified, %d fully validated, "
                 "min margin %.4f, %.1f s (target <= 600 s)",
                 s.with_zero, s.bodies, s.certified, s.certified_odd, s.validated, s.min_margin, secs);
  for (const auto& p : s.problems) o.detail += "; " + p;
  return o;
}

// Alternating component of g on a hexagon sextuplet, straight from support values.
double alternating(const Body<2>& b, double t) {
  double s = 0;
  for (int k = 0; k < 3; ++k) {
    const double a = t + k * kPi / 3;
    s += (k % 2 == 0 ? 1 : -1) * (b.support(Vec<2>(std::cos(a), std::sin(a))) - 1.0);
  }
  return s;
}

// Sign changes on [0, pi/3) at step 1e-5, each refined by 60 bisections.
std::vector<double> dense_scan_zeros(const Body<2>& b) {
  std::vector<double> out;
  const double step = 1e-5;
  const int n = static_cast<int>(std::ceil(kPi / 3 / step));
  double prev = alternating(b, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = std::min(i * step, kPi / 3);
    const double cur = alternating(b, t);
    if (prev == 0.0) out.push_back(t - step);
    if (prev * cur < 0) {
      double lo = t - step, hi = t, flo = prev;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi), fm = alternating(b, mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return out;
}

Outcome criterion2() {
  const auto body = Body<2>::reuleaux(3);
  const auto t0 = std::chrono::steady_clock::now();
  const auto zs = find_zeros<2>(body, dual_difference_polytope<2>());
  const double secs = seconds_since(t0);
  const auto oracle = dense_scan_zeros(body);
  Outcome o;
  double err = 1e9;
  if (zs.zeros.size() == 1 && oracle.size() == 1) err = std::abs(zs.zeros[0].frame.angle() - oracle[0]);
  o.pass = zs.zeros.size() == 1 && oracle.size() == 1 && err < 1e-8 && secs < 1.0;
  o.detail = fmt("%zu class(es) found, oracle %zu, phase error %.2e (tol 1e-8), phase %.12f, %.3f s (limit 1 s)",
                 zs.zeros.size(), oracle.size(), err, zs.zeros.empty() ? 0.0 : zs.zeros[0].frame.angle(), secs);
  return o;
}

Outcome criterion3() {
  const double eps = 0.05;
  const auto d3 = dual_difference_polytope<3>();
  const FiberBasis<3> basis(d3);
  const auto body = xyz_body(eps);
  const double at_identity = section(body, basis, Frame<3>()).norm();
  ZeroSearchOptions opts;
  opts.nside = 4;
  opts.npsi = 16;
  const auto zs = find_zeros<3>(body, d3, opts);
  const FrameSymmetry<3> sym(d3);
  const Circumscription<3>* fixed = nullptr;
  for (const auto& z : zs.zeros)
    if (sym.distance(z.frame, Frame<3>()) < 1e-8) fixed = &z;
  const auto orbit = special_orbit_analysis(d3, 0);
  const double at_witness = orbit.found ? section(body, basis, Frame<3>::from_quaternion(orbit.witness)).norm() : 0.0;
  Outcome o;
  o.pass = at_identity < 1e-12 && fixed && fixed->transverse && fixed->relative_det > opts.transversality &&
           orbit.found && at_witness > 1e-3 * eps;
  o.detail = fmt("|s(I)| = %.2e (tol 1e-12), relative det at I = %.4e (threshold %.0e), |s| at order-3 witness = %.4e "
                 "(must exceed %.1e)",
                 at_identity, fixed ? fixed->relative_det : 0.0, opts.transversality, at_witness, 1e-3 * eps);
  return o;
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d3 = dual_difference_polytope<3>();
  const auto gamma = rotation_group<3>(d3);
  const auto chars = E_representation_character(gamma, d3);
  const auto gamma_lift = lift_to_cyclic(sign_homomorphism(gamma, d3), 4);
  const bool exhaustive = gamma_lift.candidates_tried == (std::size_t(1) << gamma_lift.generators.size());
  const auto s3 = symmetric_group(3);
  const auto s3_lift = lift_to_cyclic(permutation_sign(s3), 4);
  const double secs = seconds_since(t0);
  std::string table;
  for (const auto& r : chars.rows) table += fmt(" [ord %d x%zu: %d=%d*%d]", r.element_order, r.class_size, r.chi_e, r.chi_v, r.chi_l);
  Outcome o;
  o.pass = chars.pass && chars.rows.size() == 5 && !gamma_lift.exists && exhaustive && s3_lift.exists && secs < 1.0;
  o.detail = fmt("chi_E = chi_V chi_L on %zu classes: %s;%s | Gamma sign Z/4 lift: %s (%zu/%zu assignments tried) | "
                 "S_3 sign Z/4 lift: %s | %.3f s",
                 chars.rows.size(), chars.pass ? "yes" : "no", table.c_str(), gamma_lift.exists ? "exists" : "none",
                 gamma_lift.candidates_tried, std::size_t(1) << gamma_lift.generators.size(),
                 s3_lift.exists ? "exists" : "none (an odd involution s forces 2f(s) = 0 with f(s) odd)", secs);
  return o;
}

Outcome criterion5() {
  const auto rep = special_orbit_analysis(dual_difference_polytope<3>(), 1000, 2024);
  Outcome o;
  o.pass = rep.identity_orbit == 1 && rep.found && rep.witness_orbit == 3 && rep.random_generic == 1000;
  o.detail = fmt("identity orbit %d, 45-degree witness on %s axis orbit %d, random frames with orbit 24: %d/1000",
                 rep.identity_orbit, rep.found ? rep.axis_kind.c_str() : "(none)", rep.witness_orbit,
                 rep.random_generic);
  return o;
}

Outcome criterion6() {
  const auto d3 = dual_difference_polytope<3>();
  std::vector<std::pair<std::string, Body<3>>> bodies;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> half_log(0.5 * std::log(0.5), 0.5 * std::log(2.0));
  for (int i = 0; i < 10; ++i) {
    // axes in [2^-1/2, 2^1/2], so every axis ratio lies in [0.5, 2]
    const Vec<3> axes(std::exp(half_log(rng)), std::exp(half_log(rng)), std::exp(half_log(rng)));
    const Mat<3> r = random_rotation(rng).toRotationMatrix();
    bodies.emplace_back(fmt("ellipsoid %d", i), Body<3>::ellipsoid(r * axes.asDiagonal() * r.transpose()));
  }
  for (int i = 0; i < 10; ++i) bodies.emplace_back(fmt("harmonic %d", i), random_convex_body<3>(600 + i).body);
  int ok = 0;
  double worst = 0;
  std::string problems;
  for (const auto& [name, body] : bodies) {
    try {
      const auto res = solve_affine<3>(body, d3);
      bool good = false;
      for (const auto& s : res.solutions) good = good || (s.residual < 1e-8 && s.validation.pass && s.placement.det() > 0);
      worst = std::max(worst, res.best_residual);
      if (good) {
        ++ok;
      } else {
        problems += "; " + name + " has no validated solution";
      }
    } catch (const Error& e) {
      problems += "; " + name + ": " + e.what();
    }
  }
  const auto ball = solve_affine<3>(Body<3>::ball(), d3);
  double orth = 0;
  for (const auto& s : ball.solutions)
    orth = std::max(orth, (s.placement.linear.transpose() * s.placement.linear - Mat<3>::Identity()).cwiseAbs().maxCoeff());
  Outcome o;
  o.pass = ok == 20 && ball.degenerate_family && !ball.solutions.empty() && orth <= 1e-8;
  o.detail = fmt("%d/20 bodies with a validated placement (|Phi| < 1e-8), worst best-residual %.2e; ball: degenerate "
                 "flag %s, %zu solutions, max |A^T A - I| = %.2e (tol 1e-8)",
                 ok, worst, ball.degenerate_family ? "raised" : "not raised", ball.solutions.size(), orth) +
             problems;
  return o;
}

Outcome criterion7() {
  const auto sq = minimal_square_check();
  const auto r2 = quadratic_restriction_rank(2);
  const auto r3 = quadratic_restriction_rank(3);
  Outcome o;
  o.pass = sq.square_in_d3.touches_all && sq.square_in_d3.max_gap <= 1e-12 && sq.triangle_in_hexagon.touches_all &&
           sq.triangle_in_hexagon.max_gap <= 1e-12 && r2.rank == 3 && r3.rank == 6;
  o.detail = fmt("square vs 12 D_3 planes: max gap %.2e, triangle vs 6 hexagon lines: max gap %.2e (tol 1e-12); "
                 "rank n=2: %d, n=3: %d",
                 sq.square_in_d3.max_gap, sq.triangle_in_hexagon.max_gap, r2.rank, r3.rank);
  return o;
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r3 = commutant_involutions(3);
  const auto r4 = commutant_involutions(4);
  const auto r5 = commutant_involutions(5);
  const double secs = seconds_since(t0);
  auto certified = [](const CommutantReport& r) {
    if (r.empty()) return false;
    for (const auto& w : r.witnesses)
      if (!w.certified) return false;
    return true;
  };
  auto dims = [](const CommutantReport& r) {
    std::string s;
    for (int d : r.component_dims) s += (s.empty() ? "" : "+") + std::to_string(d);
    return s;
  };
  Outcome o;
  o.pass = r3.empty() && certified(r4) && certified(r5) && secs < 10.0;
  o.detail = fmt("n=3: %zu involutions (expect none); n=4: %zu (components %s, commutant dim %d); n=5: %zu certified "
                 "%s (components %s); certificate tol 1e-12; %.3f s (limit 10 s)",
                 r3.witnesses.size(), r4.witnesses.size(), dims(r4).c_str(), r4.commutant_dim, r5.witnesses.size(),
                 certified(r5) ? "yes" : "no", dims(r5).c_str(), secs);
  return o;
}

Outcome criterion9() {
  // Gamma_2: rotations of the square prism about z, shared by D_3 rotated 45 degrees about z.
  Eigen::MatrixXd rz(3, 3), rx(3, 3);
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  rx << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  const auto gamma2 = FiniteGroup::generate({rz, rx});
  const Mat<3> turn = Eigen::AngleAxisd(kPi / 4, Vec<3>::UnitZ()).toRotationMatrix();
  const auto d3 = placed<3>(dual_difference_polytope<3>(), turn, Vec<3>::Zero());
  bool geometry = gamma2.order() == 8;
  std::string detail;
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}}) {
    const auto p = polytope_P(a, b);
    double tangency = 0;
    bool facets = p.normals.size() == 12;
    for (std::size_t i = 0; i < p.normals.size(); ++i) {
      tangency = std::max({tangency, std::abs(p.normals[i].norm() - 1.0), std::abs(p.offsets[i] - 1.0)});
      facets = facets && p.facet_vertices(i).size() >= 3;
    }
    bool symmetric = true, same_action = true;
    for (const auto& g : gamma2.elements()) {
      try {
        const Eigen::MatrixXd pp = pair_action<3>(Mat<3>(g), p);
        const Eigen::MatrixXd pd = pair_action<3>(Mat<3>(g), d3);
        same_action = same_action && std::abs(pp.trace() - pd.trace()) < 1e-12;
      } catch (const Error&) {
        symmetric = false;
      }
    }
    geometry = geometry && facets && tangency < 1e-12 && symmetric && same_action;
    detail += fmt("P(%g,%g): 12 facets %s, tangency err %.1e, Gamma_2-symmetric %s, same facet action %s; ", a, b,
                  facets ? "yes" : "no", tangency, symmetric ? "yes" : "no", same_action ? "yes" : "no");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = parity_sweep(polytope_P(1.0, 2.0), 10, 1, 1e-9);
  Outcome o;
  o.pass = geometry && s.with_zero == s.bodies && s.certified > 0 && s.certified_odd == s.certified;
  o.detail = detail + fmt("P(1,2) sweep: %d/%d with a zero, %d certified, %d odd among certified, %.1f s", s.with_zero,
                          s.bodies, s.certified, s.certified_odd, seconds_since(t0));
  for (const auto& p : s.problems) o.detail += "; " + p;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) selected.push_back(c);
  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", c);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
