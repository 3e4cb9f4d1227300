// Affine circumscription: find orientation-preserving affinities alpha with
// alpha(K) inscribed in a fixed tangent polytope, by solving the square
// system Phi(alpha) = 0 of signed support excesses.
#pragma once

#include "cwc/body.hpp"
#include "cwc/errors.hpp"
#include "cwc/group.hpp"
#include "cwc/parallel.hpp"
#include "cwc/polytope.hpp"
#include "cwc/width_circumscriber.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

namespace cwc {

template <int Dim>
inline constexpr int kAffineParams = Dim * (Dim + 1);

template <int Dim>
using PhiVec = Eigen::Matrix<double, kAffineParams<Dim>, 1>;
template <int Dim>
using PhiJac = Eigen::Matrix<double, kAffineParams<Dim>, kAffineParams<Dim>>;

/// x -> linear * x + translation with det(linear) > 0.
template <int Dim>
struct AffinePlacement {
  Mat<Dim> linear = Mat<Dim>::Identity();
  Vec<Dim> translation = Vec<Dim>::Zero();

  double det() const { return linear.determinant(); }

  double condition() const {
    Eigen::JacobiSVD<Mat<Dim>> svd(linear);
    const auto s = svd.singularValues();
    return s[Dim - 1] > 0.0 ? s[0] / s[Dim - 1] : std::numeric_limits<double>::infinity();
  }

  /// Parameters: linear entries row-major, then translation.
  PhiVec<Dim> params() const {
    PhiVec<Dim> p;
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k) p[j * Dim + k] = linear(j, k);
    for (int k = 0; k < Dim; ++k) p[Dim * Dim + k] = translation[k];
    return p;
  }

  static AffinePlacement from_params(const PhiVec<Dim>& p) {
    AffinePlacement a;
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k) a.linear(j, k) = p[j * Dim + k];
    for (int k = 0; k < Dim; ++k) a.translation[k] = p[Dim * Dim + k];
    return a;
  }
};

/// Support oracle of alpha(K): h(u) = h_K(A^T u) + <t, u>.
template <int Dim>
struct AffineImage {
  const Body<Dim>& body;
  AffinePlacement<Dim> alpha;

  double support(const Vec<Dim>& u) const { return body.support_h(alpha.linear.transpose() * u) + alpha.translation.dot(u); }

  Vec<Dim> support_point(const Vec<Dim>& u) const {
    const Vec<Dim> y = alpha.linear.transpose() * u;
    return alpha.linear * body.support_point(y.normalized()) + alpha.translation;
  }
};

/// Phi_i = h_{alpha(K)}(m_i) - c_i. Negative: alpha(K) stays strictly inside
/// facet plane i; zero for all i: alpha(K) is inscribed.
template <int Dim>
PhiVec<Dim> phi(const AffinePlacement<Dim>& alpha, const Body<Dim>& body, const TangentPolytope<Dim>& polytope) {
  if (!(alpha.det() > 0.0)) throw Error(ErrorCode::SingularAffine, "affine map must have positive determinant");
  if (polytope.facet_count() != static_cast<std::size_t>(kAffineParams<Dim>))
    throw Error(ErrorCode::BadParameter, "affine fit needs a polytope with n(n+1) facets");
  const AffineImage<Dim> img{body, alpha};
  PhiVec<Dim> out;
  for (int i = 0; i < kAffineParams<Dim>; ++i) out[i] = img.support(polytope.normals[i]) - polytope.offsets[i];
  return out;
}

/// Phi and its Jacobian in the raw parameters: dPhi_i/dA_jk = m_ij x_k with
/// x the support point of K in direction A^T m_i; dPhi_i/dt = m_i.
template <int Dim>
PhiVec<Dim> phi_jacobian(const AffinePlacement<Dim>& alpha, const Body<Dim>& body,
                         const TangentPolytope<Dim>& polytope, PhiJac<Dim>& jac) {
  const PhiVec<Dim> val = phi(alpha, body, polytope);
  for (int i = 0; i < kAffineParams<Dim>; ++i) {
    const Vec<Dim>& m = polytope.normals[i];
    const Vec<Dim> x = body.support_point((alpha.linear.transpose() * m).normalized());
    for (int j = 0; j < Dim; ++j)
      for (int k = 0; k < Dim; ++k) jac(i, j * Dim + k) = m[j] * x[k];
    for (int k = 0; k < Dim; ++k) jac(i, Dim * Dim + k) = m[k];
  }
  return val;
}

struct AffineOptions {
  int random_seeds = 64;
  double max_seed_condition = 10.0;
  std::uint64_t seed = 1;
  double tol = 1e-12;               // target |Phi|
  double accept_tol = 1e-8;         // solutions above this are not reported
  int max_iterations = 200;
  double escape_condition = 1e8;    // condition number marking an escape to infinity
  double degenerate_ratio = 1e-7;   // sigma_min / sigma_max of J flagging a solution family
  double dedup_tol = 1e-6;
  double strict_convexity_guard = 1e-6;  // 3D only
  bool use_width_seed = true;
  double validation_tol = 1e-8;
  int threads = 0;
};

template <int Dim>
struct AffineSolution {
  AffinePlacement<Dim> placement;
  double residual = 0.0;
  double condition = 0.0;
  double singular_ratio = 0.0;  // of the Phi Jacobian
  bool degenerate = false;
  ValidationReport validation;
};

/// Shape of the most collapsed placement seen among non-converged seeds:
/// approach to a flat (square-like) inscribed set shows up as one singular
/// value of the linear part going to zero relative to the others.
template <int Dim>
struct CollapseDiagnostic {
  bool observed = false;
  double flatness = 1.0;  // sigma_min / sigma_max of the linear part
  Vec<Dim> collapse_direction = Vec<Dim>::Zero();  // left singular vector of sigma_min
  double residual = std::numeric_limits<double>::infinity();
};

template <int Dim>
struct AffineResult {
  std::vector<AffineSolution<Dim>> solutions;
  bool degenerate_family = false;
  std::size_t seeds = 0;
  std::size_t converged_seeds = 0;
  std::size_t escapes = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  double preconvexity_margin = 0.0;
  CollapseDiagnostic<Dim> collapse;
};

namespace detail {

template <int Dim>
struct AffineRun {
  AffinePlacement<Dim> alpha;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool escaped = false;
};

template <int Dim>
AffineRun<Dim> levenberg_marquardt(const Body<Dim>& body, const TangentPolytope<Dim>& polytope,
                                   AffinePlacement<Dim> alpha, const AffineOptions& opts) {
  AffineRun<Dim> run;
  PhiJac<Dim> jac;
  PhiVec<Dim> f = phi_jacobian(alpha, body, polytope, jac);
  double n = f.norm();
  double mu = 1e-3;
  for (int it = 0; it < opts.max_iterations && n > opts.tol; ++it) {
    const PhiJac<Dim> jtj = jac.transpose() * jac;
    const PhiVec<Dim> jtf = jac.transpose() * f;
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      PhiJac<Dim> a = jtj;
      a.diagonal() += mu * (jtj.diagonal().array() + 1e-12).matrix();
      const PhiVec<Dim> step = -a.ldlt().solve(jtf);
      if (!step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      const auto trial = AffinePlacement<Dim>::from_params(alpha.params() + step);
      if (!(trial.det() > 0.0)) {  // barrier: stay in GL+
        mu *= 10.0;
        continue;
      }
      PhiJac<Dim> tj;
      const PhiVec<Dim> tf = phi_jacobian(trial, body, polytope, tj);
      const double tn = tf.norm();
      if (tn < n) {
        alpha = trial;
        f = tf;
        jac = tj;
        n = tn;
        mu = std::max(mu / 10.0, 1e-15);
        accepted = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;
    if (alpha.condition() > opts.escape_condition) {
      run.escaped = true;
      break;
    }
  }
  run.alpha = alpha;
  run.residual = n;
  run.converged = n <= opts.tol || (n <= opts.accept_tol && !run.escaped);
  return run;
}

template <int Dim>
AffinePlacement<Dim> random_placement(std::mt19937_64& rng, double max_condition) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> n01;
  Mat<Dim> r1, r2;
  if constexpr (Dim == 3) {
    r1 = random_rotation(rng).toRotationMatrix();
    r2 = random_rotation(rng).toRotationMatrix();
  } else {
    const double a = std::numbers::pi * u(rng), b = std::numbers::pi * u(rng);
    r1 << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    r2 << std::cos(b), -std::sin(b), std::sin(b), std::cos(b);
  }
  // singular values spread over a factor < max_condition around 1
  const double half_log = 0.5 * std::log(max_condition) * 0.999;
  Vec<Dim> s;
  for (int i = 0; i < Dim; ++i) s[i] = std::exp(half_log * u(rng));
  AffinePlacement<Dim> a;
  a.linear = r1 * s.asDiagonal() * r2;
  for (int i = 0; i < Dim; ++i) a.translation[i] = 0.1 * n01(rng);
  return a;
}

}  // namespace detail

/// Left action of the polytope's rotation group: gamma . alpha = gamma o alpha.
template <int Dim>
double placement_distance(const AffinePlacement<Dim>& a, const AffinePlacement<Dim>& b,
                          const std::vector<Mat<Dim>>& group) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : group)
    best = std::min(best, (g * a.linear - b.linear).norm() + (g * a.translation - b.translation).norm());
  return best;
}

/// Representative of the left-Gamma orbit with lexicographically largest parameters.
template <int Dim>
AffinePlacement<Dim> canonical_placement(const AffinePlacement<Dim>& a, const std::vector<Mat<Dim>>& group) {
  AffinePlacement<Dim> best = a;
  bool first = true;
  for (const auto& g : group) {
    AffinePlacement<Dim> c{g * a.linear, g * a.translation};
    const auto pc = c.params(), pb = best.params();
    bool greater = false;
    for (int i = 0; i < kAffineParams<Dim>; ++i) {
      if (pc[i] > pb[i] + 1e-12) {
        greater = true;
        break;
      }
      if (pc[i] < pb[i] - 1e-12) break;
    }
    if (first || greater) best = c;
    first = false;
  }
  return best;
}

/// Solves Phi(alpha) = 0 from the identity, random well-conditioned seeds and
/// (for constant-width bodies) the width circumscription. Throws NoConvergence
/// when no seed reaches accept_tol.
template <int Dim>
AffineResult<Dim> solve_affine(const Body<Dim>& body, const TangentPolytope<Dim>& polytope,
                               const AffineOptions& opts = {}) {
  AffineResult<Dim> res;
  res.preconvexity_margin = preconvexity_margin(body);
  if constexpr (Dim == 3) {
    if (res.preconvexity_margin < opts.strict_convexity_guard)
      throw Error(ErrorCode::BadParameter,
                  "body is not uniformly strictly convex (margin " + std::to_string(res.preconvexity_margin) +
                      "); the affine existence result needs strict convexity");
  }
  const FiniteGroup group = rotation_group<Dim>(polytope);
  std::vector<Mat<Dim>> mats;
  for (const auto& e : group.elements()) mats.push_back(Mat<Dim>(e));

  std::vector<AffinePlacement<Dim>> seeds{AffinePlacement<Dim>{}};
  std::mt19937_64 rng(opts.seed);
  for (int i = 0; i < opts.random_seeds; ++i) seeds.push_back(detail::random_placement<Dim>(rng, opts.max_seed_condition));
  if (opts.use_width_seed && body.is_constant_width() && body.kind() != BodyKind::Ball &&
      polytope.facet_count() == static_cast<std::size_t>(Dim * (Dim + 1))) {
    ZeroSearchOptions zo;
    zo.nside = 4;
    zo.npsi = 16;
    zo.circle_seeds = 720;
    zo.threads = opts.threads;
    const auto zs = find_zeros<Dim>(body, polytope, zo);
    for (const auto& z : zs.zeros) {
      // K inside R D + t  <=>  R^T (K - t) inside D
      AffinePlacement<Dim> a;
      a.linear = z.frame.rotation().transpose();
      a.translation = -a.linear * z.translation;
      seeds.push_back(a);
    }
  }
  res.seeds = seeds.size();

  std::vector<detail::AffineRun<Dim>> runs(seeds.size());
  parallel_for(seeds.size(), opts.threads,
               [&](std::size_t i) { runs[i] = detail::levenberg_marquardt<Dim>(body, polytope, seeds[i], opts); });

  for (const auto& r : runs) {
    res.best_residual = std::min(res.best_residual, r.residual);
    if (r.escaped) ++res.escapes;
    if (!r.converged) {
      Eigen::JacobiSVD<Mat<Dim>> svd(r.alpha.linear, Eigen::ComputeFullU);
      const double flat = svd.singularValues()[Dim - 1] / svd.singularValues()[0];
      if (!res.collapse.observed || flat < res.collapse.flatness) {
        res.collapse.observed = true;
        res.collapse.flatness = flat;
        res.collapse.collapse_direction = svd.matrixU().col(Dim - 1);
        res.collapse.residual = r.residual;
      }
      continue;
    }
    ++res.converged_seeds;
    bool dup = false;
    for (auto& s : res.solutions) {
      const double scale = 1.0 + s.placement.linear.norm();
      if (placement_distance<Dim>(r.alpha, s.placement, mats) < opts.dedup_tol * scale) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    AffineSolution<Dim> s;
    s.placement = canonical_placement<Dim>(r.alpha, mats);
    PhiJac<Dim> jac;
    s.residual = phi_jacobian(s.placement, body, polytope, jac).norm();
    s.condition = s.placement.condition();
    Eigen::JacobiSVD<PhiJac<Dim>> jsvd(jac);
    const auto sv = jsvd.singularValues();
    s.singular_ratio = sv[0] > 0.0 ? sv[kAffineParams<Dim> - 1] / sv[0] : 0.0;
    s.degenerate = s.singular_ratio < opts.degenerate_ratio;
    s.validation = validate_circumscription<Dim>(AffineImage<Dim>{body, s.placement}, polytope, opts.validation_tol);
    res.degenerate_family = res.degenerate_family || s.degenerate;
    res.solutions.push_back(s);
  }
  if (res.solutions.empty())
    throw Error(ErrorCode::NoConvergence, "no affine circumscription found; best residual " +
                                              std::to_string(res.best_residual));
  std::sort(res.solutions.begin(), res.solutions.end(), [](const AffineSolution<Dim>& a, const AffineSolution<Dim>& b) {
    const auto pa = a.placement.params(), pb = b.placement.params();
    return std::lexicographical_compare(pa.data(), pa.data() + pa.size(), pb.data(), pb.data() + pb.size());
  });
  return res;
}

struct RankReport {
  int dim = 0;
  int rank = 0;
  int quadratic_dim = 0;           // dim of homogeneous quadratics in n variables
  double smallest_singular = 0.0;  // of the restriction matrix
  bool injective = false;
};

/// Rank of restriction of homogeneous quadratics to the root-system points.
inline RankReport quadratic_restriction_rank(int n) {
  if (n < 2 || n > 3) throw Error(ErrorCode::UnsupportedDim, "quadratic restriction rank needs n in {2, 3}");
  const auto rs = root_system(n);
  std::vector<std::pair<int, int>> monomials;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) monomials.emplace_back(a, b);
  Eigen::MatrixXd m(rs.points.size(), monomials.size());
  for (std::size_t i = 0; i < rs.points.size(); ++i)
    for (std::size_t j = 0; j < monomials.size(); ++j)
      m(i, j) = rs.points[i][monomials[j].first] * rs.points[i][monomials[j].second];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  RankReport r;
  r.dim = n;
  r.quadratic_dim = static_cast<int>(monomials.size());
  const auto sv = svd.singularValues();
  r.smallest_singular = sv[sv.size() - 1];
  for (int i = 0; i < sv.size(); ++i) r.rank += sv[i] > 1e-10 * sv[0] ? 1 : 0;
  r.injective = r.rank == r.quadratic_dim;
  return r;
}

struct IncidenceReport {
  double max_gap = 0.0;        // max over facets of the distance from the plane to the nearest point
  bool touches_all = false;
  bool contained = false;
};

/// Does the point set touch every facet plane of the polytope and lie inside it?
template <int Dim>
IncidenceReport facet_incidence(const std::vector<Vec<Dim>>& points, const TangentPolytope<Dim>& p,
                                double tol = 1e-12) {
  IncidenceReport r;
  for (std::size_t i = 0; i < p.facet_count(); ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& x : points) gap = std::min(gap, std::abs(x.dot(p.normals[i]) - p.offsets[i]));
    r.max_gap = std::max(r.max_gap, gap);
  }
  r.touches_all = r.max_gap <= tol;
  r.contained = std::all_of(points.begin(), points.end(), [&](const Vec<Dim>& x) { return p.contains(x, tol); });
  return r;
}

struct MinimalInscribedReport {
  std::vector<Vec<3>> square;
  IncidenceReport square_in_d3;
  IncidenceReport shrunk_square_in_d3;  // square scaled by 0.99
  std::vector<Vec<2>> triangle;
  IncidenceReport triangle_in_hexagon;
  bool pass = false;
};

/// The degenerate inscribed bodies: a square on four coplanar four-valent
/// vertices of D_3, and an equilateral triangle on alternate hexagon vertices.
inline MinimalInscribedReport minimal_square_check() {
  MinimalInscribedReport r;
  const double s = std::sqrt(2.0);
  r.square = {Vec<3>(s, 0, 0), Vec<3>(0, s, 0), Vec<3>(-s, 0, 0), Vec<3>(0, -s, 0)};
  const auto d3 = dual_difference_polytope<3>();
  r.square_in_d3 = facet_incidence<3>(r.square, d3);
  std::vector<Vec<3>> shrunk;
  for (const auto& v : r.square) shrunk.push_back(0.99 * v);
  r.shrunk_square_in_d3 = facet_incidence<3>(shrunk, d3);

  const auto hex = dual_difference_polytope<2>();
  auto verts = hex.vertices;
  std::sort(verts.begin(), verts.end(),
            [](const Vec<2>& a, const Vec<2>& b) { return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x()); });
  for (std::size_t i = 0; i < verts.size(); i += 2) r.triangle.push_back(verts[i]);
  r.triangle_in_hexagon = facet_incidence<2>(r.triangle, hex);
  r.pass = r.square_in_d3.touches_all && r.square_in_d3.contained && r.triangle_in_hexagon.touches_all &&
           r.triangle_in_hexagon.contained && !r.shrunk_square_in_d3.touches_all;
  return r;
}

}  // namespace cwc
