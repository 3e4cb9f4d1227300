// Circumscribing congruent copies of D_n (or any centrally symmetric
// polytope with n(n+1) facets tangent to the unit sphere) around a
// constant-width body, by finding the zeros of the section s on SO(n)/Gamma.
#pragma once

#include "cwc/body.hpp"
#include "cwc/group.hpp"
#include "cwc/parallel.hpp"
#include "cwc/polytope.hpp"
#include "cwc/section.hpp"
#include "cwc/sphere_grid.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace cwc {

/// The rotation group of a polytope, acting on frames from the right.
template <int Dim>
class FrameSymmetry {
 public:
  explicit FrameSymmetry(const TangentPolytope<Dim>& p) : group_(rotation_group<Dim>(p)) {
    for (const auto& e : group_.elements()) {
      mats_.push_back(Mat<Dim>(e));
      if constexpr (Dim == 3) {
        quats_.push_back(Eigen::Quaterniond(Mat<3>(e)).normalized());
      } else {
        angles_.push_back(std::atan2(e(1, 0), e(0, 0)));
      }
    }
  }

  const FiniteGroup& group() const { return group_; }
  const std::vector<Mat<Dim>>& matrices() const { return mats_; }
  std::size_t order() const { return mats_.size(); }

  /// Unit quaternions of the group and their negatives (binary lift), 3D only.
  std::vector<Eigen::Quaterniond> lifted() const {
    std::vector<Eigen::Quaterniond> out;
    for (const auto& q : quats_) {
      out.push_back(q);
      out.push_back(Eigen::Quaterniond(-q.coeffs()));
    }
    return out;
  }

  /// Rotation distance between the cosets f1 Gamma and f2 Gamma.
  double distance(const Frame<Dim>& a, const Frame<Dim>& b) const {
    double best = std::numeric_limits<double>::infinity();
    if constexpr (Dim == 3) {
      for (const auto& q : quats_) best = std::min(best, rotation_distance(a.quaternion(), b.quaternion() * q));
    } else {
      for (double t : angles_) {
        double d = std::remainder(a.angle() - b.angle() - t, 2.0 * std::numbers::pi);
        best = std::min(best, std::abs(d));
      }
    }
    return best;
  }

  /// Deterministic representative of f Gamma: the lexicographically largest
  /// (w, x, y, z) quaternion in 3D, the angle in [0, 2 pi / |Gamma|) in 2D.
  Frame<Dim> canonical(const Frame<Dim>& f) const {
    if constexpr (Dim == 3) {
      Eigen::Quaterniond best = f.quaternion();
      bool first = true;
      for (const auto& g : quats_) {
        for (double sign : {1.0, -1.0}) {
          Eigen::Quaterniond c = f.quaternion() * g;
          c.coeffs() *= sign;
          if (first || lex_greater(c, best)) {
            best = c;
            first = false;
          }
        }
      }
      return Frame<3>::from_quaternion(best);
    } else {
      const double period = 2.0 * std::numbers::pi / static_cast<double>(order());
      double t = std::fmod(f.angle(), period);
      if (t < 0) t += period;
      if (period - t < 1e-13) t = 0.0;
      return Frame<2>::from_angle(t);
    }
  }

 private:
  static bool lex_greater(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
    const double av[4] = {a.w(), a.x(), a.y(), a.z()}, bv[4] = {b.w(), b.x(), b.y(), b.z()};
    for (int i = 0; i < 4; ++i) {
      if (av[i] > bv[i] + 1e-12) return true;
      if (av[i] < bv[i] - 1e-12) return false;
    }
    return false;
  }

  FiniteGroup group_;
  std::vector<Mat<Dim>> mats_;
  std::vector<Eigen::Quaterniond> quats_;
  std::vector<double> angles_;
};

struct ValidationReport {
  bool pass = false;
  double worst_touch_gap = 0.0;          // max_i |h(m_i) - c_i|
  double worst_containment_excess = 0.0;  // max over sampled boundary points of <x, m_i> - c_i
  int worst_facet = -1;
};

/// Checks that the body touches every facet plane of the placed polytope
/// (support equals offset) and lies inside every facet halfspace at the
/// sampled boundary points. Works for anything with support() and
/// support_point().
template <int Dim, typename SupportLike>
ValidationReport validate_circumscription(const SupportLike& body, const TangentPolytope<Dim>& placed_polytope,
                                          double tol = 1e-8, int samples = 0) {
  ValidationReport rep;
  for (std::size_t i = 0; i < placed_polytope.facet_count(); ++i) {
    const double gap = std::abs(body.support(placed_polytope.normals[i]) - placed_polytope.offsets[i]);
    if (gap > rep.worst_touch_gap) {
      rep.worst_touch_gap = gap;
      rep.worst_facet = static_cast<int>(i);
    }
  }
  if (samples <= 0) samples = Dim == 2 ? 720 : 642;
  rep.worst_containment_excess = -std::numeric_limits<double>::infinity();
  for (const auto& u : direction_grid<Dim>(samples)) {
    const Vec<Dim> x = body.support_point(u);
    for (std::size_t i = 0; i < placed_polytope.facet_count(); ++i)
      rep.worst_containment_excess =
          std::max(rep.worst_containment_excess, x.dot(placed_polytope.normals[i]) - placed_polytope.offsets[i]);
  }
  rep.pass = rep.worst_touch_gap <= tol && rep.worst_containment_excess <= tol;
  return rep;
}

template <int Dim>
struct Circumscription {
  Frame<Dim> frame;                      // canonical representative of the coset
  Vec<Dim> translation = Vec<Dim>::Zero();
  double residual = 0.0;
  double jacobian_det = 0.0;
  double relative_det = 0.0;             // |det J| / scale^k
  bool transverse = false;
  ValidationReport validation;

  TangentPolytope<Dim> placed_polytope(const TangentPolytope<Dim>& p) const {
    return placed<Dim>(p, frame.rotation(), translation);
  }
};

struct ZeroSearchOptions {
  int nside = 8;             // 3D seeds: 12 nside^2 HEALPix points ...
  int npsi = 32;             // ... times npsi fibre angles (default 24576)
  int circle_seeds = 4096;   // 2D seeds
  double newton_tol = 1e-11;
  int max_iterations = 60;
  double dedup_radius = 1e-4;
  double transversality = 1e-8;
  double separation_bound = 0.3;  // assumed minimum zero separation for certification
  double validation_tol = 1e-8;
  int threads = 0;
};

template <int Dim>
struct ZeroSet {
  std::vector<Circumscription<Dim>> zeros;
  bool degenerate = false;  // residual vanishes on every seed: zero manifold
  std::size_t seeds = 0;
  std::size_t converged_seeds = 0;
  double covering_radius = 0.0;
  double separation_bound = 0.0;
  double max_seed_residual = 0.0;
};

namespace detail {

template <int Dim>
struct NewtonResult {
  bool converged = false;
  Frame<Dim> frame;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

template <int Dim>
NewtonResult<Dim> newton_refine(const SectionEvaluator<Dim>& eval, Frame<Dim> f, const ZeroSearchOptions& opts) {
  NewtonResult<Dim> out;
  FiberMat<Dim> jac;
  FiberVec<Dim> s = eval.residual_jacobian(f, jac);
  double n = s.norm();
  std::vector<double> history{n};
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (n < opts.newton_tol) break;
    // stalled near a non-zero local minimum of |s|: give up on this seed
    if (history.size() > 6 && n > 0.5 * history[history.size() - 7]) break;
    FiberVec<Dim> delta;
    Eigen::FullPivLU<FiberMat<Dim>> lu(jac);
    if (lu.isInvertible() && std::abs(jac.determinant()) > 1e-300) {
      delta = -lu.solve(s);
    } else {
      const double mu = 1e-10 * std::max(1e-300, jac.squaredNorm());
      delta = -(jac.transpose() * jac + mu * FiberMat<Dim>::Identity()).ldlt().solve(jac.transpose() * s);
    }
    if (!delta.allFinite()) break;
    const double max_step = 0.5;
    if (delta.norm() > max_step) delta *= max_step / delta.norm();
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 20; ++ls) {
      const Frame<Dim> trial = f.retract(step * delta);
      const double tn = eval.residual(trial).norm();
      if (tn < n * (1.0 - 1e-4 * step) || tn < opts.newton_tol) {
        f = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    s = eval.residual_jacobian(f, jac);
    n = s.norm();
    history.push_back(n);
    out.iterations = it + 1;
  }
  out.frame = f;
  out.residual = n;
  out.converged = n < opts.newton_tol;
  return out;
}

template <int Dim>
double body_amplitude(const Body<Dim>& body) {
  double a = 0.0;
  for (const auto& u : direction_grid<Dim>(Dim == 2 ? 720 : 642)) a = std::max(a, std::abs(body.g(u)));
  return a;
}

template <int Dim>
std::vector<Frame<Dim>> seed_frames(const ZeroSearchOptions& opts) {
  std::vector<Frame<Dim>> seeds;
  if constexpr (Dim == 3) {
    for (const auto& q : hopf_grid(opts.nside, opts.npsi)) seeds.push_back(Frame<3>::from_quaternion(q));
  } else {
    for (int i = 0; i < opts.circle_seeds; ++i)
      seeds.push_back(Frame<2>::from_angle(2.0 * std::numbers::pi * i / opts.circle_seeds));
  }
  return seeds;
}

}  // namespace detail

/// Finds all zero classes of the section on SO(n)/Gamma by Newton refinement
/// from a quasi-uniform seed grid, deduplicated modulo Gamma.
template <int Dim>
ZeroSet<Dim> find_zeros(const Body<Dim>& body, const TangentPolytope<Dim>& polytope,
                        const ZeroSearchOptions& opts = {}) {
  const FiberBasis<Dim> basis(polytope);
  const SectionEvaluator<Dim> eval(body, basis);
  const FrameSymmetry<Dim> sym(polytope);
  const auto seeds = detail::seed_frames<Dim>(opts);

  ZeroSet<Dim> out;
  out.seeds = seeds.size();
  out.separation_bound = opts.separation_bound;
  if constexpr (Dim == 3) {
    out.covering_radius = hopf_grid_covering_radius(opts.nside, opts.npsi);
  } else {
    out.covering_radius = std::numbers::pi / opts.circle_seeds;
  }

  std::vector<double> seed_res(seeds.size());
  parallel_for(seeds.size(), opts.threads, [&](std::size_t i) { seed_res[i] = eval.residual(seeds[i]).norm(); });
  out.max_seed_residual = *std::max_element(seed_res.begin(), seed_res.end());
  if (out.max_seed_residual < opts.newton_tol) {
    out.degenerate = true;
    return out;
  }

  std::vector<detail::NewtonResult<Dim>> refined(seeds.size());
  if constexpr (Dim == 3) {
    parallel_for(seeds.size(), opts.threads,
                 [&](std::size_t i) { refined[i] = detail::newton_refine<Dim>(eval, seeds[i], opts); });
  } else {
    // bracket sign changes (and near-touching minima) of the scalar residual
    const std::size_t n = seeds.size();
    std::vector<double> sv(n);
    for (std::size_t i = 0; i < n; ++i) sv[i] = eval.residual(seeds[i])[0];
    parallel_for(n, opts.threads, [&](std::size_t i) {
      const std::size_t j = (i + 1) % n;
      const double a = seeds[i].angle();
      double b = seeds[j].angle();
      if (j == 0) b += 2.0 * std::numbers::pi;
      const double fa = sv[i], fb = sv[j];
      if (fa == 0.0) {
        refined[i] = {true, seeds[i], 0.0};
        return;
      }
      if (fa * fb < 0.0) {
        // safeguarded Newton inside the bracket
        double lo = a, hi = b, flo = fa;
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          FiberMat<2> jac;
          const double fx = eval.residual_jacobian(Frame<2>::from_angle(x), jac)[0];
          if (std::abs(fx) < opts.newton_tol * 1e-3 || hi - lo < 1e-15) break;
          if ((fx < 0) == (flo < 0)) {
            lo = x;
            flo = fx;
          } else {
            hi = x;
          }
          double nx = jac(0, 0) != 0.0 ? x - fx / jac(0, 0) : 0.5 * (lo + hi);
          if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
          x = nx;
        }
        const Frame<2> f = Frame<2>::from_angle(x);
        const double r = std::abs(eval.residual(f)[0]);
        refined[i] = {r < opts.newton_tol, f, r};
        return;
      }
      // local minimum of |s| without a sign change: try plain Newton
      const std::size_t p = (i + n - 1) % n;
      if (std::abs(fa) <= std::abs(sv[p]) && std::abs(fa) <= std::abs(fb)) {
        refined[i] = detail::newton_refine<2>(eval, seeds[i], opts);
      }
    });
  }

  // deterministic merge in seed order
  std::vector<Frame<Dim>> unique;
  std::vector<double> unique_res;
  for (const auto& r : refined) {
    if (!r.converged) continue;
    ++out.converged_seeds;
    bool dup = false;
    for (std::size_t k = 0; k < unique.size() && !dup; ++k) {
      if (sym.distance(unique[k], r.frame) < opts.dedup_radius) {
        dup = true;
        if (r.residual < unique_res[k]) {
          unique[k] = r.frame;
          unique_res[k] = r.residual;
        }
      }
    }
    if (!dup) {
      unique.push_back(r.frame);
      unique_res.push_back(r.residual);
    }
  }

  const double amplitude = detail::body_amplitude(body);
  for (std::size_t k = 0; k < unique.size(); ++k) {
    Circumscription<Dim> c;
    c.frame = sym.canonical(unique[k]);
    FiberMat<Dim> jac;
    const FiberVec<Dim> s = eval.residual_jacobian(c.frame, jac);
    c.residual = s.norm();
    c.jacobian_det = jac.determinant();
    const double scale = std::max(jac.norm(), amplitude);
    c.relative_det = scale > 0.0 ? std::abs(c.jacobian_det) / std::pow(scale, kFiber<Dim>) : 0.0;
    c.transverse = c.relative_det > opts.transversality;
    const auto sec = section(body, basis, c.frame);
    c.translation = c.frame.rotation() * sec.linear_part;
    c.validation = validate_circumscription<Dim>(body, c.placed_polytope(polytope), opts.validation_tol);
    out.zeros.push_back(c);
  }
  std::sort(out.zeros.begin(), out.zeros.end(), [](const Circumscription<Dim>& a, const Circumscription<Dim>& b) {
    if constexpr (Dim == 3) {
      const auto& qa = a.frame.quaternion();
      const auto& qb = b.frame.quaternion();
      return std::make_tuple(qa.w(), qa.x(), qa.y(), qa.z()) > std::make_tuple(qb.w(), qb.x(), qb.y(), qb.z());
    } else {
      return a.frame.angle() < b.frame.angle();
    }
  });
  return out;
}

struct ParityReport {
  std::size_t count = 0;
  std::size_t transverse_count = 0;
  int parity = 0;
  bool certified = false;
  bool degenerate = false;
  double covering_radius = 0.0;
  double separation_bound = 0.0;
};

/// Zero-count parity. Certified only when every zero is transverse and the
/// seed grid covers SO(n) more finely than the assumed zero separation.
/// Heuristic: no interval arithmetic is involved.
template <int Dim>
ParityReport parity_report(const ZeroSet<Dim>& zs) {
  ParityReport r;
  r.degenerate = zs.degenerate;
  r.count = zs.zeros.size();
  for (const auto& z : zs.zeros) r.transverse_count += z.transverse ? 1 : 0;
  r.parity = static_cast<int>(r.count % 2);
  r.covering_radius = zs.covering_radius;
  r.separation_bound = zs.separation_bound;
  r.certified = !zs.degenerate && r.count > 0 && r.transverse_count == r.count &&
                zs.covering_radius < zs.separation_bound;
  return r;
}

}  // namespace cwc
