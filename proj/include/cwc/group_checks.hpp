// Finite computations behind the parity argument: the character of the
// quotient representation E, the Z/4 lifting obstruction for the sign
// homomorphism, the special orbits of Gamma on SO(3)/Gamma, and orthogonal
// involutions commuting with the Sylow 2-subgroup of S_{n+1}.
#pragma once

#include "cwc/errors.hpp"
#include "cwc/group.hpp"
#include "cwc/polytope.hpp"
#include "cwc/section.hpp"
#include "cwc/sphere_grid.hpp"
#include "cwc/width_circumscriber.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cwc {

/// Values indexed by the conjugacy classes of a group.
struct ClassFunction {
  std::vector<double> values;
};

struct CharacterRow {
  int representative = 0;
  std::size_t class_size = 0;
  int element_order = 0;
  int chi_e = 0;  // trace on E
  int chi_v = 0;  // trace of the rotation
  int chi_l = 0;  // sign character
  bool match = false;
};

struct CharacterReport {
  ClassFunction chi_e, chi_v, chi_l;
  std::vector<CharacterRow> rows;
  bool all_rotations = false;
  bool integral = false;
  bool pass = false;
};

/// Signed permutation of pair coordinates induced by a rotation:
/// (g.w)(v) = w(g^{-1} v).
template <int Dim>
Eigen::MatrixXd pair_action(const Mat<Dim>& g, const TangentPolytope<Dim>& p) {
  const int pairs = static_cast<int>(p.pair_count());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pairs, pairs);
  for (int i = 0; i < pairs; ++i) {
    const int j = match_normal<Dim>(p.normals, g.transpose() * p.normals[i]);
    if (j < 0) throw Error(ErrorCode::BasisMismatch, "rotation does not permute the facet normals");
    if (j < pairs) {
      out(i, j) = 1.0;
    } else {
      out(i, j - pairs) = -1.0;
    }
  }
  return out;
}

/// Sign of the permutation a rotation of D_3 induces on the four antipodal
/// pairs of three-valent vertices (the cube diagonals), i.e. the sign
/// character under Gamma = S_4.
inline int diagonal_sign(const Mat<3>& g, const TangentPolytope<3>& d3) {
  std::vector<Vec<3>> diag;
  for (std::size_t v = 0; v < d3.vertices.size(); ++v) {
    if (d3.vertex_valence(v) != 3) continue;
    const Vec<3>& x = d3.vertices[v];
    bool seen = false;
    for (const auto& d : diag) seen = seen || (d + x).norm() < 1e-9;
    if (!seen) diag.push_back(x);
  }
  if (diag.size() != 4) throw Error(ErrorCode::BadParameter, "expected four vertex diagonals");
  std::vector<int> perm(4, -1);
  for (int i = 0; i < 4; ++i) {
    const Vec<3> y = g * diag[i];
    for (int j = 0; j < 4; ++j)
      if ((y - diag[j]).norm() < 1e-9 || (y + diag[j]).norm() < 1e-9) perm[i] = j;
    if (perm[i] < 0) throw Error(ErrorCode::BasisMismatch, "rotation does not permute the vertex diagonals");
  }
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

/// Character of Gamma on E (antisymmetric functions on A_3 modulo restricted
/// linear ones), in the same fibre basis the section uses, compared with
/// chi_V * chi_L class by class.
inline CharacterReport E_representation_character(const FiniteGroup& gamma, const TangentPolytope<3>& d3) {
  const FiberBasis<3> basis(d3);
  const Eigen::MatrixXd q = basis.Q;
  CharacterReport rep;
  rep.all_rotations = true;
  rep.integral = true;
  rep.pass = true;
  for (const auto& cls : gamma.conjugacy_classes()) {
    CharacterRow row;
    row.representative = cls.front();
    row.class_size = cls.size();
    row.element_order = gamma.element_order(row.representative);
    std::vector<double> traces;
    for (int idx : cls) {
      const Mat<3> g = gamma.element(idx);
      rep.all_rotations = rep.all_rotations && std::abs(g.determinant() - 1.0) < 1e-12;
      const Eigen::MatrixXd p = pair_action<3>(g, d3);
      const Eigen::MatrixXd e = q.transpose() * p * q;
      if ((p * q - q * e).norm() > 1e-9)
        throw Error(ErrorCode::BasisMismatch, "fibre basis is not stable under Gamma modulo linear functions");
      traces.push_back(e.trace());
    }
    const double t = traces.front();
    for (double x : traces)
      if (std::abs(x - t) > 1e-9) rep.integral = false;  // class function check
    if (std::abs(t - std::round(t)) > 1e-9) rep.integral = false;
    const Mat<3> g = gamma.element(row.representative);
    row.chi_e = static_cast<int>(std::lround(t));
    const double tv = g.trace();
    if (std::abs(tv - std::round(tv)) > 1e-9) rep.integral = false;
    row.chi_v = static_cast<int>(std::lround(tv));
    row.chi_l = diagonal_sign(g, d3);
    row.match = row.chi_e == row.chi_v * row.chi_l;
    rep.pass = rep.pass && row.match;
    rep.chi_e.values.push_back(row.chi_e);
    rep.chi_v.values.push_back(row.chi_v);
    rep.chi_l.values.push_back(row.chi_l);
    rep.rows.push_back(row);
  }
  rep.pass = rep.pass && rep.integral && rep.all_rotations;
  return rep;
}

/// Homomorphism from a finite group to Z/k, stored as the image of every element.
struct CyclicHomomorphism {
  const FiniteGroup* source = nullptr;
  int modulus = 2;
  std::vector<int> images;

  bool is_homomorphism() const {
    const int n = static_cast<int>(source->order());
    if (static_cast<int>(images.size()) != n) return false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (images[source->product(a, b)] != (images[a] + images[b]) % modulus) return false;
    return true;
  }
};

/// Sign character of Gamma = S_4 as a map to Z/2.
inline CyclicHomomorphism sign_homomorphism(const FiniteGroup& gamma, const TangentPolytope<3>& d3) {
  CyclicHomomorphism h{&gamma, 2, {}};
  for (const auto& e : gamma.elements()) h.images.push_back(diagonal_sign(Mat<3>(e), d3) == 1 ? 0 : 1);
  return h;
}

/// Permutation matrices of S_m (all m! of them).
inline FiniteGroup symmetric_group(int m) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Eigen::MatrixXd> elems;
  do {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) p(perm[i], i) = 1.0;
    elems.push_back(p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return FiniteGroup::from_elements(std::move(elems));
}

/// Sign of permutation matrices (det) as a map to Z/2.
inline CyclicHomomorphism permutation_sign(const FiniteGroup& g) {
  CyclicHomomorphism h{&g, 2, {}};
  for (const auto& e : g.elements()) h.images.push_back(e.determinant() > 0 ? 0 : 1);
  return h;
}

struct LiftResult {
  bool exists = false;
  std::optional<CyclicHomomorphism> witness;
  std::vector<int> generators;
  std::size_t candidates_tried = 0;  // generator assignments examined (all of them if none lifts)
};

/// Searches for f: G -> Z/k with f = hom (mod hom.modulus), k a multiple of
/// the modulus. Generator images range over all residues reducing correctly;
/// each assignment is extended along the Cayley graph and then checked on the
/// full multiplication table, so a negative answer is exhaustive.
inline LiftResult lift_to_cyclic(const CyclicHomomorphism& hom, int k = 4) {
  if (k % hom.modulus != 0) throw Error(ErrorCode::BadParameter, "lift target must be a multiple of the modulus");
  const FiniteGroup& g = *hom.source;
  if (!hom.is_homomorphism()) throw Error(ErrorCode::BadParameter, "input map is not a homomorphism");
  LiftResult res;
  res.generators = g.generators();
  const int ngen = static_cast<int>(res.generators.size());
  const int choices = k / hom.modulus;
  std::vector<int> digit(ngen, 0);
  const int n = static_cast<int>(g.order());
  while (true) {
    ++res.candidates_tried;
    std::vector<int> img(n, -1);
    img[g.identity()] = 0;
    std::vector<int> gen_img(ngen);
    for (int i = 0; i < ngen; ++i) gen_img[i] = (hom.images[res.generators[i]] + hom.modulus * digit[i]) % k;
    std::vector<int> frontier{g.identity()};
    bool ok = true;
    for (std::size_t f = 0; f < frontier.size() && ok; ++f) {
      for (int i = 0; i < ngen && ok; ++i) {
        const int next = g.product(frontier[f], res.generators[i]);
        const int val = (img[frontier[f]] + gen_img[i]) % k;
        if (img[next] < 0) {
          img[next] = val;
          frontier.push_back(next);
        } else if (img[next] != val) {
          ok = false;
        }
      }
    }
    if (ok) {
      CyclicHomomorphism cand{&g, k, img};
      bool reduces = true;
      for (int e = 0; e < n; ++e) reduces = reduces && img[e] % hom.modulus == hom.images[e];
      if (reduces && cand.is_homomorphism()) {
        res.exists = true;
        res.witness = cand;
        return res;
      }
    }
    int pos = 0;
    while (pos < ngen && ++digit[pos] == choices) digit[pos++] = 0;
    if (pos == ngen) break;
  }
  return res;
}

struct OrbitReport {
  int identity_orbit = 0;
  bool found = false;
  Eigen::Quaterniond witness = Eigen::Quaterniond::Identity();
  Vec<3> witness_axis = Vec<3>::Zero();
  double witness_angle = 0.0;
  int witness_orbit = 0;
  std::string axis_kind;  // "4-fold", "3-fold", "2-fold" or "sampled"
  int random_frames = 0;
  int random_generic = 0;  // random frames whose orbit has size |Gamma|
  std::vector<int> random_orbit_sizes;
};

/// Size of the orbit of [R] in SO(3)/Gamma under left multiplication by Gamma.
inline int left_orbit_size(const Frame<3>& r, const FrameSymmetry<3>& sym, double tol = 1e-8) {
  std::vector<Frame<3>> orbit;
  for (const auto& g : sym.matrices()) {
    const Frame<3> f = r.compose_left(g);
    bool seen = false;
    for (const auto& o : orbit) seen = seen || sym.distance(o, f) < tol;
    if (!seen) orbit.push_back(f);
  }
  return static_cast<int>(orbit.size());
}

/// Rotation axes of the group elements of the given order (one per +-axis).
inline std::vector<Vec<3>> symmetry_axes(const FiniteGroup& g, int order) {
  std::vector<Vec<3>> axes;
  for (int i = 0; i < static_cast<int>(g.order()); ++i) {
    if (g.element_order(i) != order) continue;
    const Eigen::AngleAxisd aa{Mat<3>(g.element(i))};
    Vec<3> ax = aa.axis();
    bool seen = false;
    for (const auto& a : axes) seen = seen || std::abs(std::abs(a.dot(ax)) - 1.0) < 1e-9;
    if (!seen) axes.push_back(ax);
  }
  return axes;
}

/// Fixed point at the identity, a 45-degree rotation with a size-3 orbit
/// (searched on 4-fold, then 3-fold, then 2-fold axes, then random axes),
/// and orbit sizes of random frames.
inline OrbitReport special_orbit_analysis(const TangentPolytope<3>& polytope, int random_frames = 1000,
                                          std::uint64_t seed = 7, int sampled_axes = 2000) {
  const FrameSymmetry<3> sym(polytope);
  const FiniteGroup& g = sym.group();
  OrbitReport rep;
  rep.identity_orbit = left_orbit_size(Frame<3>(), sym);
  const double angle = std::numbers::pi / 4.0;
  auto try_axis = [&](const Vec<3>& axis, const char* kind) {
    const Frame<3> f = Frame<3>::from_quaternion(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
    const int size = left_orbit_size(f, sym);
    if (size == 3 && !rep.found) {
      rep.found = true;
      rep.witness = f.quaternion();
      rep.witness_axis = axis.normalized();
      rep.witness_angle = angle;
      rep.witness_orbit = size;
      rep.axis_kind = kind;
    }
  };
  for (auto [order, kind] : {std::pair{4, "4-fold"}, {3, "3-fold"}, {2, "2-fold"}}) {
    if (rep.found) break;
    for (const auto& ax : symmetry_axes(g, order)) try_axis(ax, kind);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  for (int i = 0; i < sampled_axes && !rep.found; ++i) try_axis(Vec<3>(n01(rng), n01(rng), n01(rng)), "sampled");
  rep.random_frames = random_frames;
  for (int i = 0; i < random_frames; ++i) {
    const int size = left_orbit_size(Frame<3>::from_quaternion(random_rotation(rng)), sym);
    rep.random_orbit_sizes.push_back(size);
    if (size == static_cast<int>(g.order())) ++rep.random_generic;
  }
  return rep;
}

/// As special_orbit_analysis but throws OrbitNotFound when no witness exists.
inline OrbitReport require_special_orbit(const TangentPolytope<3>& polytope) {
  auto rep = special_orbit_analysis(polytope);
  if (!rep.found) throw Error(ErrorCode::OrbitNotFound, "no 45-degree rotation with a size-3 orbit");
  return rep;
}

// ---------------------------------------------------------------------------
// Commutant involutions

/// Which commuting involutions count as trivial.
enum class CommutantExclusion {
  GroupCenter,  // +-rho(z) for z central in the Sylow subgroup (includes +-I)
  PlusMinusIdentity,
};

struct CommutantWitness {
  Eigen::MatrixXd matrix;
  std::vector<int> signs;  // per isotypic component
  double square_error = 0.0;   // |X^2 - I|_max
  double det_error = 0.0;      // |det X - 1|
  double commute_error = 0.0;  // max over group elements of |X g - g X|_max
  double distance_to_excluded = 0.0;
  bool certified = false;
};

struct CommutantReport {
  int n = 0;
  std::size_t sylow_order = 0;
  std::size_t expected_order = 0;  // 2-part of (n+1)!
  int commutant_dim = 0;
  std::vector<int> component_dims;
  bool complete = false;  // commutant is spanned by the component projections
  CommutantExclusion exclusion = CommutantExclusion::GroupCenter;
  std::size_t excluded_count = 0;
  std::vector<CommutantWitness> witnesses;
  bool empty() const { return witnesses.empty(); }
};

/// Orthonormal basis of the sum-zero hyperplane of R^{m} (Helmert columns).
inline Eigen::MatrixXd sum_zero_basis(int m) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m - 1);
  for (int k = 1; k < m; ++k) {
    for (int i = 0; i < k; ++i) b(i, k - 1) = 1.0;
    b(k, k - 1) = -k;
    b.col(k - 1) /= std::sqrt(k * (k + 1.0));
  }
  return b;
}

/// Generators of the Sylow 2-subgroup of S_m as permutations: m is split into
/// binary blocks 2^k, and each block carries the iterated wreath product
/// generated by i <-> i + 2^j on its first 2^{j+1} letters.
inline std::vector<std::vector<int>> sylow2_symmetric_generators(int m) {
  std::vector<std::vector<int>> gens;
  int offset = 0;
  for (int bit = 30; bit >= 0; --bit) {
    const int size = 1 << bit;
    if (!(m & size)) continue;
    for (int j = 0; (1 << j) < size; ++j) {
      std::vector<int> p(m);
      std::iota(p.begin(), p.end(), 0);
      for (int i = 0; i < (1 << j); ++i) std::swap(p[offset + i], p[offset + i + (1 << j)]);
      gens.push_back(p);
    }
    offset += size;
  }
  return gens;
}

namespace detail {

inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > tol ? 1 : 0;
  return svd.matrixV().rightCols(a.cols() - rank);
}

// vec-basis of {X : X A = A X for all A in mats}
inline std::vector<Eigen::MatrixXd> commutant_basis(const std::vector<Eigen::MatrixXd>& mats, int n) {
  Eigen::MatrixXd sys(mats.size() * n * n, n * n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t g = 0; g < mats.size(); ++g) {
    const Eigen::MatrixXd& a = mats[g];
    // vec(XA - AX) = (A^T kron I - I kron A) vec X  (column-major vec)
    Eigen::MatrixXd blk(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) blk.block(i * n, j * n, n, n) = a(j, i) * id - (i == j ? a : Eigen::MatrixXd::Zero(n, n));
    sys.middleRows(g * n * n, n * n) = blk;
  }
  const Eigen::MatrixXd ns = null_space(sys);
  std::vector<Eigen::MatrixXd> out;
  for (int c = 0; c < ns.cols(); ++c) out.push_back(Eigen::Map<const Eigen::MatrixXd>(ns.col(c).data(), n, n));
  return out;
}

}  // namespace detail

/// Orientation-preserving orthogonal involutions commuting with the Sylow
/// 2-subgroup of S_{n+1} acting on the sum-zero hyperplane R^n, other than the
/// excluded trivial ones. Candidates are the +-1 assignments on isotypic
/// components; when the commutant is larger than the span of the component
/// projections (`complete` false) further involutions exist and only the
/// component ones are listed.
inline CommutantReport commutant_involutions(int n, CommutantExclusion exclusion = CommutantExclusion::GroupCenter,
                                             std::uint64_t seed = 11) {
  if (n < 3 || n > 6) throw Error(ErrorCode::UnsupportedDim, "commutant involutions need 3 <= n <= 6");
  CommutantReport rep;
  rep.n = n;
  rep.exclusion = exclusion;
  const int m = n + 1;
  const Eigen::MatrixXd b = sum_zero_basis(m);
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& p : sylow2_symmetric_generators(m)) {
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) perm(p[i], i) = 1.0;
    gens.push_back(b.transpose() * perm * b);
  }
  const FiniteGroup sylow = FiniteGroup::generate(gens, 1e-9);
  rep.sylow_order = sylow.order();
  rep.expected_order = 1;
  for (int k = 2; k <= m; ++k)
    for (int x = k; x % 2 == 0; x /= 2) rep.expected_order *= 2;
  if (rep.sylow_order != rep.expected_order)
    throw Error(ErrorCode::BadParameter, "Sylow construction has the wrong order");

  const auto basis = detail::commutant_basis(gens, n);
  rep.commutant_dim = static_cast<int>(basis.size());

  // centre of the commutant algebra, then a random symmetric central element
  Eigen::MatrixXd csys(basis.size() * n * n, basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Eigen::MatrixXd c = basis[i] * basis[j] - basis[j] * basis[i];
      csys.block(j * n * n, i, n * n, 1) = Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
    }
  const Eigen::MatrixXd zc = detail::null_space(csys);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < zc.cols(); ++c) {
    const double r = n01(rng);
    for (std::size_t i = 0; i < basis.size(); ++i) z += r * zc(i, c) * basis[i];
  }
  z = 0.5 * (z + z.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z);
  std::vector<Eigen::MatrixXd> projections;
  const auto ev = es.eigenvalues();
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && std::abs(ev[j + 1] - ev[i]) < 1e-8 * (1.0 + std::abs(ev[i]))) ++j;
    const Eigen::MatrixXd v = es.eigenvectors().middleCols(i, j - i + 1);
    projections.push_back(v * v.transpose());
    rep.component_dims.push_back(j - i + 1);
    i = j + 1;
  }
  rep.complete = rep.commutant_dim == static_cast<int>(projections.size());

  std::vector<Eigen::MatrixXd> excluded;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  if (exclusion == CommutantExclusion::PlusMinusIdentity) {
    excluded = {id, -id};
  } else {
    for (int c : sylow.center()) {
      excluded.push_back(sylow.element(c));
      excluded.push_back(-sylow.element(c));
    }
  }
  rep.excluded_count = excluded.size();

  const int k = static_cast<int>(projections.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> signs;
    for (int c = 0; c < k; ++c) {
      const int s = (mask >> c) & 1 ? -1 : 1;
      signs.push_back(s);
      x += s * projections[c];
    }
    CommutantWitness w;
    w.matrix = x;
    w.signs = signs;
    w.det_error = std::abs(x.determinant() - 1.0);
    if (w.det_error > 1e-6) continue;  // orientation-reversing
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& e : excluded) dist = std::min(dist, (x - e).cwiseAbs().maxCoeff());
    w.distance_to_excluded = dist;
    if (dist < 1e-6) continue;
    w.square_error = (x * x - id).cwiseAbs().maxCoeff();
    for (const auto& g : sylow.elements()) w.commute_error = std::max(w.commute_error, (x * g - g * x).cwiseAbs().maxCoeff());
    w.certified = w.square_error <= 1e-12 && w.det_error <= 1e-12 && w.commute_error <= 1e-12;
    rep.witnesses.push_back(w);
  }
  return rep;
}

}  // namespace cwc
