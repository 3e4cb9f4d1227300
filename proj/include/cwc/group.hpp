// Finite matrix groups with explicit multiplication tables.
#pragma once

#include "cwc/errors.hpp"
#include "cwc/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace cwc {

class FiniteGroup {
 public:
  /// Group from an explicit element list; throws if it is not closed.
  static FiniteGroup from_elements(std::vector<Eigen::MatrixXd> elements, double tol = 1e-9) {
    FiniteGroup g;
    g.tol_ = tol;
    g.elements_ = std::move(elements);
    g.build_table();
    return g;
  }

  /// Closure of a generating set.
  static FiniteGroup generate(const std::vector<Eigen::MatrixXd>& gens, double tol = 1e-9,
                              std::size_t max_order = 100000) {
    if (gens.empty()) throw Error(ErrorCode::BadParameter, "empty generating set");
    const auto n = gens.front().rows();
    std::vector<Eigen::MatrixXd> elems{Eigen::MatrixXd::Identity(n, n)};
    for (std::size_t frontier = 0; frontier < elems.size(); ++frontier) {
      for (const auto& s : gens) {
        Eigen::MatrixXd h = elems[frontier] * s;
        if (index_in(elems, h, tol) < 0) {
          elems.push_back(h);
          if (elems.size() > max_order) throw Error(ErrorCode::BadParameter, "generated group too large");
        }
      }
    }
    return from_elements(std::move(elems), tol);
  }

  std::size_t order() const { return elements_.size(); }
  const Eigen::MatrixXd& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Eigen::MatrixXd>& elements() const { return elements_; }
  int identity() const { return identity_; }
  int inverse(int i) const { return inverse_[i]; }
  int product(int i, int j) const { return table_[i][j]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int find(const Eigen::MatrixXd& m) const { return index_in(elements_, m, tol_); }

  int element_order(int i) const {
    int k = 1, x = i;
    while (x != identity_) {
      x = table_[x][i];
      ++k;
    }
    return k;
  }

  const std::vector<std::vector<int>>& conjugacy_classes() const { return classes_; }
  int class_of(int i) const { return class_of_[i]; }

  std::vector<int> center() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(order()); ++i) {
      bool central = true;
      for (int j = 0; j < static_cast<int>(order()) && central; ++j) central = table_[i][j] == table_[j][i];
      if (central) out.push_back(i);
    }
    return out;
  }

  /// Indices of the subgroup generated by the given elements.
  std::vector<int> closure(const std::vector<int>& gens) const {
    std::vector<char> in(order(), 0);
    std::vector<int> out{identity_};
    in[identity_] = 1;
    for (std::size_t f = 0; f < out.size(); ++f) {
      for (int s : gens) {
        const int h = table_[out[f]][s];
        if (!in[h]) {
          in[h] = 1;
          out.push_back(h);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  FiniteGroup subgroup(const std::vector<int>& indices) const {
    std::vector<Eigen::MatrixXd> elems;
    for (int i : closure(indices)) elems.push_back(elements_[i]);
    return from_elements(std::move(elems), tol_);
  }

  /// Small generating set, chosen greedily in element order.
  std::vector<int> generators() const {
    std::vector<int> gens;
    std::vector<int> h{identity_};
    for (int i = 0; i < static_cast<int>(order()); ++i) {
      if (std::find(h.begin(), h.end(), i) != h.end()) continue;
      gens.push_back(i);
      h = closure(gens);
    }
    return gens;
  }

  /// A Sylow 2-subgroup, grown greedily: any 2-subgroup that is not Sylow is
  /// normalized by some element outside it that keeps the order a power of 2.
  std::vector<int> sylow2_indices() const {
    std::size_t target = 1;
    while (order() % (target * 2) == 0) target *= 2;
    std::vector<int> gens;
    std::vector<int> h{identity_};
    while (h.size() < target) {
      bool grown = false;
      for (int i = 0; i < static_cast<int>(order()) && !grown; ++i) {
        if (std::find(h.begin(), h.end(), i) != h.end()) continue;
        auto trial = gens;
        trial.push_back(i);
        auto c = closure(trial);
        if ((c.size() & (c.size() - 1)) == 0) {
          gens = trial;
          h = c;
          grown = true;
        }
      }
      if (!grown) throw Error(ErrorCode::BadParameter, "Sylow 2-subgroup search failed");
    }
    return h;
  }

  FiniteGroup sylow2() const { return subgroup(sylow2_indices()); }

 private:
  static int index_in(const std::vector<Eigen::MatrixXd>& elems, const Eigen::MatrixXd& m, double tol) {
    for (std::size_t i = 0; i < elems.size(); ++i)
      if ((elems[i] - m).cwiseAbs().maxCoeff() < tol) return static_cast<int>(i);
    return -1;
  }

  void build_table() {
    const int n = static_cast<int>(elements_.size());
    if (n == 0) throw Error(ErrorCode::BadParameter, "empty group");
    const auto dim = elements_.front().rows();
    identity_ = find(Eigen::MatrixXd::Identity(dim, dim));
    if (identity_ < 0) throw Error(ErrorCode::BadParameter, "group lacks the identity");
    table_.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        table_[i][j] = find(elements_[i] * elements_[j]);
        if (table_[i][j] < 0) throw Error(ErrorCode::BadParameter, "element list is not closed under products");
      }
    inverse_.assign(n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (table_[i][j] == identity_) inverse_[i] = j;
    class_of_.assign(n, -1);
    classes_.clear();
    for (int i = 0; i < n; ++i) {
      if (class_of_[i] >= 0) continue;
      std::vector<int> cls;
      for (int g = 0; g < n; ++g) {
        const int c = table_[table_[g][i]][inverse_[g]];
        if (class_of_[c] < 0) {
          class_of_[c] = static_cast<int>(classes_.size());
          cls.push_back(c);
        }
      }
      std::sort(cls.begin(), cls.end());
      classes_.push_back(cls);
    }
  }

  double tol_ = 1e-9;
  std::vector<Eigen::MatrixXd> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = -1;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
};

/// Index of the normal matching v, or -1.
template <int Dim>
int match_normal(const std::vector<Vec<Dim>>& normals, const Vec<Dim>& v, double tol = 1e-9) {
  for (std::size_t i = 0; i < normals.size(); ++i)
    if ((normals[i] - v).norm() < tol) return static_cast<int>(i);
  return -1;
}

/// Rotations (det +1) permuting the facet normals of the polytope. Found by
/// mapping a fixed pair of non-parallel normals onto every pair with the
/// same inner product and keeping the maps that permute all normals.
template <int Dim>
FiniteGroup rotation_group(const TangentPolytope<Dim>& p, double tol = 1e-9) {
  const auto& m = p.normals;
  const Vec<Dim> a = m[0];
  std::size_t jb = 1;
  while (jb < m.size() && std::abs(std::abs(a.dot(m[jb])) - 1.0) < 1e-9) ++jb;
  if (jb == m.size()) throw Error(ErrorCode::BadParameter, "polytope normals are all parallel");
  const Vec<Dim> b = m[jb];
  const double ab = a.dot(b);

  auto frame = [](const Vec<Dim>& x, const Vec<Dim>& y) {
    Mat<Dim> f;
    f.col(0) = x;
    if constexpr (Dim == 2) {
      f.col(1) = Vec<2>(-x[1], x[0]);
    } else {
      const Vec<3> e1 = (y - y.dot(x) * x).normalized();
      f.col(1) = e1;
      f.col(2) = x.cross(e1);
    }
    return f;
  };
  const Mat<Dim> fa = frame(a, b);

  std::vector<Eigen::MatrixXd> found;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j || std::abs(m[i].dot(m[j]) - ab) > 1e-9) continue;
      const Mat<Dim> r = frame(m[i], m[j]) * fa.transpose();
      if (std::abs(r.determinant() - 1.0) > 1e-9) continue;
      bool ok = true;
      for (const auto& n : m)
        if (match_normal<Dim>(m, r * n, tol) < 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      Eigen::MatrixXd rd = r;
      bool dup = false;
      for (const auto& f : found) dup = dup || (f - rd).cwiseAbs().maxCoeff() < tol;
      if (!dup) found.push_back(rd);
    }
  }
  // identity first
  std::stable_partition(found.begin(), found.end(),
                        [&](const Eigen::MatrixXd& x) { return (x - Eigen::MatrixXd::Identity(Dim, Dim)).norm() < tol; });
  return FiniteGroup::from_elements(std::move(found), tol);
}

/// Permutation of facet indices induced by each group element.
template <int Dim>
std::vector<std::vector<int>> facet_permutations(const FiniteGroup& g, const TangentPolytope<Dim>& p) {
  std::vector<std::vector<int>> out;
  for (const auto& e : g.elements()) {
    std::vector<int> perm;
    for (const auto& n : p.normals) perm.push_back(match_normal<Dim>(p.normals, Mat<Dim>(e) * n));
    out.push_back(perm);
  }
  return out;
}

}  // namespace cwc
