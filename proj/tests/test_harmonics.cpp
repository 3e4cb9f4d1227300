#include "cwc/harmonics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cwc;

namespace {

constexpr double kPi = std::numbers::pi;

double ylm(int l, int m, const Eigen::Vector3d& p) { return solid_harmonics()[sh_index(l, m)].value(p); }

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
}

}  // namespace

TEST(Harmonics, IndexingAndCounts) {
  EXPECT_EQ(harmonic_count(3, 9), 100);
  EXPECT_EQ(harmonic_count(2, 9), 19);
  EXPECT_EQ(sh_index(0, 0), 0);
  EXPECT_EQ(sh_index(1, -1), 1);
  EXPECT_EQ(sh_index(3, 3), 15);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) EXPECT_EQ(harmonic_degree(3, sh_index(l, m)), l);
  EXPECT_EQ(harmonic_degree(2, 0), 0);
  EXPECT_EQ(harmonic_degree(2, 1), 1);
  EXPECT_EQ(harmonic_degree(2, 2), 1);
  EXPECT_EQ(harmonic_degree(2, 5), 3);
}

// textbook closed forms for the real harmonics (no Condon-Shortley phase)
TEST(Harmonics, LowDegreeClosedForms) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d p = random_unit(rng);
    const double x = p.x(), y = p.y(), z = p.z();
    EXPECT_NEAR(ylm(0, 0, p), 0.5 / std::sqrt(kPi), 1e-14);
    EXPECT_NEAR(ylm(1, 1, p), std::sqrt(3 / (4 * kPi)) * x, 1e-14);
    EXPECT_NEAR(ylm(1, -1, p), std::sqrt(3 / (4 * kPi)) * y, 1e-14);
    EXPECT_NEAR(ylm(1, 0, p), std::sqrt(3 / (4 * kPi)) * z, 1e-14);
    EXPECT_NEAR(ylm(2, -2, p), 0.5 * std::sqrt(15 / kPi) * x * y, 1e-14);
    EXPECT_NEAR(ylm(2, 2, p), 0.25 * std::sqrt(15 / kPi) * (x * x - y * y), 1e-14);
    EXPECT_NEAR(ylm(2, 0, p), 0.25 * std::sqrt(5 / kPi) * (3 * z * z - 1), 1e-14);
    EXPECT_NEAR(ylm(3, -2, p), 0.5 * std::sqrt(105 / kPi) * x * y * z, 1e-13);
    EXPECT_NEAR(ylm(3, 0, p), 0.25 * std::sqrt(7 / kPi) * (5 * z * z * z - 3 * z), 1e-13);
    EXPECT_NEAR(ylm(3, 3, p), 0.25 * std::sqrt(35 / (2 * kPi)) * x * (x * x - 3 * y * y), 1e-13);
  }
}

// Gram matrix by an independent midpoint rule in (z, phi); area element dz dphi is uniform.
TEST(Harmonics, OrthonormalUpToDegreeNine) {
  const int lmax = 9, n = harmonic_count(3, lmax);
  const int nz = 2400, nphi = 40;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd vals(n);
  for (int i = 0; i < nz; ++i) {
    const double z = -1.0 + (i + 0.5) * 2.0 / nz;
    const double s = std::sqrt(1 - z * z);
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2 * kPi * j / nphi;
      const Eigen::Vector3d p(s * std::cos(phi), s * std::sin(phi), z);
      for (int k = 0; k < n; ++k) vals[k] = solid_harmonics()[k].value(p);
      gram += vals * vals.transpose() * (2.0 / nz) * (2 * kPi / nphi);
    }
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Harmonics, SolidHarmonicsAreHarmonicAndHomogeneous) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < harmonic_count(3, 8); ++k) {
    const auto& poly = solid_harmonics()[k];
    const Eigen::Vector3d p = random_unit(rng) * 1.3;
    Eigen::Vector3d g;
    Eigen::Matrix3d h;
    const double v = poly.value_gradient_hessian(p, g, h);
    EXPECT_NEAR(h.trace(), 0.0, 1e-9) << k;
    EXPECT_NEAR(g.dot(p), poly.degree() * v, 1e-9) << k;  // Euler identity
    // gradient against central differences
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector3d d = Eigen::Vector3d::Unit(a) * 1e-6;
      EXPECT_NEAR((poly.value(p + d) - poly.value(p - d)) / 2e-6, g[a], 1e-6) << k;
    }
  }
}

TEST(Harmonics, SphereFitRecoversBandLimitedField) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  const int lmax = 7;
  std::vector<double> c(harmonic_count(3, lmax));
  for (auto& v : c) v = n01(rng);
  auto fn = [&](const Eigen::Vector3d& p) {
    double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * solid_harmonics()[k].value(p);
    return s;
  };
  const auto fit = fit_sphere_harmonics(fn, lmax);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(fit[k], c[k], 1e-11);
}

TEST(Harmonics, CircleBasisAndFit) {
  EXPECT_NEAR(circle_harmonic(0, 0.3), 1 / std::sqrt(2 * kPi), 1e-15);
  EXPECT_NEAR(circle_harmonic(3, 0.3), std::cos(0.6) / std::sqrt(kPi), 1e-15);
  EXPECT_NEAR(circle_harmonic(4, 0.3), std::sin(0.6) / std::sqrt(kPi), 1e-15);
  auto fn = [](double t) { return 0.2 + std::cos(t) - 0.5 * std::sin(3 * t); };
  const auto fit = fit_circle_harmonics(fn, 4);
  EXPECT_NEAR(fit[0], 0.2 * std::sqrt(2 * kPi), 1e-12);
  EXPECT_NEAR(fit[1], std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(fit[6], -0.5 * std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(fit[2], 0.0, 1e-12);
}

TEST(Harmonics, GaussLegendreIntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double s = 0;
  for (int i = 0; i < 6; ++i) s += w[i] * std::pow(x[i], 10);
  EXPECT_NEAR(s, 2.0 / 11.0, 1e-14);
}
