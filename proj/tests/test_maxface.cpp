#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tpzmc/families.hpp"
#include "tpzmc/maxface.hpp"

using namespace tpzmc;

namespace {

std::vector<SheetPoint> circle_points(const FamilySpec& f, int n) {
  std::vector<cplx> wp;
  for (int k = 0; k < n; ++k) wp.push_back(std::polar(1.0, 2 * kPi * k / n));
  return sheet_at_waypoints(f.data.curve, wp, f.data.base_w);
}

}  // namespace

TEST(Maxface, SingularResidual) {
  const auto f = schwarz_h_zmc(0.5);
  EXPECT_NEAR(singular_residual(f.data, {std::polar(1.0, 0.3), 1.0}), 0.0, 1e-15);
  EXPECT_NEAR(singular_residual(f.data, {0.5, 1.0}), -0.5, 1e-15);
  EXPECT_NEAR(singular_residual(f.data, {std::polar(2.0, kPi / 7), 1.0}), 1.0, 1e-15);
}

TEST(Maxface, Nondegenerate) {
  const auto f = schwarz_h_zmc(0.5);
  EXPECT_TRUE(nondegenerate_singular(f.data, {std::polar(1.0, 0.9), 1.0}));
  WeierstrassData sq = f.data;
  sq.g = [](cplx z) { return z * z + 1.0; };  // |g| = 1 at z = 0 with dg = 0
  sq.dg = [](cplx z) { return 2.0 * z; };
  EXPECT_FALSE(nondegenerate_singular(sq, {0.0, 1.0}));
  const auto k3 = karcher_maxface(3);
  try {
    nondegenerate_singular(k3.data, {0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Maxface, FoldResidualOnCircle) {
  for (double a : {0.1, 0.5, 0.9}) {
    const auto f = schwarz_h_zmc(a);
    for (const auto& p : circle_points(f, 360)) EXPECT_LE(std::abs(fold_residual(f.data, p)), 1e-10);
  }
  const auto f = schwarz_h_zmc(0.5);
  // Off the circle the residual is undefined; the ratio itself is generically
  // not imaginary, except on the rays where Q is imaginary (arg z = pi/3, |z| > a).
  const auto off = sector_point(f.data, 0.99, kPi / 5);
  EXPECT_THROW(fold_residual(f.data, off), Error);
  EXPECT_GT(std::abs(fold_ratio(f.data, off).real()), 1e-3);
  EXPECT_LT(std::abs(fold_ratio(f.data, sector_point(f.data, 0.99, kPi / 3)).real()), 1e-12);
  EXPECT_GT(std::abs(fold_ratio(f.data, sector_point(f.data, 0.3, kPi / 3)).real()), 1e-3);
  const auto k2 = karcher_maxface(2);
  for (int i = 0; i < 100; ++i) {
    const double t = 2 * kPi * (i + 0.5) / 100;
    EXPECT_LE(std::abs(fold_residual(k2.data, {std::polar(1.0, t), 1.0})), 1e-10);
  }
}

TEST(Maxface, ConjugateIsNotFold) {
  const auto f = schwarz_h_zmc_conjugate(0.5);
  int failing = 0;
  for (const auto& p : circle_points(f, 360)) failing += std::abs(fold_residual(f.data, p)) > 1e-10;
  EXPECT_GE(failing, 300);
}

TEST(Maxface, HopfPhases) {
  const auto f = schwarz_h_zmc(0.5);
  const cplx w = std::sqrt(f.data.curve.p(0.4));
  EXPECT_NEAR(fundamental_forms(f.data, {0.4, w}).hopf.real(), 0.0, 1e-15);
  const double a = 0.5;
  const cplx e3 = std::polar(1.0, kPi / 3);
  auto on_ray = [&](double t) { return sector_point(f.data, t, kPi / 3); };
  auto p_in = on_ray(0.3);
  auto q_in = fundamental_forms(f.data, p_in).hopf * e3 * e3;
  EXPECT_NEAR(q_in.imag(), 0.0, 1e-13 * std::abs(q_in));
  // |Q| against the displayed closed form along the ray.
  const double t = 0.3;
  EXPECT_NEAR(std::abs(q_in), 1.0 / std::sqrt(std::abs(t * (t * t * t - a * a * a) * (t * t * t - 1 / (a * a * a)))),
              1e-12);
  auto q_out = fundamental_forms(f.data, on_ray(0.7)).hopf * e3 * e3;
  EXPECT_NEAR(q_out.real(), 0.0, 1e-13 * std::abs(q_out));
}

TEST(Maxface, BoundaryClassify) {
  const auto f = schwarz_h_zmc(0.5);
  const auto& d = f.data;
  const cplx e3 = std::polar(1.0, kPi / 3);
  const cplx w_real = std::sqrt(d.curve.p(0.05));
  EXPECT_EQ(boundary_classify(d, 0.05, 0.95, w_real).kind, BoundaryKind::StraightLine);
  auto sheet = [&](double r, double th) { return sector_point(d, r, th).w; };
  EXPECT_EQ(boundary_classify(d, 0.05 * e3, 0.45 * e3, sheet(0.05, kPi / 3)).kind, BoundaryKind::PlanarCurve);
  EXPECT_EQ(boundary_classify(d, 0.55 * e3, 0.95 * e3, sheet(0.55, kPi / 3)).kind, BoundaryKind::StraightLine);
  // A segment off the symmetry rays mixes phases.
  EXPECT_THROW(boundary_classify(d, std::polar(0.3, 0.5), std::polar(0.9, 0.5), sheet(0.3, 0.5)), Error);
}

TEST(Maxface, ConformalFactor) {
  const auto f = schwarz_h_zmc(0.5);
  const cplx w = std::sqrt(f.data.curve.p(0.5));
  const auto ff = fundamental_forms(f.data, {0.5, w});
  EXPECT_NEAR(ff.conformal, std::pow(1 - 0.25, 2) / std::norm(w), 1e-15);
  // Chart around the branch point z = 0: finite positive, equal to 4 at tau = 0.
  EXPECT_NEAR(conformal_factor_branch_chart(f.data, 0, 0.0, cplx(0, 1)), 4.0, 1e-14);
  EXPECT_GT(conformal_factor_branch_chart(f.data, 0, 0.1, cplx(0, 1)), 0.0);
}

TEST(Maxface, GaussMap) {
  auto g0 = gauss_map_of(0.0, Signature::Lorentzian);
  EXPECT_EQ(g0.point, (Vec3{-1, 0, 0}));
  auto gh = gauss_map_of(0.5, Signature::Lorentzian);
  EXPECT_NEAR(minkowski_inner(gh.point, gh.point), -1.0, 1e-14);
  EXPECT_NEAR(std::abs(stereographic(gh.point, Signature::Lorentzian) - 0.5), 0.0, 1e-15);
  EXPECT_LE(gh.point.c0, -1.0);
  EXPECT_TRUE(gauss_map_of(std::polar(1.0 - 1e-8, 0.2), Signature::Lorentzian).diverging);
  EXPECT_THROW(gauss_map_of(std::polar(1.0, 0.2), Signature::Lorentzian), Error);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const cplx g(u(rng), u(rng));
    if (std::abs(std::abs(g) - 1.0) < 1e-3) continue;
    for (auto s : {Signature::Lorentzian, Signature::Euclidean}) {
      const auto gv = gauss_map_of(g, s);
      EXPECT_LT(std::abs(stereographic(gv.point, s) - g), 1e-12 * (1 + std::abs(g)));
    }
  }
}

TEST(Maxface, PlaneHasZeroCurvature) {
  TaggedMesh m;
  const int n = 10;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.add_vertex({0.3 * i / n, double(i) / n, double(j) / n + 0.1 * i / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::uint32_t a = j * (n + 1) + i, b = a + 1, c = a + n + 1, d = c + 1;
      m.add_face(a, b, d, {});
      m.add_face(a, d, c, {});
    }
  const auto rep = mean_curvature_residual(m);
  EXPECT_GT(rep.evaluated, 0u);
  EXPECT_LE(rep.max, 1e-12);
}

TEST(Maxface, ScherkGraphConvergesQuadratically) {
  const auto r0 = mean_curvature_residual(scherk_graph_mesh(0.4, 16));
  EXPECT_LE(r0.max, 0.1 * 0.05 * 0.05);
  const auto r1 = mean_curvature_residual(scherk_graph_mesh(0.4, 32));
  const auto r2 = mean_curvature_residual(scherk_graph_mesh(0.4, 64));
  const double order = std::log2(r1.max / r2.max);
  EXPECT_GE(order, 1.8) << r1.max << " " << r2.max;
  EXPECT_GT(r0.max / r1.max, 3.0);
}
