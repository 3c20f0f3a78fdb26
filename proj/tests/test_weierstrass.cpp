#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tpzmc/lattice.hpp"
#include "tpzmc/weierstrass.hpp"

using namespace tpzmc;

namespace {

WeierstrassData schwarz_data(double a, Signature sig, cplx eta_factor) {
  WeierstrassData d;
  d.signature = sig;
  d.curve = HyperellipticCurve::schwarz_h(a);
  d.g = [](cplx z) { return z; };
  d.dg = [](cplx) { return cplx(1.0); };
  d.eta = [eta_factor](cplx, cplx w) { return eta_factor / w; };
  d.base_z = 1.0;
  d.base_w = std::sqrt(d.curve.p(1.0));
  return d;
}

}  // namespace

TEST(Weierstrass, PhiFormulas) {
  const CVec3 l = phi_lorentz(0.0, 1.0);
  EXPECT_EQ(l.c0, cplx(0));
  EXPECT_EQ(l.c1, cplx(1));
  EXPECT_EQ(l.c2, cplx(0, 1));
  const CVec3 e = phi_euclid(0.0, 1.0);
  EXPECT_EQ(e.c0, cplx(1));
  EXPECT_EQ(e.c1, cplx(0, 1));
  EXPECT_EQ(e.c2, cplx(0));
  const CVec3 ei = phi_euclid(cplx(0, 1), 1.0);
  EXPECT_NEAR(std::abs(ei.c0 - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ei.c1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ei.c2 - cplx(0, 2)), 0.0, 1e-15);
}

TEST(Weierstrass, PhiAtBasePoint) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  EXPECT_NEAR(d.base_w.real(), 3.181980515, 1e-9);
  const CVec3 v = phi_lorentz(d, {1.0, d.base_w});
  EXPECT_NEAR(v.c0.imag(), -0.628539, 1e-6);
  EXPECT_NEAR(v.c1.imag(), 0.628539, 1e-6);
  EXPECT_NEAR(std::abs(v.c2), 0.0, 1e-15);
  EXPECT_NEAR(v.c0.real(), 0.0, 1e-15);
  // On |g| = 1 the first component has modulus 2|eta|.
  const cplx z = std::polar(1.0, 0.4);
  const cplx w = d.curve.principal_w(z);
  EXPECT_NEAR(std::abs(phi_lorentz(d, {z, w}).c0), 2.0 / std::abs(w), 1e-14);
}

TEST(Weierstrass, PoleIsReported) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  try {
    phi_lorentz(d, {0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Pole);
  }
}

TEST(Weierstrass, RpdEuclideanClosedForm) {
  WeierstrassData d;
  d.signature = Signature::Euclidean;
  d.curve = HyperellipticCurve::rpd(1.0);
  d.g = [](cplx z) { return z; };
  d.dg = [](cplx) { return cplx(1.0); };
  d.eta = [](cplx, cplx w) { return 1.0 / w; };
  const cplx w = continue_sheet(d.curve, make_path(d.curve, {0.3, 0.5}), d.curve.principal_w(0.3)).back().w;
  const CVec3 v = phi_euclid(d, {0.5, w});
  // w^2 = z(z^3 - 1)(z^3 + 1) = z(z^6 - 1) at a = 1.
  const cplx w_ref = std::sqrt(cplx(0.5 * (std::pow(0.5, 6) - 1.0)));
  EXPECT_NEAR(std::abs(w * w - w_ref * w_ref), 0.0, 1e-14);
  const cplx s = w / w_ref;  // +-1
  EXPECT_NEAR(std::abs(v.c0 - s * (1.0 - 0.25) / w_ref), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(v.c1 - s * cplx(0, 1.25) / w_ref), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(v.c2 - s * 1.0 / w_ref), 0.0, 1e-12);
}

TEST(Weierstrass, SurfacePointBasics) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  EXPECT_EQ(surface_point(d, make_path(d.curve, {})), Vec3{});
  const std::vector<cplx> there = {1.0, cplx(0.6, 0.5)};
  cplx w_end;
  const Vec3 p = surface_point(d, make_path(d.curve, there), &w_end);
  const Vec3 back = integrate_phi(d, make_path(d.curve, {cplx(0.6, 0.5), 1.0}), w_end).real();
  EXPECT_LT(norm(p + back), 1e-12);
  // A homotopic route to the same endpoint.
  const Vec3 q = surface_point(d, make_path(d.curve, {1.0, cplx(1.0, 0.5), cplx(0.6, 0.5)}));
  EXPECT_LT(oracle::max_diff(p, q), 1e-9);
  EXPECT_THROW(surface_point(d, make_path(d.curve, {0.5, 0.6})), Error);
}

TEST(Weierstrass, ContractibleLoopHasZeroPeriod) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  const Vec3 p = period_vector(d, make_path(d.curve, circle_waypoints(cplx(1.0, 0.5), 0.2, 16)));
  EXPECT_LT(norm(p), 1e-10);
}

TEST(Weierstrass, SheetMismatchIsNotACycle) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  try {
    period_vector(d, make_path(d.curve, circle_waypoints(0.0, 0.2, 16)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACycle);
  }
}

TEST(Weierstrass, SymmetryPushforwards) {
  const double a = 0.5;
  auto d = schwarz_data(a, Signature::Lorentzian, cplx(0, 1));
  const double c3 = std::cos(kPi / 3), s3 = std::sin(kPi / 3);
  const Mat3 m1 = Mat3::diag(-1, -1, 1);
  const Mat3 m2{{1, 0, 0, 0, -c3, s3, 0, s3, c3}};
  EXPECT_LT(isometry_defect(m1, Signature::Lorentzian), 1e-14);
  EXPECT_LT(isometry_defect(m2, Signature::Lorentzian), 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(u(rng), u(rng));
    if (std::abs(d.curve.p(z)) < 1e-3) continue;
    const cplx w = d.curve.principal_w(z);
    const CVec3 conj_phi = phi(d, {z, w}).conj();
    // psi_j(z, w) = (h(conj z), ...), pullback coefficient carries h'(conj z).
    const cplx zb = std::conj(z), wb = std::conj(w);
    const cplx rot = std::polar(1.0, 2 * kPi / 3);
    const CVec3 p1 = phi(d, {zb, wb});
    const CVec3 p2 = phi(d, {rot * zb, std::polar(1.0, kPi / 3) * wb}) * rot;
    const CVec3 p3 = phi(d, {1.0 / zb, wb / (zb * zb * zb * zb)}) * (-1.0 / (zb * zb));
    const double scale = 1.0 + conj_phi.max_abs();
    EXPECT_LT((p1 - m1 * conj_phi).max_abs() / scale, 1e-10);
    EXPECT_LT((p2 - m2 * conj_phi).max_abs() / scale, 1e-10);
    EXPECT_LT((p3 - conj_phi).max_abs() / scale, 1e-10);
  }
}

TEST(Weierstrass, HomologyCyclesCloseAndSpanRankThree) {
  auto d = schwarz_data(0.5, Signature::Lorentzian, cplx(0, 1));
  auto cycles = homology_cycles(d.curve);
  EXPECT_GE(cycles.size(), 6u);
  auto per = periods(d);
  auto lat = lattice_detect(per, 1e-6);
  EXPECT_EQ(lat.rank, 3);
  EXPECT_LE(lat.residual, 1e-6);
}
