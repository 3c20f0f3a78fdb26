#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tpzmc/families.hpp"
#include "tpzmc/lattice.hpp"

using namespace tpzmc;

TEST(Families, ParameterRanges) {
  try {
    schwarz_h_zmc(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateCurve);
  }
  EXPECT_THROW(schwarz_h_zmc(1.5), Error);
  EXPECT_NO_THROW(schwarz_h_zmc(1.5, true));
  EXPECT_THROW(schwarz_h_zmc(0.0), Error);
  EXPECT_THROW(schwarz_h_r3(1.2), Error);
  EXPECT_NO_THROW(rpd(1.0));
  EXPECT_THROW(karcher_tower(1), Error);
  EXPECT_THROW(karcher_maxface(0), Error);
  EXPECT_EQ(family_from_name("rpd"), FamilyTag::RPD);
  EXPECT_FALSE(family_from_name("nope").has_value());
}

TEST(Families, SharedCurve) {
  const auto z = schwarz_h_zmc(0.5), r = schwarz_h_r3(0.5);
  EXPECT_EQ(z.data.curve.branch_points(), r.data.curve.branch_points());
  EXPECT_EQ(z.data.base_z, r.data.base_z);
  EXPECT_EQ(z.data.base_w, r.data.base_w);
}

TEST(Families, ConjugateIsMinusITimesMain) {
  const auto m = schwarz_h_zmc(0.5), c = schwarz_h_zmc_conjugate(0.5);
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.9), cplx(1.5, -0.4)}) {
    const cplx w = m.data.curve.principal_w(z);
    EXPECT_LT((phi(c.data, {z, w}) - cplx(0, -1) * phi(m.data, {z, w})).max_abs(), 1e-14);
  }
}

TEST(Families, KarcherPunctures) {
  const auto k3 = karcher_tower(3);
  ASSERT_EQ(k3.data.curve.punctures().size(), 6u);
  for (auto p : k3.data.curve.punctures()) EXPECT_LT(std::abs(std::pow(p, 6) + 1.0), 1e-14);
}

TEST(Families, KarcherMaxfaceIntegrandAtZero) {
  // The limit display (factor 2 included) at zeta = 0 is 2 (0, i, -1) = (0, 2i, -2).
  const auto k3 = karcher_maxface(3);
  const CVec3 v = phi(k3.data, {0.0, 1.0}) * 2.0;
  EXPECT_LT((v - CVec3{0.0, cplx(0, 2), -2.0}).max_abs(), 1e-15);
}

TEST(Families, TowerPeriodsRankOne) {
  for (int k : {2, 3}) {
    const auto f = karcher_tower(k);
    const auto per = periods(f.data);
    ASSERT_EQ(per.size(), static_cast<std::size_t>(2 * k));
    const auto lat = lattice_detect(per, 1e-6);
    EXPECT_EQ(lat.rank, 1) << k;
    EXPECT_EQ(periodicity_classify(lat), Periodicity::SinglyPeriodic);
    for (const auto& p : per) EXPECT_GT(norm(p), 1e-3);
  }
}

TEST(Families, KarcherMaxfaceSingleValued) {
  for (int k : {2, 3, 4}) {
    const auto f = karcher_maxface(k);
    for (const auto& p : periods(f.data)) EXPECT_LT(norm(p), 1e-10) << k;
  }
}

TEST(Families, RankThreeFamilies) {
  EXPECT_EQ(lattice_detect(periods(rpd(1.0 / std::sqrt(2.0)).data), 1e-6).rank, 3);
  EXPECT_EQ(lattice_detect(periods(rpd(std::sqrt(2.0)).data), 1e-6).rank, 3);
  EXPECT_EQ(lattice_detect(periods(schwarz_h_r3(0.5).data), 1e-6).rank, 3);
}

TEST(Families, ScherkGraphValues) {
  EXPECT_EQ(scherk_graph(0, 0), 0.0);
  EXPECT_NEAR(scherk_graph(1, 0), 0.433781, 1e-6);
  EXPECT_NEAR(scherk_graph(0.3, -1.2), -scherk_graph(-1.2, 0.3), 1e-15);
  EXPECT_NEAR(scherk_graph(800, 0), 800 - std::log(2.0), 1e-12);
}

TEST(Families, ScherkAlignment) {
  const auto chk = scherk_alignment_check(100, 30);
  EXPECT_EQ(chk.samples, 130);
  EXPECT_LE(chk.max_residual, 1e-6);
}

TEST(Families, HelicoidDeviation) {
  EXPECT_LE(helicoid_limit_deviation(0.01), 1e-5);
  // The sup sits at cos 3t = -1 and is close to 2 a^3 for small a.
  EXPECT_NEAR(helicoid_limit_deviation(0.1) / 2e-3, 1.0, 0.01);
  double prev = helicoid_limit_deviation(0.3);
  for (double a : {0.2, 0.1, 0.05}) {
    const double d = helicoid_limit_deviation(a);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Families, NodalLimit) {
  std::vector<cplx> samples;
  for (int j = 0; j < 12; ++j) samples.push_back(std::polar(0.5, 2 * kPi * j / 12 + 0.1));
  const double d1 = nodal_limit_comparison(0.9, samples).deviation;
  const double d2 = nodal_limit_comparison(0.99, samples).deviation;
  const double d3 = nodal_limit_comparison(0.999, samples).deviation;
  EXPECT_GT(d1, d2);
  EXPECT_GT(d2, d3);
  EXPECT_LT(d3, 1e-3);
  try {
    nodal_limit_comparison(0.99, {std::polar(0.5, 0.0), std::polar(1.0, kPi / 6)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Guard);
  }
}
