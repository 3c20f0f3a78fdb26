#pragma once

// Concrete surface families: the Schwarz-H-type ZMC surface in L^3 and its
// conjugate, rPD and Schwarz H in R^3, Karcher towers, the Karcher-type
// maxface, the Scherk-type ZMC graph, and the two limit studies.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/maxface.hpp"
#include "tpzmc/mesh.hpp"
#include "tpzmc/null_extension.hpp"
#include "tpzmc/weierstrass.hpp"

namespace tpzmc {

enum class FamilyTag { SchwarzHZmc, SchwarzHZmcConjugate, RPD, SchwarzH_R3, KarcherTower, KarcherMaxface, ScherkZmcGraph };

inline const char* family_name(FamilyTag t) {
  switch (t) {
    case FamilyTag::SchwarzHZmc: return "schwarz-h-zmc";
    case FamilyTag::SchwarzHZmcConjugate: return "schwarz-h-zmc-conj";
    case FamilyTag::RPD: return "rpd";
    case FamilyTag::SchwarzH_R3: return "schwarz-h-r3";
    case FamilyTag::KarcherTower: return "karcher-tower";
    case FamilyTag::KarcherMaxface: return "karcher-maxface";
    case FamilyTag::ScherkZmcGraph: return "scherk-zmc";
  }
  return "?";
}

inline std::optional<FamilyTag> family_from_name(const std::string& s) {
  for (auto t : {FamilyTag::SchwarzHZmc, FamilyTag::SchwarzHZmcConjugate, FamilyTag::RPD, FamilyTag::SchwarzH_R3,
                 FamilyTag::KarcherTower, FamilyTag::KarcherMaxface, FamilyTag::ScherkZmcGraph})
    if (s == family_name(t)) return t;
  return std::nullopt;
}

inline bool family_uses_k(FamilyTag t) {
  return t == FamilyTag::KarcherTower || t == FamilyTag::KarcherMaxface || t == FamilyTag::ScherkZmcGraph;
}

struct FamilySpec {
  FamilyTag tag;
  double a = 0.0;
  int k = 0;
  WeierstrassData data;
  std::string domain;
};

namespace detail {

inline void require_positive(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream msg;
    msg << "parameter a = " << a << " must be positive";
    throw Error(ErrorKind::Parameter, msg.str());
  }
}

inline void require_k(int k) {
  if (k < 2) {
    std::ostringstream msg;
    msg << "parameter k = " << k << " must be an integer >= 2";
    throw Error(ErrorKind::Parameter, msg.str());
  }
}

inline WeierstrassData schwarz_h_data(double a, Signature sig, cplx eta_factor) {
  WeierstrassData d;
  d.signature = sig;
  d.curve = HyperellipticCurve::schwarz_h(a);
  d.g = [](cplx z) { return z; };
  d.dg = [](cplx) { return cplx(1.0); };
  d.eta = [eta_factor](cplx, cplx w) { return eta_factor / w; };
  d.base_z = 1.0;
  d.base_w = std::sqrt(d.curve.p(1.0).real());
  return d;
}

inline std::vector<cplx> roots_of_minus_one(int n) {
  std::vector<cplx> out;
  for (int j = 0; j < n; ++j) out.push_back(std::polar(1.0, kPi * (2 * j + 1) / n));
  return out;
}

inline cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

inline WeierstrassData karcher_data(int k, Signature sig, cplx eta_factor) {
  WeierstrassData d;
  d.signature = sig;
  d.curve = HyperellipticCurve::planar(roots_of_minus_one(2 * k));
  d.g = [k](cplx z) { return ipow(z, k - 1); };
  d.dg = [k](cplx z) { return double(k - 1) * ipow(z, k - 2); };
  d.eta = [k, eta_factor](cplx z, cplx) { return eta_factor / (ipow(z, 2 * k) + 1.0); };
  d.base_z = 0.0;
  d.base_w = 1.0;
  return d;
}

}  // namespace detail

/// g = z, eta = i dz / w on w^2 = z(z^3 + a^3)(z^3 + a^-3), base z = 1 with w > 0.
/// `any_a` admits a > 1 (the maxface exists there, assembly is only for a < 1).
inline FamilySpec schwarz_h_zmc(double a, bool any_a = false) {
  detail::require_positive(a);
  FamilySpec f{FamilyTag::SchwarzHZmc, a, 0, detail::schwarz_h_data(a, Signature::Lorentzian, cplx(0, 1)),
               "sector |z| <= 1, 0 <= arg z <= pi/3"};
  if (!any_a && a >= 1.0) require_unit_interval(a);
  return f;
}

/// Same curve with eta = dz / w: conelike singularities instead of folds.
inline FamilySpec schwarz_h_zmc_conjugate(double a) {
  detail::require_positive(a);
  FamilySpec f{FamilyTag::SchwarzHZmcConjugate, a, 0, detail::schwarz_h_data(a, Signature::Lorentzian, 1.0),
               "sector |z| <= 1, 0 <= arg z <= pi/3"};
  require_unit_interval(a);
  return f;
}

/// rPD in R^3: w^2 = z(z^3 - a^3)(z^3 + a^-3), g = z, eta = dz / w, base z = a/2.
inline FamilySpec rpd(double a) {
  detail::require_positive(a);
  WeierstrassData d;
  d.signature = Signature::Euclidean;
  d.curve = HyperellipticCurve::rpd(a);
  d.g = [](cplx z) { return z; };
  d.dg = [](cplx) { return cplx(1.0); };
  d.eta = [](cplx, cplx w) { return 1.0 / w; };
  d.base_z = 0.5 * a;
  d.base_w = d.curve.principal_w(d.base_z);
  return {FamilyTag::RPD, a, 0, std::move(d), "compact genus-3 curve"};
}

/// Schwarz H in R^3 on the Schwarz-H-type curve: g = z, eta = dz / w.
inline FamilySpec schwarz_h_r3(double a) {
  detail::require_positive(a);
  FamilySpec f{FamilyTag::SchwarzH_R3, a, 0, detail::schwarz_h_data(a, Signature::Euclidean, 1.0),
               "compact genus-3 curve"};
  require_unit_interval(a);
  return f;
}

/// Karcher tower in R^3: g = z^(k-1), eta = dz / (z^2k + 1) on the sphere minus z^2k = -1.
inline FamilySpec karcher_tower(int k) {
  detail::require_k(k);
  return {FamilyTag::KarcherTower, 0.0, k, detail::karcher_data(k, Signature::Euclidean, 1.0),
          "sphere minus the 2k-th roots of -1"};
}

/// Karcher-type maxface in L^3: g = z^(k-1), eta = i dz / (z^2k + 1).
inline FamilySpec karcher_maxface(int k) {
  detail::require_k(k);
  return {FamilyTag::KarcherMaxface, 0.0, k, detail::karcher_data(k, Signature::Lorentzian, cplx(0, 1)),
          "sphere minus the 2k-th roots of -1"};
}

/// Scherk-type ZMC surface: the k = 2 Karcher-type maxface and its extension.
inline FamilySpec scherk_zmc() {
  auto f = karcher_maxface(2);
  f.tag = FamilyTag::ScherkZmcGraph;
  f.domain = "entire graph x0 = log(cosh x1 / cosh x2)";
  return f;
}

inline FamilySpec make_family(FamilyTag tag, double a, int k) {
  switch (tag) {
    case FamilyTag::SchwarzHZmc: return schwarz_h_zmc(a);
    case FamilyTag::SchwarzHZmcConjugate: return schwarz_h_zmc_conjugate(a);
    case FamilyTag::RPD: return rpd(a);
    case FamilyTag::SchwarzH_R3: return schwarz_h_r3(a);
    case FamilyTag::KarcherTower: return karcher_tower(k);
    case FamilyTag::KarcherMaxface: return karcher_maxface(k);
    case FamilyTag::ScherkZmcGraph: return scherk_zmc();
  }
  throw Error(ErrorKind::Parameter, "unknown family");
}

/// Route from the base point z = 1 to r e^{i theta}: along the real axis to r,
/// then along the circle of radius r. Ends on the branch point when r = 0.
inline std::vector<cplx> sector_waypoints(double r, double theta, double arc_step = kPi / 96) {
  std::vector<cplx> wp = {1.0};
  if (r != 1.0) wp.push_back(r);
  if (r == 0.0 || theta == 0.0) return wp;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(theta) / arc_step)));
  for (int k = 1; k <= n; ++k) wp.push_back(std::polar(r, theta * k / n));
  return wp;
}

/// Sheet point at r e^{i theta} continued from the base point along sector_waypoints.
inline SheetPoint sector_point(const WeierstrassData& data, double r, double theta) {
  return continue_sheet(data.curve, make_path(data.curve, sector_waypoints(r, theta)), data.base_w).back();
}

/// log(cosh x) without overflow.
inline double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

/// Height of the Scherk-type ZMC graph x0 = log(cosh x1 / cosh x2).
inline double scherk_graph(double x1, double x2) { return log_cosh(x1) - log_cosh(x2); }

/// The graph over the square [-half, half]^2 with cells x cells quads, two
/// triangles each. Spacelike everywhere since |grad x0| < 1.
inline TaggedMesh scherk_graph_mesh(double half, int cells) {
  if (!(half > 0.0) || cells < 1) throw Error(ErrorKind::Parameter, "graph extent and cell count must be positive");
  TaggedMesh m;
  for (int j = 0; j <= cells; ++j)
    for (int i = 0; i <= cells; ++i) {
      const double x1 = -half + 2 * half * i / cells, x2 = -half + 2 * half * j / cells;
      m.add_vertex({scherk_graph(x1, x2), x1, x2});
    }
  const FaceTag tag{CausalClass::Spacelike, Patch::Graph, 0};
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      const std::uint32_t a = j * (cells + 1) + i, b = a + 1, c = a + cells + 1, d = c + 1;
      m.add_face(a, b, d, tag);
      m.add_face(a, d, c, tag);
    }
  return m;
}

/// sup over t in [0, 2pi/3] of |sqrt(a^3 + a^-3) xi(t) - 2|.
inline double helicoid_limit_deviation(double a, int samples = 4800) {
  require_unit_interval(a);
  const double k = a * a * a + 1.0 / (a * a * a);
  const double root = std::sqrt(k);
  double worst = 0.0;
  // The grid contains t = 0, pi/3, 2pi/3 where cos 3t is extremal.
  for (int i = 0; i <= samples; ++i) {
    const double t = (2.0 * kPi / 3.0) * i / samples;
    worst = std::max(worst, std::abs(root * xi(t, a) - 2.0));
  }
  return worst;
}

/// Null curve of a fold along |z| = 1 for data with w == 1, from the
/// boundary values of Re(Phi(e^{is}) i e^{is}).
inline NullCurve singular_circle_curve(const WeierstrassData& data, double s_min, double s_max, double h = kPi / 3000) {
  if (!data.curve.is_planar()) throw Error(ErrorKind::Precondition, "singular circle extraction needs planar data");
  auto vel = [data](double s) {
    const cplx z = std::polar(1.0, s);
    return (phi(data, {z, 1.0}) * (cplx(0, 1) * z)).real();
  };
  auto acc = [vel](double s) {
    const double e = 1e-5;
    return (vel(s + e) - vel(s - e)) / (2 * e);
  };
  return NullCurve(vel, acc, s_min, s_max, h);
}

/// Frame taking the k = 2 Karcher-type maxface to the standard Scherk graph:
/// y = scale * R (x - center) with R fixing x0 and rotating (x1, x2).
struct ScherkFrame {
  Vec3 center;
  double scale;
  double angle;

  Vec3 apply(const Vec3& x) const {
    const Vec3 d = x - center;
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec3{d.c0, c * d.c1 - s * d.c2, s * d.c1 + c * d.c2} * scale;
  }
};

/// The frame is read off the data at z = 0: center f(0), scale 2|g'(0)| / |eta(0)|
/// (the graph's Hessian normalisation), and the rotation taking the image of
/// the real axis (a straight line) to the diagonal x1 = x2 of the graph.
inline ScherkFrame scherk_frame(const WeierstrassData& data) {
  ScherkFrame fr;
  if (data.base_z != 0.0) fr.center = surface_point(data, make_path(data.curve, {data.base_z, 0.0}));
  fr.scale = 2.0 * std::abs(data.dg(0.0)) / std::abs(data.eta(0.0, 1.0));
  const Vec3 d = phi(data, {0.0, 1.0}).real();
  fr.angle = kPi / 4 - std::atan2(d.c2, d.c1);
  return fr;
}

struct ScherkCheck {
  double max_residual = 0.0;
  int samples = 0;
  std::vector<Vec3> points;  // aligned sample points
};

/// Samples the k = 2 Karcher-type maxface (spacelike part) and its timelike
/// extension across the unit circle, aligns by scherk_frame, and reports
/// max |y0 - log(cosh y1 / cosh y2)|.
inline ScherkCheck scherk_alignment_check(int n_timelike = 100, int n_spacelike = 0, std::uint64_t seed = 1) {
  const auto fam = scherk_zmc();
  const auto& data = fam.data;
  const ScherkFrame fr = scherk_frame(data);
  const double m = kPi / 4;
  const NullCurve gamma = singular_circle_curve(data, -m + 1e-9, m - 1e-9);
  const Vec3 f1 = surface_point(data, make_path(data.curve, {data.base_z, 1.0}));
  ScherkCheck out;
  // Deterministic low-discrepancy samples in the diamond |u| + v < pi/4.
  auto frac = [](double x) { return x - std::floor(x); };
  const double g1 = 0.7548776662466927, g2 = 0.5698402909980532;
  for (int i = 0; i < n_timelike; ++i) {
    const double p = frac(0.5 + g1 * (i + seed)), q = frac(0.5 + g2 * (i + seed));
    const double reach = 0.97 * m;
    const double v = 0.02 + (reach - 0.04) * q;
    const double u = (reach - v) * (2 * p - 1);
    const Vec3 x = f1 + timelike_extend(gamma, u, v);
    const Vec3 y = fr.apply(x);
    out.points.push_back(y);
    out.max_residual = std::max(out.max_residual, std::abs(y.c0 - scherk_graph(y.c1, y.c2)));
    ++out.samples;
  }
  for (int i = 0; i < n_spacelike; ++i) {
    const double p = frac(0.5 + g1 * (i + seed)), q = frac(0.5 + g2 * (i + seed));
    const cplx z = std::polar(0.9 * std::sqrt(q), 2 * kPi * p);
    const Vec3 y = fr.apply(surface_point(data, make_path(data.curve, {data.base_z, z})));
    out.points.push_back(y);
    out.max_residual = std::max(out.max_residual, std::abs(y.c0 - scherk_graph(y.c1, y.c2)));
    ++out.samples;
  }
  return out;
}

struct NodalComparison {
  double deviation = 0.0;
  std::vector<double> per_sample;
};

/// Compares f_a(z = zeta^2) with the k = 3 Karcher-type maxface at zeta
/// (scaled by 2 as in the limit display), both relative to the first sample.
/// `sign` selects the branch of the +- in that display.
inline NodalComparison nodal_limit_comparison(double a, const std::vector<cplx>& samples, int sign = +1,
                                              double node_guard = 0.05) {
  if (samples.empty()) throw Error(ErrorKind::Precondition, "no samples");
  const auto fa = schwarz_h_zmc(a, true);
  auto km = karcher_maxface(3);
  km.data.base_z = 1.0;
  std::vector<cplx> nodes;
  for (int j = 0; j < 6; ++j) nodes.push_back(std::polar(1.0, kPi / 6 + j * kPi / 3));
  for (const cplx& s : samples) {
    if (std::abs(s) > 1.0 + 1e-12) throw Error(ErrorKind::Guard, "sample outside the closed unit disk");
    for (const cplx& n : nodes)
      if (std::abs(s - n) < node_guard) {
        std::ostringstream msg;
        msg << "sample " << s << " within " << node_guard << " of the node preimage " << n;
        throw Error(ErrorKind::Guard, msg.str());
      }
  }
  // Path in the zeta plane: 1 -> |zeta| along the real axis, then the arc.
  auto zeta_path = [](cplx s) {
    std::vector<cplx> wp = {1.0};
    const double r = std::abs(s), th = std::arg(s);
    if (std::abs(r - 1.0) > 1e-12) wp.push_back(r);
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(th) / (kPi / 48))));
    for (int k = 1; k <= n; ++k) wp.push_back(std::polar(r, th * k / n));
    return wp;
  };
  std::vector<Vec3> lhs, rhs;
  for (const cplx& s : samples) {
    auto zp = zeta_path(s);
    std::vector<cplx> zz;
    for (auto q : zp) zz.push_back(q * q);
    // Drop consecutive duplicates created by squaring.
    zz.erase(std::unique(zz.begin(), zz.end()), zz.end());
    lhs.push_back(surface_point(fa.data, make_path(fa.data.curve, zz)));
    zp.erase(std::unique(zp.begin(), zp.end()), zp.end());
    rhs.push_back((2.0 * sign) * surface_point(km.data, make_path(km.data.curve, zp)));
  }
  NodalComparison out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = norm((lhs[i] - lhs[0]) - (rhs[i] - rhs[0]));
    out.per_sample.push_back(d);
    out.deviation = std::max(out.deviation, d);
  }
  return out;
}

}  // namespace tpzmc
