#pragma once

// Pointwise analysis of maxfaces (singular set, folds, fundamental forms,
// Hopf differential, Gauss map) and a discrete mean-curvature residual for
// triangle meshes in L^3 or R^3.

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/mesh.hpp"
#include "tpzmc/weierstrass.hpp"

namespace tpzmc {

/// |g(p)| - 1: zero exactly on the singular set.
inline double singular_residual(const WeierstrassData& data, const SheetPoint& p) {
  return std::abs(data.g(p.z)) - 1.0;
}

/// True when dg does not vanish at a singular point.
inline bool nondegenerate_singular(const WeierstrassData& data, const SheetPoint& p, double tol = 1e-9,
                                   double singular_tol = 1e-8) {
  if (std::abs(singular_residual(data, p)) > singular_tol) {
    std::ostringstream msg;
    msg << "point z = " << p.z << " is not on the singular set (|g| - 1 = " << singular_residual(data, p) << ")";
    throw Error(ErrorKind::Precondition, msg.str());
  }
  return std::abs(data.dg(p.z)) > tol;
}

/// Re(dg / (g^2 eta)) at a non-degenerate singular point.
inline double fold_residual(const WeierstrassData& data, const SheetPoint& p, double singular_tol = 1e-8) {
  if (!nondegenerate_singular(data, p, 1e-9, singular_tol))
    throw Error(ErrorKind::Precondition, "fold residual needs a non-degenerate singular point");
  const cplx e = data.eta(p.z, p.w);
  if (!std::isfinite(std::abs(e)) || std::abs(e) < 1e-300)
    throw Error(ErrorKind::UndefinedResidual, "eta vanishes or blows up at the singular point");
  const cplx g = data.g(p.z);
  return (data.dg(p.z) / (g * g * e)).real();
}

/// Same ratio without the singular-set precondition (used to report how far
/// off a candidate point is).
inline cplx fold_ratio(const WeierstrassData& data, const SheetPoint& p) {
  const cplx g = data.g(p.z);
  return data.dg(p.z) / (g * g * data.eta(p.z, p.w));
}

struct FundamentalForms {
  double conformal = 0.0;  // ds^2 = conformal |dz|^2
  double second_re = 0.0;  // II = -2 Re(Q dz^2)
  double second_im = 0.0;
  cplx hopf{};             // Q = eta dg = hopf dz^2
};

inline FundamentalForms fundamental_forms(const WeierstrassData& data, const SheetPoint& p) {
  const cplx e = data.eta(p.z, p.w);
  const cplx g = data.g(p.z);
  const double r2 = std::norm(g);
  FundamentalForms ff;
  const double f = data.signature == Signature::Lorentzian ? (1.0 - r2) : (1.0 + r2);
  ff.conformal = f * f * std::norm(e);
  ff.hopf = e * data.dg(p.z);
  ff.second_re = ff.hopf.real();
  ff.second_im = ff.hopf.imag();
  return ff;
}

/// Conformal factor in the chart z = e_k + tau^2 around the branch point e_k,
/// for eta = c dz / w: there w = tau h with h^2 = q(z), so eta = 2c dtau / h.
inline double conformal_factor_branch_chart(const WeierstrassData& data, std::size_t branch, cplx tau, cplx eta_factor) {
  const auto& br = data.curve.branch_points();
  if (branch >= br.size()) throw Error(ErrorKind::Precondition, "branch index out of range");
  const cplx z = br[branch] + tau * tau;
  const cplx h = std::sqrt(data.curve.p_deflated(z, branch));
  const cplx e = 2.0 * eta_factor / h;
  const double r2 = std::norm(data.g(z));
  const double f = data.signature == Signature::Lorentzian ? (1.0 - r2) : (1.0 + r2);
  return f * f * std::norm(e);
}

enum class BoundaryKind { StraightLine, PlanarCurve };

inline const char* to_string(BoundaryKind k) {
  return k == BoundaryKind::StraightLine ? "straight-line" : "planar-curve";
}

struct BoundaryClassification {
  BoundaryKind kind;
  double off_class;  // max |off-class part| / max |Q dz^2|
};

/// Classifies the image of the segment [z0, z1] (sheet w0 at z0) by the phase
/// of Q along it: imaginary -> straight line, real -> planar curve.
inline BoundaryClassification boundary_classify(const WeierstrassData& data, cplx z0, cplx z1, cplx w0,
                                                int samples = 64, double tol = 1e-9) {
  std::vector<cplx> wp;
  for (int k = 0; k <= samples; ++k) wp.push_back(z0 + (z1 - z0) * (double(k) / samples));
  const auto pts = continue_sheet(data.curve, make_path(data.curve, wp), w0);
  const cplx d = z1 - z0;
  double mre = 0.0, mim = 0.0, mabs = 0.0;
  for (const auto& p : pts) {
    const cplx q = data.eta(p.z, p.w) * data.dg(p.z) * d * d;
    mre = std::max(mre, std::abs(q.real()));
    mim = std::max(mim, std::abs(q.imag()));
    mabs = std::max(mabs, std::abs(q));
  }
  if (mabs == 0.0) throw Error(ErrorKind::Classification, "Hopf differential vanishes along the segment");
  if (mre <= tol * mabs) return {BoundaryKind::StraightLine, mre / mabs};
  if (mim <= tol * mabs) return {BoundaryKind::PlanarCurve, mim / mabs};
  std::ostringstream msg;
  msg << "segment has mixed Hopf phase (real part " << mre / mabs << ", imaginary part " << mim / mabs << ")";
  throw Error(ErrorKind::Classification, msg.str());
}

struct GaussValue {
  Vec3 point;
  cplx stereo;
  bool diverging = false;  // |g| close to 1 in L^3: the point runs off to infinity
};

/// Stereographic projection from the hyperboloid (L^3) or the sphere (R^3).
inline cplx stereographic(const Vec3& x, Signature s) {
  if (s == Signature::Lorentzian) return cplx(x.c1, x.c2) / (1.0 - x.c0);
  return cplx(x.c0, x.c1) / (1.0 - x.c2);
}

inline GaussValue gauss_map_of(cplx g, Signature s) {
  const double r2 = std::norm(g);
  GaussValue out;
  if (s == Signature::Lorentzian) {
    const double den = 1.0 - r2;
    if (std::abs(den) < 1e-14) throw Error(ErrorKind::SingularPoint, "Gauss map undefined on the singular set |g| = 1");
    out.point = Vec3{-(1.0 + r2), 2.0 * g.real(), 2.0 * g.imag()} / den;
    out.diverging = std::abs(den) < 1e-6;
  } else {
    out.point = Vec3{2.0 * g.real(), 2.0 * g.imag(), r2 - 1.0} / (1.0 + r2);
  }
  out.stereo = g;
  return out;
}

inline GaussValue gauss_map(const WeierstrassData& data, const SheetPoint& p) {
  return gauss_map_of(data.g(p.z), data.signature);
}

struct CurvatureReport {
  std::vector<double> residual;  // NaN where not evaluated
  double max = 0.0;
  double rms = 0.0;
  std::size_t evaluated = 0;
  std::size_t excluded_degenerate = 0;  // triangles with (near) null induced metric
};

/// Per-vertex |Delta x| / 2 at interior vertices, where Delta is the P1
/// finite-element Laplace-Beltrami (d'Alembert on timelike faces) operator of
/// the induced metric with lumped mass. Vanishes for ZMC/minimal surfaces in
/// the limit; O(h^2) on structured grids. Vertices touching lightlike-tagged
/// or degenerate faces, or mixing causal types, are skipped.
inline CurvatureReport mean_curvature_residual(const TaggedMesh& mesh, Signature sig = Signature::Lorentzian,
                                               double degenerate_tol = 1e-14) {
  validate(mesh);
  const std::size_t nv = mesh.vertices.size();
  std::vector<Vec3> lap(nv);
  std::vector<double> mass(nv, 0.0);
  std::vector<bool> skip(nv, false);
  std::vector<int> type(nv, -1);
  CurvatureReport rep;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    const Vec3 x0 = mesh.vertices[t[0]], x1 = mesh.vertices[t[1]], x2 = mesh.vertices[t[2]];
    const Vec3 e1 = x1 - x0, e2 = x2 - x0;
    const double g11 = inner(sig, e1, e1), g12 = inner(sig, e1, e2), g22 = inner(sig, e2, e2);
    const double det = g11 * g22 - g12 * g12;
    const double scale = euclid_inner(e1, e1) * euclid_inner(e2, e2);
    const int ftype = det > 0 ? 0 : 1;
    if (mesh.tags[f].causal == CausalClass::Lightlike || std::abs(det) <= degenerate_tol * scale) {
      if (mesh.tags[f].causal != CausalClass::Lightlike) ++rep.excluded_degenerate;
      for (auto i : t) skip[i] = true;
      continue;
    }
    for (auto i : t) {
      if (type[i] >= 0 && type[i] != ftype) skip[i] = true;
      type[i] = ftype;
    }
    const double area = 0.5 * std::sqrt(std::abs(det));
    // Inverse Gram matrix, gradients of the barycentric functions s, t.
    const double i11 = g22 / det, i12 = -g12 / det, i22 = g11 / det;
    const double d[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double k = area * (d[a][0] * (i11 * d[b][0] + i12 * d[b][1]) + d[a][1] * (i12 * d[b][0] + i22 * d[b][1]));
        lap[t[a]] += k * mesh.vertices[t[b]];
      }
      mass[t[a]] += area / 3.0;
    }
  }
  const auto bnd = boundary_vertices(mesh);
  rep.residual.assign(nv, std::numeric_limits<double>::quiet_NaN());
  double sum2 = 0.0;
  for (std::size_t i = 0; i < nv; ++i) {
    if (bnd[i] || skip[i] || mass[i] == 0.0) continue;
    const double r = norm(lap[i]) / (2.0 * mass[i]);
    rep.residual[i] = r;
    rep.max = std::max(rep.max, r);
    sum2 += r * r;
    ++rep.evaluated;
  }
  if (rep.evaluated) rep.rms = std::sqrt(sum2 / rep.evaluated);
  return rep;
}

}  // namespace tpzmc
