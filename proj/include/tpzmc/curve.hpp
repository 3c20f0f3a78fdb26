#pragma once

// Hyperelliptic curves w^2 = p(z) with p given by its (simple) roots, sheet
// tracking along polyline contours, and contour integration of 1-forms
// F(z, w) dz, including contours that end at a branch point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/quadrature.hpp"

namespace tpzmc {

enum class CurveKind {
  SchwarzH,  // w^2 = z (z^3 + a^3)(z^3 + a^-3)
  RPD,       // w^2 = z (z^3 - a^3)(z^3 + a^-3)
  Planar,    // no square root: w == 1, possibly punctured
};

struct SheetPoint {
  cplx z;
  cplx w;
};

/// Polyline contour. Only the final waypoint may sit on a branch point, and
/// then `end_at_branch` must be set; the integrand's 1/sqrt singularity there
/// is removed by the substitution z = z_b + tau^2.
struct PathSpec {
  std::vector<cplx> waypoints;
  int refine = 1;
  bool end_at_branch = false;
};

class HyperellipticCurve {
 public:
  static HyperellipticCurve schwarz_h(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw Error(ErrorKind::Parameter, "schwarz-h curve needs a > 0");
    const double b = 1.0 / a;
    std::vector<cplx> roots = {0.0,
                               std::polar(a, kPi / 3), cplx(-a, 0.0), std::polar(a, -kPi / 3),
                               std::polar(b, kPi / 3), cplx(-b, 0.0), std::polar(b, -kPi / 3)};
    return HyperellipticCurve(CurveKind::SchwarzH, a, std::move(roots), {});
  }

  static HyperellipticCurve rpd(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Parameter, "rpd curve needs a > 0");
    const double b = 1.0 / a;
    std::vector<cplx> roots = {0.0,
                               cplx(a, 0.0), std::polar(a, 2 * kPi / 3), std::polar(a, -2 * kPi / 3),
                               std::polar(b, kPi / 3), cplx(-b, 0.0), std::polar(b, -kPi / 3)};
    return HyperellipticCurve(CurveKind::RPD, a, std::move(roots), {});
  }

  /// The plane (or sphere) minus `punctures`; w is identically 1.
  static HyperellipticCurve planar(std::vector<cplx> punctures = {}) {
    return HyperellipticCurve(CurveKind::Planar, 0.0, {}, std::move(punctures));
  }

  CurveKind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool is_planar() const { return kind_ == CurveKind::Planar; }

  /// Finite branch points (roots of p). Infinity is a branch point as well
  /// whenever deg p is odd.
  const std::vector<cplx>& branch_points() const { return roots_; }
  bool branched_at_infinity() const { return roots_.size() % 2 == 1; }
  const std::vector<cplx>& punctures() const { return punctures_; }

  double guard_radius() const { return guard_; }

  cplx p(cplx z) const {
    if (is_planar()) return 1.0;
    cplx r = 1.0;
    for (const cplx& e : roots_) r *= (z - e);
    return r;
  }

  /// p(z) / (z - e_k), evaluated as a product so it stays accurate at e_k.
  cplx p_deflated(cplx z, std::size_t k) const {
    cplx r = 1.0;
    for (std::size_t i = 0; i < roots_.size(); ++i)
      if (i != k) r *= (z - roots_[i]);
    return r;
  }

  std::optional<std::size_t> branch_index_near(cplx z, double radius) const {
    for (std::size_t i = 0; i < roots_.size(); ++i)
      if (std::abs(z - roots_[i]) <= radius) return i;
    return std::nullopt;
  }

  /// Points every contour must keep clear of: branch points and punctures.
  std::vector<cplx> obstacles() const {
    std::vector<cplx> out = roots_;
    out.insert(out.end(), punctures_.begin(), punctures_.end());
    return out;
  }

  /// Sheet value +sqrt(p(z)) with the principal square root.
  cplx principal_w(cplx z) const { return is_planar() ? cplx(1.0) : std::sqrt(p(z)); }

  bool on_curve(const SheetPoint& pt, double tol = 1e-10) const {
    const cplx pz = p(pt.z);
    return std::abs(pt.w * pt.w - pz) <= tol * (1.0 + std::abs(pz));
  }

 private:
  HyperellipticCurve(CurveKind kind, double param, std::vector<cplx> roots, std::vector<cplx> punctures)
      : kind_(kind), param_(param), roots_(std::move(roots)), punctures_(std::move(punctures)) {
    const auto pts = obstacles();
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
    if (!roots_.empty() && dmin <= 1e-12) {
      std::ostringstream msg;
      msg << "degenerate curve: colliding roots of p (min distance " << dmin << ") at parameter " << param;
      throw Error(ErrorKind::DegenerateCurve, msg.str());
    }
    guard_ = std::isfinite(dmin) ? 1e-3 * dmin : 0.0;
  }

  CurveKind kind_;
  double param_;
  std::vector<cplx> roots_;
  std::vector<cplx> punctures_;
  double guard_ = 0.0;
};

/// Branch points of the curve. Throws DegenerateCurve at a degeneration
/// (construction already refuses those, this is the public name).
inline std::vector<cplx> branch_points(const HyperellipticCurve& curve) { return curve.branch_points(); }

/// Distance from point q to the segment [a, b].
inline double segment_distance(cplx q, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(q - a);
  const double t = std::clamp(((q - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(q - (a + t * d));
}

/// Builds a PathSpec, flagging (and snapping) a final waypoint that coincides
/// with a branch point.
inline PathSpec make_path(const HyperellipticCurve& curve, std::vector<cplx> waypoints, int refine = 1) {
  PathSpec path{std::move(waypoints), refine, false};
  if (!path.waypoints.empty() && !curve.is_planar()) {
    cplx& last = path.waypoints.back();
    if (auto k = curve.branch_index_near(last, 1e-12 * (1.0 + std::abs(last)))) {
      last = curve.branch_points()[*k];
      path.end_at_branch = true;
    }
  }
  return path;
}

/// Checks the PathSpec invariants against the curve; returns the index of
/// the terminal branch point when the path ends on one.
inline std::optional<std::size_t> validate_path(const HyperellipticCurve& curve, const PathSpec& path) {
  if (path.waypoints.empty()) throw Error(ErrorKind::Precondition, "path has no waypoints");
  const auto& wp = path.waypoints;
  for (std::size_t i = 0; i + 1 < wp.size(); ++i)
    if (wp[i] == wp[i + 1]) throw Error(ErrorKind::Precondition, "path has repeated consecutive waypoints");

  std::optional<std::size_t> end_branch;
  if (path.end_at_branch) {
    end_branch = curve.branch_index_near(wp.back(), curve.guard_radius());
    if (!end_branch) throw Error(ErrorKind::Precondition, "path flagged as ending at a branch point but does not");
    if (wp.size() < 2) throw Error(ErrorKind::Precondition, "path may not start at a branch point");
  }

  const double guard = curve.guard_radius();
  const auto roots = curve.branch_points();
  auto check = [&](cplx q, bool allow_terminal) {
    for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
      const bool last_seg = i + 2 == wp.size();
      if (allow_terminal && last_seg) {
        // The terminal segment may only approach q at its end point.
        const cplx a = wp[i], b = wp[i + 1];
        const double len = std::abs(b - a);
        const cplx cut = b - (b - a) * std::min(0.5, 2.0 * guard / len);
        if (segment_distance(q, a, cut) < guard) return false;
        continue;
      }
      if (segment_distance(q, wp[i], wp[i + 1]) < guard) return false;
    }
    if (wp.size() == 1 && std::abs(q - wp[0]) < guard) return false;
    return true;
  };
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const bool terminal = end_branch && *end_branch == k;
    if (!check(roots[k], terminal)) {
      std::ostringstream msg;
      msg << "path passes within the guard radius " << guard << " of branch point " << roots[k];
      throw Error(ErrorKind::ContinuationAmbiguity, msg.str());
    }
  }
  for (const cplx& q : curve.punctures())
    if (!check(q, false)) {
      std::ostringstream msg;
      msg << "path passes within the guard radius of puncture " << q;
      throw Error(ErrorKind::ContinuationAmbiguity, msg.str());
    }
  return end_branch;
}

namespace detail {

/// Samples of a continuous branch of sqrt(H(t)) on t in [0, 1].
struct RootTrack {
  std::vector<double> t;
  std::vector<cplx> v;

  /// The root (+-root) closest to the interpolated tracked value at t.
  cplx pick(double x, cplx root) const {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t k = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    if (k + 1 >= t.size()) k = t.size() >= 2 ? t.size() - 2 : 0;
    cplx ref = v[k];
    if (t.size() >= 2) {
      const double span = t[k + 1] - t[k];
      ref = v[k] + (v[k + 1] - v[k]) * ((x - t[k]) / span);
    }
    return std::abs(root - ref) <= std::abs(-root - ref) ? root : -root;
  }
};

/// Nearest-root continuation of sqrt(H) starting from v0; the step is halved
/// until each accepted step changes the value by less than half its modulus.
template <class H>
RootTrack track_root(H&& h2, cplx v0, int min_steps) {
  RootTrack tr;
  tr.t.push_back(0.0);
  tr.v.push_back(v0);
  const double max_step = 1.0 / std::max(1, min_steps);
  double s = 0.0, ds = max_step;
  cplx v = v0;
  while (s < 1.0) {
    const double t = std::min(1.0, s + ds);
    const cplx r = std::sqrt(h2(t));
    const cplx cand = std::abs(r - v) <= std::abs(-r - v) ? r : -r;
    if (std::abs(cand - v) < 0.5 * std::abs(v)) {
      s = t;
      v = cand;
      tr.t.push_back(s);
      tr.v.push_back(v);
      ds = std::min(max_step, 2.0 * ds);
    } else {
      ds *= 0.5;
      if (ds < 1e-13) throw Error(ErrorKind::ContinuationAmbiguity, "sheet continuation step underflow");
    }
  }
  return tr;
}

}  // namespace detail

/// Continues w along the path from w0 at the first waypoint and returns the
/// refined sample sequence. For a path ending at a branch point the last
/// sample is (z_b, 0).
inline std::vector<SheetPoint> continue_sheet(const HyperellipticCurve& curve, const PathSpec& path, cplx w0) {
  const auto end_branch = validate_path(curve, path);
  const auto& wp = path.waypoints;
  std::vector<SheetPoint> out;
  if (curve.is_planar()) {
    for (const cplx& z : wp) out.push_back({z, 1.0});
    return out;
  }
  if (!curve.on_curve({wp[0], w0}, 1e-8))
    throw Error(ErrorKind::Precondition, "w0 is not a square root of p at the path start");
  out.push_back({wp[0], w0});
  cplx w = w0;
  const int steps = 8 * std::max(1, path.refine);
  for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
    const cplx za = wp[i], zb = wp[i + 1];
    const bool branch_seg = end_branch && i + 2 == wp.size();
    if (!branch_seg) {
      auto tr = detail::track_root([&](double t) { return curve.p(za + (zb - za) * t); }, w, steps);
      for (std::size_t k = 1; k < tr.t.size(); ++k) out.push_back({za + (zb - za) * tr.t[k], tr.v[k]});
      w = tr.v.back();
    } else {
      const std::size_t ib = *end_branch;
      auto tr = detail::track_root(
          [&](double t) {
            const double sg = 1.0 - t;
            return (za - zb) * curve.p_deflated(zb + (za - zb) * (sg * sg), ib);
          },
          w, steps);
      for (std::size_t k = 1; k + 1 < tr.t.size(); ++k) {
        const double sg = 1.0 - tr.t[k];
        out.push_back({zb + (za - zb) * (sg * sg), sg * tr.v[k]});
      }
      out.push_back({zb, 0.0});
      w = 0.0;
    }
  }
  return out;
}

/// Continued sheet values at each waypoint of a path that avoids branch points.
inline std::vector<SheetPoint> sheet_at_waypoints(const HyperellipticCurve& curve, const std::vector<cplx>& waypoints,
                                                  cplx w0, int refine = 1) {
  std::vector<SheetPoint> out;
  if (waypoints.empty()) return out;
  out.push_back({waypoints[0], curve.is_planar() ? cplx(1.0) : w0});
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const auto seg = continue_sheet(curve, PathSpec{{waypoints[i], waypoints[i + 1]}, refine, false}, out.back().w);
    out.push_back(seg.back());
  }
  return out;
}

/// Contour integral of the 1-form F(z, w) dz along the path, starting on the
/// sheet w0. `form` returns the dz-coefficient as a complex 3-vector.
template <class Form>
CVec3 integrate_form(const HyperellipticCurve& curve, const PathSpec& path, cplx w0, Form&& form,
                     const QuadOptions& opt = {}, cplx* w_end = nullptr) {
  const auto end_branch = validate_path(curve, path);
  const auto& wp = path.waypoints;
  CVec3 total{};
  const std::size_t nseg = wp.size() - 1;
  QuadOptions seg_opt = opt;
  seg_opt.abs_tol = opt.abs_tol / std::max<std::size_t>(1, nseg);

  auto checked = [](const CVec3& v) {
    if (!v.finite()) throw Error(ErrorKind::Pole, "integrand is not finite on the path (pole of the form)");
    return v;
  };

  if (curve.is_planar()) {
    for (std::size_t i = 0; i < nseg; ++i) {
      const cplx za = wp[i], dz = wp[i + 1] - za;
      auto f = [&](double t) { return checked(form(za + dz * t, cplx(1.0))) * dz; };
      total += integrate_adaptive<CVec3>(f, 0.0, 1.0, seg_opt).value;
    }
    if (w_end) *w_end = 1.0;
    return total;
  }

  if (!curve.on_curve({wp[0], w0}, 1e-8))
    throw Error(ErrorKind::Precondition, "w0 is not a square root of p at the path start");
  cplx w = w0;
  const int steps = 8 * std::max(1, path.refine);
  for (std::size_t i = 0; i < nseg; ++i) {
    const cplx za = wp[i], zb = wp[i + 1], dz = zb - za;
    const bool branch_seg = end_branch && i + 1 == nseg;
    if (!branch_seg) {
      auto tr = detail::track_root([&](double t) { return curve.p(za + dz * t); }, w, steps);
      auto f = [&](double t) {
        const cplx z = za + dz * t;
        const cplx wz = tr.pick(t, std::sqrt(curve.p(z)));
        return checked(form(z, wz)) * dz;
      };
      total += integrate_adaptive<CVec3>(f, 0.0, 1.0, seg_opt).value;
      w = tr.v.back();
    } else {
      // z = z_b + (z_a - z_b) sg^2 with sg = 1 - t, w = sg h, h^2 = (z_a - z_b) q(z).
      const std::size_t ib = *end_branch;
      const cplx d = za - zb;
      auto h2 = [&](double t) {
        const double sg = 1.0 - t;
        return d * curve.p_deflated(zb + d * (sg * sg), ib);
      };
      auto tr = detail::track_root(h2, w, steps);
      auto f = [&](double t) {
        const double sg = 1.0 - t;
        const cplx z = zb + d * (sg * sg);
        const cplx h = tr.pick(t, std::sqrt(h2(t)));
        return checked(form(z, sg * h)) * (-2.0 * sg * d);
      };
      total += integrate_adaptive<CVec3>(f, 0.0, 1.0, seg_opt).value;
      w = 0.0;
    }
  }
  if (w_end) *w_end = w;
  return total;
}

/// Closed polyline approximating a circle (used for puncture and monodromy loops).
inline std::vector<cplx> circle_waypoints(cplx center, double radius, int n, double phase = 0.0) {
  std::vector<cplx> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) out.push_back(center + std::polar(radius, phase + 2 * kPi * (k % n) / n));
  return out;
}

}  // namespace tpzmc
