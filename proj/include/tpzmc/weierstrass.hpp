#pragma once

// Weierstrass integrands for maxfaces in L^3 and minimal surfaces in R^3,
// surface points as real parts of contour integrals, and period vectors.

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tpzmc/curve.hpp"
#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/quadrature.hpp"

namespace tpzmc {

/// Gauss map g, its derivative, and the dz-coefficient of eta (which may
/// involve the sheet value w), living on a hyperelliptic or planar curve.
struct WeierstrassData {
  Signature signature = Signature::Lorentzian;
  HyperellipticCurve curve = HyperellipticCurve::planar();
  std::function<cplx(cplx)> g;
  std::function<cplx(cplx)> dg;
  std::function<cplx(cplx, cplx)> eta;
  cplx base_z = 0.0;
  cplx base_w = 1.0;
  QuadOptions quad{1e-13, 1e-13, 4000};
};

inline CVec3 phi_lorentz(cplx g, cplx e) {
  const cplx i(0.0, 1.0);
  return {-2.0 * g * e, (1.0 + g * g) * e, i * (1.0 - g * g) * e};
}

inline CVec3 phi_euclid(cplx g, cplx e) {
  const cplx i(0.0, 1.0);
  return {(1.0 - g * g) * e, i * (1.0 + g * g) * e, 2.0 * g * e};
}

namespace detail {

inline void require_finite(cplx v, const char* what, cplx z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream msg;
    msg << what << " has a pole at z = " << z;
    throw Error(ErrorKind::Pole, msg.str());
  }
}

}  // namespace detail

inline CVec3 phi_lorentz(const WeierstrassData& data, const SheetPoint& p) {
  const cplx e = data.eta(p.z, p.w);
  detail::require_finite(e, "eta", p.z);
  const cplx g = data.g(p.z);
  detail::require_finite(g, "g", p.z);
  return phi_lorentz(g, e);
}

inline CVec3 phi_euclid(const WeierstrassData& data, const SheetPoint& p) {
  const cplx e = data.eta(p.z, p.w);
  detail::require_finite(e, "eta", p.z);
  const cplx g = data.g(p.z);
  detail::require_finite(g, "g", p.z);
  return phi_euclid(g, e);
}

/// Integrand for the data's own signature.
inline CVec3 phi(const WeierstrassData& data, const SheetPoint& p) {
  return data.signature == Signature::Lorentzian ? phi_lorentz(data, p) : phi_euclid(data, p);
}

/// Complex integral of Phi along `path` starting on sheet w0.
inline CVec3 integrate_phi(const WeierstrassData& data, const PathSpec& path, cplx w0, cplx* w_end = nullptr) {
  const bool lorentz = data.signature == Signature::Lorentzian;
  auto form = [&](cplx z, cplx w) {
    const cplx e = data.eta(z, w);
    const cplx g = data.g(z);
    return lorentz ? phi_lorentz(g, e) : phi_euclid(g, e);
  };
  return integrate_form(data.curve, path, w0, form, data.quad, w_end);
}

/// f = Re of the integral of Phi from the base point along `path`.
inline Vec3 surface_point(const WeierstrassData& data, const PathSpec& path, cplx* w_end = nullptr) {
  if (path.waypoints.empty() || (path.waypoints.size() == 1 && path.waypoints[0] == data.base_z)) {
    if (w_end) *w_end = data.base_w;
    return {};
  }
  if (std::abs(path.waypoints.front() - data.base_z) > 1e-12 * (1.0 + std::abs(data.base_z)))
    throw Error(ErrorKind::Precondition, "surface path must start at the base point");
  return integrate_phi(data, path, data.base_w, w_end).real();
}

/// Re of the closed-contour integral. The contour must close on the curve:
/// same z at both ends and the continued sheet value returns to w0.
inline Vec3 period_vector(const WeierstrassData& data, const PathSpec& cycle, std::optional<cplx> w0 = std::nullopt) {
  const auto& wp = cycle.waypoints;
  if (wp.size() < 2 || std::abs(wp.front() - wp.back()) > 1e-12 * (1.0 + std::abs(wp.front())))
    throw Error(ErrorKind::NotACycle, "contour is not closed in z");
  if (cycle.end_at_branch) throw Error(ErrorKind::NotACycle, "a cycle may not end at a branch point");
  const cplx start = w0 ? *w0 : data.curve.principal_w(wp.front());
  cplx end = start;
  const CVec3 total = integrate_phi(data, cycle, start, &end);
  if (std::abs(end - start) > 1e-8 * (1.0 + std::abs(start))) {
    std::ostringstream msg;
    msg << "contour returns on the other sheet (w " << start << " -> " << end << ")";
    throw Error(ErrorKind::NotACycle, msg.str());
  }
  return total.real();
}

/// Closed polyline around the segment [b1, b2] at distance r.
inline std::vector<cplx> stadium_waypoints(cplx b1, cplx b2, double r, int arc_segments = 12) {
  const cplx u = (b2 - b1) / std::abs(b2 - b1);
  std::vector<cplx> out;
  // Around b2 from -pi/2 to pi/2, then around b1 from pi/2 to 3pi/2 (relative to u).
  for (int k = 0; k <= arc_segments; ++k) {
    const double th = -kPi / 2 + kPi * k / arc_segments;
    out.push_back(b2 + r * u * std::polar(1.0, th));
  }
  for (int k = 0; k <= arc_segments; ++k) {
    const double th = kPi / 2 + kPi * k / arc_segments;
    out.push_back(b1 + r * u * std::polar(1.0, th));
  }
  out.push_back(out.front());
  return out;
}

struct Cycle {
  std::string label;
  PathSpec path;
};

/// Spanning set of closed contours. Hyperelliptic: stadiums enclosing exactly
/// two finite branch points (every pair whose segment stays clear of the
/// others). Planar: small circles around each puncture.
inline std::vector<Cycle> homology_cycles(const HyperellipticCurve& curve) {
  std::vector<Cycle> out;
  if (curve.is_planar()) {
    const auto& pu = curve.punctures();
    for (std::size_t i = 0; i < pu.size(); ++i) {
      double d = 1.0;
      for (std::size_t j = 0; j < pu.size(); ++j)
        if (j != i) d = std::min(d, std::abs(pu[i] - pu[j]));
      const double r = 0.3 * d;
      auto wp = circle_waypoints(pu[i], r, 24);
      std::ostringstream label;
      label << "puncture " << i;
      out.push_back({label.str(), PathSpec{std::move(wp), 1, false}});
    }
    return out;
  }
  const auto& br = curve.branch_points();
  for (std::size_t i = 0; i < br.size(); ++i)
    for (std::size_t j = i + 1; j < br.size(); ++j) {
      const double len = std::abs(br[j] - br[i]);
      double clear = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < br.size(); ++k)
        if (k != i && k != j) clear = std::min(clear, segment_distance(br[k], br[i], br[j]));
      if (clear < 0.2 * len) continue;
      const double r = std::min(0.3 * len, 0.4 * clear);
      std::ostringstream label;
      label << "pair " << i << '-' << j;
      out.push_back({label.str(), PathSpec{stadium_waypoints(br[i], br[j], r), 2, false}});
    }
  return out;
}

/// Period vectors over homology_cycles of the data's curve.
inline std::vector<Vec3> periods(const WeierstrassData& data, std::vector<std::string>* labels = nullptr) {
  std::vector<Vec3> out;
  for (const auto& c : homology_cycles(data.curve)) {
    out.push_back(period_vector(data, c.path));
    if (labels) labels->push_back(c.label);
  }
  return out;
}

}  // namespace tpzmc
