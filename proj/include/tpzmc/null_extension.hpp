#pragma once

// Null curves, the timelike extension f*(u,v) = (gamma(u+v) + gamma(u-v)) / 2
// across a fold, the upper fold curve sigma, and the reflected spacelike
// re-extension.

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/quadrature.hpp"
#include "tpzmc/weierstrass.hpp"

namespace tpzmc {

inline void require_unit_interval(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    std::ostringstream msg;
    msg << "parameter a = " << a << " outside (0, 1)";
    throw Error(ErrorKind::Parameter, msg.str());
  }
}

/// Speed of the Schwarz-H null curve: 2 / sqrt(2 cos 3t + a^3 + a^-3).
inline double xi(double t, double a) {
  require_unit_interval(a);
  const double k = a * a * a + 1.0 / (a * a * a);
  return 2.0 / std::sqrt(2.0 * std::cos(3.0 * t) + k);
}

inline double xi_prime(double t, double a) {
  require_unit_interval(a);
  const double k = a * a * a + 1.0 / (a * a * a);
  const double r = 2.0 * std::cos(3.0 * t) + k;
  return 6.0 * std::sin(3.0 * t) / (r * std::sqrt(r));
}

/// Speed of sigma, defined as xi shifted by pi.
inline double xi_hat(double s, double a) { return xi(s + kPi, a); }

/// The same quantity written with cos(3s + 3pi) = -cos 3s.
inline double xi_hat_closed(double s, double a) {
  require_unit_interval(a);
  const double k = a * a * a + 1.0 / (a * a * a);
  return 2.0 / std::sqrt(k - 2.0 * std::cos(3.0 * s));
}

/// Reflection relating sigma' and gamma'.
inline Mat3 matrix_A() {
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  return Mat3{{1, 0, 0, 0, -c, -s, 0, -s, c}};
}

/// A curve s -> gamma(s) given by its velocity, with gamma(0) = 0. Values are
/// tabulated on a uniform grid of cumulative 10-point Gauss-Legendre cell
/// integrals; a query adds the partial cell with the same rule.
class NullCurve {
 public:
  using Field = std::function<Vec3(double)>;

  NullCurve(Field velocity, Field acceleration, double s_min, double s_max, double h = kPi / 3000)
      : vel_(std::move(velocity)), acc_(std::move(acceleration)), h_(h), rule_(gauss_legendre(10)) {
    if (!(s_min <= 0.0 && s_max >= 0.0 && h > 0.0)) throw Error(ErrorKind::Parameter, "null curve table must contain 0");
    n_lo_ = static_cast<long>(std::ceil(-s_min / h_ - 1e-9));
    const long n_hi = static_cast<long>(std::ceil(s_max / h_ - 1e-9));
    table_.assign(n_lo_ + n_hi + 1, Vec3{});
    for (long k = n_lo_ + 1; k < static_cast<long>(table_.size()); ++k)
      table_[k] = table_[k - 1] + cell(node(k - 1), node(k));
    for (long k = n_lo_ - 1; k >= 0; --k) table_[k] = table_[k + 1] - cell(node(k), node(k + 1));
  }

  /// Schwarz-H null curve: velocity (1, -cos t, -sin t) xi(t).
  static NullCurve schwarz_h(double a, double h = kPi / 3000) {
    require_unit_interval(a);
    auto v = [a](double t) { return Vec3{1.0, -std::cos(t), -std::sin(t)} * xi(t, a); };
    auto acc = [a](double t) {
      return Vec3{1.0, -std::cos(t), -std::sin(t)} * xi_prime(t, a) + Vec3{0.0, std::sin(t), -std::cos(t)} * xi(t, a);
    };
    NullCurve c(v, acc, -3.0 * kPi, 3.0 * kPi, h);
    c.param_ = a;
    return c;
  }

  double parameter() const { return param_; }
  double spacing() const { return h_; }
  double s_min() const { return node(0); }
  double s_max() const { return node(static_cast<long>(table_.size()) - 1); }

  Vec3 velocity(double s) const { return vel_(s); }
  Vec3 acceleration(double s) const { return acc_(s); }

  Vec3 operator()(double s) const {
    if (s < s_min() - 1e-12 || s > s_max() + 1e-12) {
      std::ostringstream msg;
      msg << "null curve evaluated at s = " << s << " outside its table [" << s_min() << ", " << s_max() << "]";
      throw Error(ErrorKind::Parameter, msg.str());
    }
    long k = static_cast<long>(std::floor((s - s_min()) / h_));
    k = std::clamp<long>(k, 0, static_cast<long>(table_.size()) - 2);
    const double sk = node(k);
    if (s == sk) return table_[k];
    return table_[k] + cell(sk, s);
  }

 private:
  double node(long k) const { return (k - n_lo_) * h_; }

  Vec3 cell(double lo, double hi) const { return integrate_fixed<Vec3>(vel_, lo, hi, rule_); }

  Field vel_, acc_;
  double h_;
  GaussLegendreRule rule_;
  long n_lo_ = 0;
  std::vector<Vec3> table_;
  double param_ = 0.0;
};

/// f*(u, v) = (gamma(u + v) + gamma(u - v)) / 2.
inline Vec3 timelike_extend(const NullCurve& g, double u, double v) { return 0.5 * (g(u + v) + g(u - v)); }

inline Vec3 timelike_extend_du(const NullCurve& g, double u, double v) {
  return 0.5 * (g.velocity(u + v) + g.velocity(u - v));
}

inline Vec3 timelike_extend_dv(const NullCurve& g, double u, double v) {
  return 0.5 * (g.velocity(u + v) - g.velocity(u - v));
}

/// Upper fold curve sigma(s) = f*(s, pi).
inline Vec3 sigma(const NullCurve& g, double s) { return timelike_extend(g, s, kPi); }

inline Vec3 sigma_prime(const NullCurve& g, double s) { return timelike_extend_du(g, s, kPi); }

/// The translation c* for which sigma(s) = -A gamma(pi/3 - s) + c*, which
/// follows from integrating sigma'(s) = A gamma'(pi/3 - s) from 0.
inline Vec3 translation_c(const NullCurve& g) { return sigma(g, 0.0) + matrix_A() * g(kPi / 3); }

/// The same constant written through f*: f*(0, pi) + A f*(pi/3, 0).
inline Vec3 translation_c_via_extension(const NullCurve& g) {
  return timelike_extend(g, 0.0, kPi) + matrix_A() * timelike_extend(g, kPi / 3, 0.0);
}

/// sigma(0) - A gamma(pi/3): the constant in the form sigma(s) = A gamma(pi/3 - s) + c.
inline Vec3 translation_c_as_printed(const NullCurve& g) { return sigma(g, 0.0) - matrix_A() * g(kPi / 3); }

inline Vec3 translation_c_as_printed_via_extension(const NullCurve& g) {
  return timelike_extend(g, 0.0, kPi) - matrix_A() * timelike_extend(g, kPi / 3, 0.0);
}

/// f_hat(z) = -A f(z) + c, the spacelike piece continuing past sigma.
inline Vec3 spacelike_reextend(const WeierstrassData& data, const PathSpec& path, const Vec3& c) {
  return -(matrix_A() * surface_point(data, path)) + c;
}

inline Vec3 spacelike_reextend_point(const Vec3& f, const Vec3& c) { return -(matrix_A() * f) + c; }

struct NullCheck {
  bool nondegenerate = false;
  bool ill_conditioned = false;
  double sine = 0.0;  // sine of the angle between gamma' and gamma''
  double speed = 0.0;
};

/// Rank-2 test of [gamma', gamma''] via the sine of the angle between them.
inline NullCheck nondegenerate_null_check(const Vec3& d1, const Vec3& d2, double tol = 1e-9) {
  NullCheck out;
  out.speed = norm(d1);
  const double n2 = norm(d2);
  if (out.speed == 0.0 || n2 == 0.0) {
    out.ill_conditioned = true;
    return out;
  }
  out.sine = norm(cross(d1, d2)) / (out.speed * n2);
  out.nondegenerate = out.sine > tol;
  out.ill_conditioned = out.speed >= 1e4 || n2 >= 1e8 || out.sine < 1e3 * tol;
  return out;
}

inline NullCheck nondegenerate_null_check(const NullCurve& g, double s, double tol = 1e-9) {
  return nondegenerate_null_check(g.velocity(s), g.acceleration(s), tol);
}

/// Samples of f* on the (nu+1) x (nv+1) grid over [0, pi/3] x [0, pi].
struct ExtensionPatch {
  int nu = 0, nv = 0;
  std::vector<Vec3> values;  // row-major in v, then u
  Vec3 at(int i, int j) const { return values[static_cast<std::size_t>(j) * (nu + 1) + i]; }
};

inline ExtensionPatch sample_extension(const NullCurve& g, int nu, int nv, double u_max = kPi / 3, double v_max = kPi) {
  ExtensionPatch p;
  p.nu = nu;
  p.nv = nv;
  for (int j = 0; j <= nv; ++j)
    for (int i = 0; i <= nu; ++i) p.values.push_back(timelike_extend(g, u_max * i / nu, v_max * j / nv));
  return p;
}

}  // namespace tpzmc
