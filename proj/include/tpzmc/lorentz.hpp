#pragma once

// Vector/matrix arithmetic shared by the Lorentzian (-dx0^2 + dx1^2 + dx2^2)
// and Euclidean branches. The metric is chosen per operation, not per type.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

namespace tpzmc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Vec3 {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? c0 : (i == 1 ? c1 : c2); }
  constexpr double& operator[](int i) { return i == 0 ? c0 : (i == 1 ? c1 : c2); }

  constexpr Vec3& operator+=(const Vec3& o) { c0 += o.c0; c1 += o.c1; c2 += o.c2; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { c0 -= o.c0; c1 -= o.c1; c2 -= o.c2; return *this; }
  constexpr Vec3& operator*=(double s) { c0 *= s; c1 *= s; c2 *= s; return *this; }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.c0, -a.c1, -a.c2}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.c0 / s, a.c1 / s, a.c2 / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  bool finite() const { return std::isfinite(c0) && std::isfinite(c1) && std::isfinite(c2); }
};

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.c0 << ", " << v.c1 << ", " << v.c2 << ')';
}

/// Complex 3-vector: values of the Weierstrass integrand Phi.
struct CVec3 {
  cplx c0{}, c1{}, c2{};

  CVec3& operator+=(const CVec3& o) { c0 += o.c0; c1 += o.c1; c2 += o.c2; return *this; }
  CVec3& operator-=(const CVec3& o) { c0 -= o.c0; c1 -= o.c1; c2 -= o.c2; return *this; }
  CVec3& operator*=(cplx s) { c0 *= s; c1 *= s; c2 *= s; return *this; }

  friend CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
  friend CVec3 operator-(CVec3 a, const CVec3& b) { return a -= b; }
  friend CVec3 operator-(const CVec3& a) { return {-a.c0, -a.c1, -a.c2}; }
  friend CVec3 operator*(cplx s, CVec3 a) { return a *= s; }
  friend CVec3 operator*(CVec3 a, cplx s) { return a *= s; }
  friend CVec3 operator*(double s, CVec3 a) { return a *= cplx(s); }

  Vec3 real() const { return {c0.real(), c1.real(), c2.real()}; }
  Vec3 imag() const { return {c0.imag(), c1.imag(), c2.imag()}; }
  CVec3 conj() const { return {std::conj(c0), std::conj(c1), std::conj(c2)}; }
  double max_abs() const { return std::max({std::abs(c0), std::abs(c1), std::abs(c2)}); }
  bool finite() const {
    return std::isfinite(c0.real()) && std::isfinite(c0.imag()) && std::isfinite(c1.real()) &&
           std::isfinite(c1.imag()) && std::isfinite(c2.real()) && std::isfinite(c2.imag());
  }
};

/// Row-major 3x3 real matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static constexpr Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static constexpr Mat3 diag(double a, double b, double c) { return {{a, 0, 0, 0, b, 0, 0, 0, c}}; }

  constexpr double operator()(int r, int c) const { return m[3 * r + c]; }
  constexpr double& operator()(int r, int c) { return m[3 * r + c]; }

  friend constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.c0 + a(0, 1) * v.c1 + a(0, 2) * v.c2,
            a(1, 0) * v.c0 + a(1, 1) * v.c1 + a(1, 2) * v.c2,
            a(2, 0) * v.c0 + a(2, 1) * v.c1 + a(2, 2) * v.c2};
  }
  friend CVec3 operator*(const Mat3& a, const CVec3& v) {
    return {a(0, 0) * v.c0 + a(0, 1) * v.c1 + a(0, 2) * v.c2,
            a(1, 0) * v.c0 + a(1, 1) * v.c1 + a(1, 2) * v.c2,
            a(2, 0) * v.c0 + a(2, 1) * v.c1 + a(2, 2) * v.c2};
  }
  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend constexpr Mat3 operator*(double s, Mat3 a) {
    for (double& x : a.m) x *= s;
    return a;
  }

  constexpr Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  constexpr double det() const {
    const auto& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }

  double max_abs_diff(const Mat3& o) const {
    double d = 0.0;
    for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(m[i] - o.m[i]));
    return d;
  }
};

inline constexpr double minkowski_inner(const Vec3& u, const Vec3& v) {
  return -u.c0 * v.c0 + u.c1 * v.c1 + u.c2 * v.c2;
}

inline constexpr double euclid_inner(const Vec3& u, const Vec3& v) {
  return u.c0 * v.c0 + u.c1 * v.c1 + u.c2 * v.c2;
}

inline double norm(const Vec3& v) { return std::sqrt(euclid_inner(v, v)); }

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.c1 * b.c2 - a.c2 * b.c1, a.c2 * b.c0 - a.c0 * b.c2, a.c0 * b.c1 - a.c1 * b.c0};
}

/// Metric signature of the ambient space.
enum class Signature { Lorentzian, Euclidean };

inline constexpr double inner(Signature s, const Vec3& u, const Vec3& v) {
  return s == Signature::Lorentzian ? minkowski_inner(u, v) : euclid_inner(u, v);
}

/// diag(-1, 1, 1): maps Euclidean normals to Lorentzian normals and back.
inline constexpr Mat3 kLorentzJ = Mat3::diag(-1.0, 1.0, 1.0);

enum class CausalClass { Spacelike, Timelike, Lightlike };

inline const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Lightlike: return "lightlike";
  }
  return "?";
}

inline CausalClass causal_classify(const Vec3& v, double tol) {
  const double q = minkowski_inner(v, v);
  if (std::abs(q) <= tol) return CausalClass::Lightlike;
  return q < 0.0 ? CausalClass::Timelike : CausalClass::Spacelike;
}

/// Causal type of the plane spanned by e1, e2, from the sign of its
/// Lorentzian Gram determinant (positive: spacelike). `rel_tol` is relative
/// to |e1|^2 |e2|^2 measured in the Euclidean norm.
inline CausalClass plane_causal_class(const Vec3& e1, const Vec3& e2, double rel_tol) {
  const double g11 = minkowski_inner(e1, e1), g22 = minkowski_inner(e2, e2),
               g12 = minkowski_inner(e1, e2);
  const double det = g11 * g22 - g12 * g12;
  const double scale = euclid_inner(e1, e1) * euclid_inner(e2, e2);
  if (std::abs(det) <= rel_tol * scale) return CausalClass::Lightlike;
  return det > 0.0 ? CausalClass::Spacelike : CausalClass::Timelike;
}

/// Max entry of |M^T G M - G| for the metric G of the given signature.
inline double isometry_defect(const Mat3& mat, Signature s) {
  const Mat3 g = s == Signature::Lorentzian ? kLorentzJ : Mat3::identity();
  return (mat.transpose() * g * mat).max_abs_diff(g);
}

}  // namespace tpzmc
