#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over a real interval for
// scalar, complex and vector-valued integrands, plus fixed Gauss-Legendre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"

namespace tpzmc {

inline double quad_norm(double x) { return std::abs(x); }
inline double quad_norm(const cplx& x) { return std::abs(x); }
inline double quad_norm(const Vec3& x) { return std::max({std::abs(x.c0), std::abs(x.c1), std::abs(x.c2)}); }
inline double quad_norm(const CVec3& x) { return x.max_abs(); }

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_intervals = 4000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double lo, hi;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const T fc = f(c);
  T kron = kWgk[7] * fc;
  T gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {lo, hi, kron, quad_norm(kron - gauss)};
}

}  // namespace detail

/// Integrates f over [lo, hi]. Throws QuadratureError carrying the worst panel
/// when the interval budget runs out before the tolerance is met.
template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, double lo, double hi, const QuadOptions& opt = {}) {
  QuadResult<T> out;
  if (lo == hi) return out;
  std::priority_queue<detail::Panel<T>> heap;
  auto first = detail::gk15<T>(f, lo, hi);
  out.evaluations = 15;
  T total = first.value;
  double err = first.error;
  heap.push(first);
  int intervals = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * quad_norm(total))) {
    if (intervals >= opt.max_intervals) {
      const auto& worst = heap.top();
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: error " << err << " after " << intervals
          << " panels, worst panel [" << worst.lo << ", " << worst.hi << "]";
      throw QuadratureError(msg.str(), worst.lo, worst.hi, worst.error);
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    auto left = detail::gk15<T>(f, worst.lo, mid);
    auto right = detail::gk15<T>(f, mid, worst.hi);
    out.evaluations += 30;
    total -= worst.value;
    total += left.value;
    total += right.value;
    heap.push(left);
    heap.push(right);
    ++intervals;
    err += left.error + right.error - worst.error;
    if (intervals % 64 == 0) {
      err = 0.0;
      auto copy = heap;
      for (; !copy.empty(); copy.pop()) err += copy.top().error;
    }
  }
  // Re-sum the panel values to shed accumulated cancellation in `total`.
  T resum{};
  while (!heap.empty()) {
    resum += heap.top().value;
    heap.pop();
  }
  out.value = resum;
  out.error = err;
  return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Fixed-order Gauss-Legendre on [lo, hi].
template <class T, class F>
T integrate_fixed(F&& f, double lo, double hi, const GaussLegendreRule& rule) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += (rule.weights[i] * h) * f(c + h * rule.nodes[i]);
  return acc;
}

}  // namespace tpzmc
