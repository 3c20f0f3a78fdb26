#pragma once

// Self-intersection diagnostic: spatial-hash broad phase over triangle
// bounding boxes and an edge-against-triangle narrow phase.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tpzmc/lorentz.hpp"
#include "tpzmc/mesh.hpp"

namespace tpzmc {

struct IntersectionReport {
  std::size_t count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> samples;  // face index pairs
};

namespace detail {

using Tri = std::array<Vec3, 3>;

/// Segment pq against triangle t (Moller-Trumbore), endpoints included.
inline bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Tri& t, double eps) {
  const Vec3 d = q - p;
  const Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0];
  const Vec3 h = cross(d, e2);
  const double det = euclid_inner(e1, h);
  if (std::abs(det) <= eps * norm(d) * norm(e1) * norm(e2)) return false;
  const double inv = 1.0 / det;
  const Vec3 s = p - t[0];
  const double u = inv * euclid_inner(s, h);
  if (u < -eps || u > 1.0 + eps) return false;
  const Vec3 qv = cross(s, e1);
  const double v = inv * euclid_inner(d, qv);
  if (v < -eps || u + v > 1.0 + eps) return false;
  const double r = inv * euclid_inner(e2, qv);
  return r >= -eps && r <= 1.0 + eps;
}

inline double orient2(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

/// Overlap of two coplanar triangles, projected along the dominant normal axis.
inline bool coplanar_overlap(const Tri& a, const Tri& b, const Vec3& n) {
  int drop = 0;
  if (std::abs(n.c1) > std::abs(n[drop])) drop = 1;
  if (std::abs(n.c2) > std::abs(n[drop])) drop = 2;
  const int i0 = drop == 0 ? 1 : 0, i1 = drop == 2 ? 1 : 2;
  auto P = [&](const Vec3& v) { return std::array<double, 2>{v[i0], v[i1]}; };
  std::array<std::array<double, 2>, 3> A, B;
  for (int k = 0; k < 3; ++k) {
    A[k] = P(a[k]);
    B[k] = P(b[k]);
  }
  auto seg = [&](const std::array<double, 2>& p1, const std::array<double, 2>& p2, const std::array<double, 2>& q1,
                 const std::array<double, 2>& q2) {
    const double d1 = orient2(q1[0], q1[1], q2[0], q2[1], p1[0], p1[1]);
    const double d2 = orient2(q1[0], q1[1], q2[0], q2[1], p2[0], p2[1]);
    const double d3 = orient2(p1[0], p1[1], p2[0], p2[1], q1[0], q1[1]);
    const double d4 = orient2(p1[0], p1[1], p2[0], p2[1], q2[0], q2[1]);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (seg(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3])) return true;
  auto inside = [&](const std::array<double, 2>& p, const std::array<std::array<double, 2>, 3>& T) {
    const double s0 = orient2(T[0][0], T[0][1], T[1][0], T[1][1], p[0], p[1]);
    const double s1 = orient2(T[1][0], T[1][1], T[2][0], T[2][1], p[0], p[1]);
    const double s2 = orient2(T[2][0], T[2][1], T[0][0], T[0][1], p[0], p[1]);
    return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
  };
  return inside(A[0], B) || inside(B[0], A);
}

}  // namespace detail

/// True when two triangles share at least one point.
inline bool triangles_intersect(const detail::Tri& a, const detail::Tri& b, double eps = 1e-12) {
  const Vec3 n = cross(a[1] - a[0], a[2] - a[0]);
  const double nn = norm(n);
  if (nn == 0.0) return false;
  double scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, norm(v - a[0]));
  bool coplanar = true;
  for (const auto& v : b) coplanar = coplanar && std::abs(euclid_inner(v - a[0], n)) <= eps * nn * (scale + norm(v - a[0]));
  if (coplanar) return detail::coplanar_overlap(a, b, n);
  for (int i = 0; i < 3; ++i) {
    if (detail::segment_hits_triangle(a[i], a[(i + 1) % 3], b, eps)) return true;
    if (detail::segment_hits_triangle(b[i], b[(i + 1) % 3], a, eps)) return true;
  }
  return false;
}

/// Counts intersecting pairs of faces that share no vertex.
inline IntersectionReport self_intersection_report(const TaggedMesh& m, std::size_t max_samples = 10) {
  validate(m);
  IntersectionReport rep;
  if (m.faces.size() < 2) return rep;
  double edge = 0.0;
  for (const auto& f : m.faces)
    for (int e = 0; e < 3; ++e) edge += norm(m.vertices[f[(e + 1) % 3]] - m.vertices[f[e]]);
  const double cell = std::max(2.0 * edge / (3.0 * m.faces.size()), 1e-12);
  std::unordered_map<detail::CellKey, std::vector<std::uint32_t>, detail::CellHash> grid;
  std::vector<std::pair<detail::CellKey, detail::CellKey>> boxes(m.faces.size());
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    Vec3 lo = m.vertices[m.faces[f][0]], hi = lo;
    for (auto i : m.faces[f])
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], m.vertices[i][k]);
        hi[k] = std::max(hi[k], m.vertices[i][k]);
      }
    const auto a = detail::cell_of(lo, cell), b = detail::cell_of(hi, cell);
    boxes[f] = {a, b};
    for (auto x = a.x; x <= b.x; ++x)
      for (auto y = a.y; y <= b.y; ++y)
        for (auto z = a.z; z <= b.z; ++z) grid[{x, y, z}].push_back(static_cast<std::uint32_t>(f));
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> tested;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    const auto [a, b] = boxes[f];
    const detail::Tri tf = {m.vertices[m.faces[f][0]], m.vertices[m.faces[f][1]], m.vertices[m.faces[f][2]]};
    for (auto x = a.x; x <= b.x; ++x)
      for (auto y = a.y; y <= b.y; ++y)
        for (auto z = a.z; z <= b.z; ++z)
          for (auto g : grid[{x, y, z}]) {
            if (g <= f) continue;
            bool adjacent = false;
            for (auto i : m.faces[f])
              for (auto j : m.faces[g]) adjacent = adjacent || i == j;
            if (adjacent || !tested.insert({static_cast<std::uint32_t>(f), g}).second) continue;
            const detail::Tri tg = {m.vertices[m.faces[g][0]], m.vertices[m.faces[g][1]], m.vertices[m.faces[g][2]]};
            if (triangles_intersect(tf, tg)) {
              ++rep.count;
              if (rep.samples.size() < max_samples) rep.samples.push_back({f, g});
            }
          }
  }
  return rep;
}

}  // namespace tpzmc
