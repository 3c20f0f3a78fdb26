#pragma once

// The fundamental piece of the Schwarz-H-type ZMC surface (maxface sector,
// timelike strip, reflected maxface sector), its boundary lines and planes,
// the group generated by the boundary symmetries, and assembly of copies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "tpzmc/error.hpp"
#include "tpzmc/families.hpp"
#include "tpzmc/lattice.hpp"
#include "tpzmc/lorentz.hpp"
#include "tpzmc/mesh.hpp"
#include "tpzmc/null_extension.hpp"
#include "tpzmc/weierstrass.hpp"

namespace tpzmc {

struct LineFit {
  Vec3 point;
  Vec3 direction;       // Euclidean unit vector
  double residual = 0;  // max distance of a sample to the line
  std::size_t samples = 0;
};

struct PlaneFit {
  Vec3 point;
  Vec3 normal;          // Euclidean unit normal
  double residual = 0;  // max distance of a sample to the plane
  CausalClass causal = CausalClass::Spacelike;
  std::size_t samples = 0;
};

namespace detail {

inline Eigen::JacobiSVD<Eigen::MatrixXd> centered_svd(const std::vector<Vec3>& pts, Vec3& centroid) {
  if (pts.size() < 3) throw Error(ErrorKind::Precondition, "a fit needs at least three samples");
  centroid = {};
  for (const auto& p : pts) centroid += p;
  centroid = centroid / static_cast<double>(pts.size());
  Eigen::MatrixXd m(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - centroid;
    m.row(i) << d.c0, d.c1, d.c2;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m, Eigen::ComputeThinV);
}

inline Vec3 column(const Eigen::MatrixXd& v, int j) { return {v(0, j), v(1, j), v(2, j)}; }

}  // namespace detail

/// Least-squares line through the samples.
inline LineFit fit_line(const std::vector<Vec3>& pts) {
  LineFit fit;
  const auto svd = detail::centered_svd(pts, fit.point);
  fit.direction = detail::column(svd.matrixV(), 0);
  fit.samples = pts.size();
  for (const auto& p : pts) {
    const Vec3 d = p - fit.point;
    fit.residual = std::max(fit.residual, norm(d - euclid_inner(d, fit.direction) * fit.direction));
  }
  return fit;
}

/// Least-squares plane through the samples; its causal type is read from the
/// two in-plane singular directions.
inline PlaneFit fit_plane(const std::vector<Vec3>& pts, double causal_tol = 1e-9) {
  PlaneFit fit;
  const auto svd = detail::centered_svd(pts, fit.point);
  fit.normal = detail::column(svd.matrixV(), 2);
  fit.samples = pts.size();
  for (const auto& p : pts) fit.residual = std::max(fit.residual, std::abs(euclid_inner(p - fit.point, fit.normal)));
  fit.causal = plane_causal_class(detail::column(svd.matrixV(), 0), detail::column(svd.matrixV(), 1), causal_tol);
  return fit;
}

/// Boundary of the fundamental piece: two straight lines, each made of three
/// arcs (maxface, timelike strip edge, reflected maxface), and two planar
/// curves.
struct FundamentalBoundary {
  double a = 0;
  Vec3 translation;  // c with f_hat = -A f + c
  std::vector<Vec3> line1, line2, planar1, planar2;
  LineFit line1_fit, line2_fit;
  PlaneFit plane1_fit, plane2_fit;
};

inline FundamentalBoundary fundamental_boundary(double a, int samples = 48) {
  require_unit_interval(a);
  if (samples < 4) throw Error(ErrorKind::Parameter, "boundary sampling needs at least 4 samples per arc");
  const auto fam = schwarz_h_zmc(a);
  const auto& data = fam.data;
  const auto gamma = NullCurve::schwarz_h(a);
  FundamentalBoundary b;
  b.a = a;
  b.translation = translation_c(gamma);
  const Vec3 c = b.translation;
  auto f = [&](double r, double th) { return surface_point(data, make_path(data.curve, sector_waypoints(r, th))); };
  auto hat = [&](const Vec3& x) { return spacelike_reextend_point(x, c); };
  const double t3 = kPi / 3;
  for (int i = 0; i <= samples; ++i) {
    const double s = double(i) / samples;
    const double outer = a + (1.0 - a) * s, inner = a * s;
    b.line1.push_back(f(s, 0.0));
    b.line1.push_back(timelike_extend(gamma, 0.0, kPi * s));
    b.line1.push_back(hat(f(outer, t3)));
    b.line2.push_back(f(outer, t3));
    b.line2.push_back(timelike_extend(gamma, t3, kPi * s));
    b.line2.push_back(hat(f(s, 0.0)));
    b.planar1.push_back(f(inner, t3));
    b.planar2.push_back(hat(b.planar1.back()));
  }
  b.line1_fit = fit_line(b.line1);
  b.line2_fit = fit_line(b.line2);
  b.plane1_fit = fit_plane(b.planar1);
  b.plane2_fit = fit_plane(b.planar2);
  return b;
}

struct PieceOptions {
  double weld_tol = 1e-7;
  double guard = 0.05;  // parametric width of the Lightlike band along each fold
  QuadOptions quad{};
};

struct FundamentalPiece {
  TaggedMesh mesh;
  double gap_gamma = 0;  // maxface circle vs strip edge v = 0
  double gap_sigma = 0;  // reflected circle vs strip edge v = pi
  Vec3 translation;
  std::vector<double> radii;
  std::size_t seam_vertices = 0;
};

/// Propagates a common orientation across shared edges, component by
/// component. Returns the number of edges that stay inconsistent.
inline std::size_t orient_consistently(TaggedMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::size_t>> by_edge;
  for (std::size_t f = 0; f < m.faces.size(); ++f)
    for (int e = 0; e < 3; ++e) {
      auto u = m.faces[f][e], v = m.faces[f][(e + 1) % 3];
      by_edge[{std::min(u, v), std::max(u, v)}].push_back(f);
    }
  auto has_directed = [&](std::size_t f, std::uint32_t u, std::uint32_t v) {
    for (int e = 0; e < 3; ++e)
      if (m.faces[f][e] == u && m.faces[f][(e + 1) % 3] == v) return true;
    return false;
  };
  std::vector<char> seen(m.faces.size(), 0);
  for (std::size_t root = 0; root < m.faces.size(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t f = q.front();
      q.pop();
      for (int e = 0; e < 3; ++e) {
        const auto u = m.faces[f][e], v = m.faces[f][(e + 1) % 3];
        const auto& nb = by_edge[{std::min(u, v), std::max(u, v)}];
        if (nb.size() != 2) continue;
        const std::size_t g = nb[0] == f ? nb[1] : nb[0];
        if (seen[g]) continue;
        if (has_directed(g, u, v)) std::swap(m.faces[g][1], m.faces[g][2]);
        seen[g] = 1;
        q.push(g);
      }
    }
  }
  std::size_t bad = 0;
  for (const auto& [e, fs] : by_edge)
    if (fs.size() == 2 && has_directed(fs[0], e.first, e.second) == has_directed(fs[1], e.first, e.second)) ++bad;
  return bad;
}

/// Edges shared by two faces that traverse them in the same direction.
inline std::size_t orientation_conflicts(const TaggedMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& f : m.faces)
    for (int e = 0; e < 3; ++e) ++directed[{f[e], f[(e + 1) % 3]}];
  std::size_t bad = 0;
  for (const auto& [e, n] : directed)
    if (n > 1) bad += n - 1;
  return bad;
}

/// Samples the three patches of the fundamental piece and welds them along
/// the fold curves. The maxface sector uses a polar grid with radii
/// sin(pi/2 * i/n) (dense near the fold) and the radius a inserted; every
/// vertex value is accumulated segment by segment from the base point z = 1.
/// Faces with a vertex within `guard` of a fold (1 - |z| or the distance of v
/// to 0 and pi) are tagged Lightlike.
inline FundamentalPiece sample_fundamental_piece(double a, int n_radial, int n_angular, int n_u, int n_v,
                                                 const PieceOptions& opt = {}) {
  require_unit_interval(a);
  if (std::min({n_radial, n_angular, n_u, n_v}) < 8) throw Error(ErrorKind::Parameter, "resolutions must be >= 8");
  if (n_u != n_angular)
    throw Error(ErrorKind::Precondition, "the strip's u resolution must match the sector's angular resolution");
  auto fam = schwarz_h_zmc(a);
  fam.data.quad = opt.quad;
  const auto& data = fam.data;
  const auto& curve = data.curve;
  const auto gamma = NullCurve::schwarz_h(a);
  FundamentalPiece out;
  out.translation = translation_c(gamma);

  std::vector<double> r(n_radial + 1);
  for (int i = 0; i <= n_radial; ++i) r[i] = std::sin(0.5 * kPi * i / n_radial);
  r[n_radial] = 1.0;
  {
    int best = 1;
    for (int i = 1; i < n_radial; ++i)
      if (std::abs(r[i] - a) < std::abs(r[best] - a)) best = i;
    r[best] = a;
  }
  out.radii = r;
  const double t3 = kPi / 3;

  // grid[i][j]: value at r_i e^{i theta_j}; ring 0 is the single point z = 0.
  std::vector<std::vector<Vec3>> grid(n_radial + 1, std::vector<Vec3>(n_angular + 1));
  auto step = [&](cplx z0, cplx z1, cplx& w) {
    cplx w1;
    const Vec3 d = integrate_phi(data, make_path(curve, {z0, z1}), w, &w1).real();
    w = w1;
    return d;
  };
  Vec3 axis_val{};
  cplx axis_w = data.base_w;
  for (int i = n_radial; i >= 1; --i) {
    if (i < n_radial) axis_val += step(r[i + 1], r[i], axis_w);
    Vec3 v = axis_val;
    cplx w = axis_w;
    grid[i][0] = v;
    for (int j = 0; j < n_angular; ++j) {
      v += step(std::polar(r[i], t3 * j / n_angular), std::polar(r[i], t3 * (j + 1) / n_angular), w);
      grid[i][j + 1] = v;
    }
  }
  {
    cplx w = axis_w;
    const Vec3 center = axis_val + step(r[1], 0.0, w);
    for (auto& v : grid[0]) v = center;
  }

  TaggedMesh& m = out.mesh;

  auto add_sector = [&](Patch patch, bool reflected) {
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    m.add_vertex(reflected ? spacelike_reextend_point(grid[0][0], out.translation) : grid[0][0]);
    for (int i = 1; i <= n_radial; ++i)
      for (int j = 0; j <= n_angular; ++j)
        m.add_vertex(reflected ? spacelike_reextend_point(grid[i][j], out.translation) : grid[i][j]);
    auto id = [&](int i, int j) {
      return i == 0 ? base : base + 1 + static_cast<std::uint32_t>((i - 1) * (n_angular + 1) + j);
    };
    FaceTag tag{CausalClass::Spacelike, patch, 0};
    for (int i = 0; i < n_radial; ++i)
      for (int j = 0; j < n_angular; ++j) {
        FaceTag t = tag;
        if (1.0 - r[i + 1] < opt.guard) t.causal = CausalClass::Lightlike;
        if (i == 0) {
          m.add_face(id(0, 0), id(1, j), id(1, j + 1), t);
        } else {
          m.add_face(id(i, j), id(i + 1, j), id(i + 1, j + 1), t);
          m.add_face(id(i, j), id(i + 1, j + 1), id(i, j + 1), t);
        }
      }
  };
  const auto max_base = static_cast<std::uint32_t>(m.vertices.size());
  add_sector(Patch::Max, false);
  const auto hat_base = static_cast<std::uint32_t>(m.vertices.size());
  add_sector(Patch::MaxHat, true);
  auto ring = [&](std::uint32_t base, int j) {
    return base + 1 + static_cast<std::uint32_t>((n_radial - 1) * (n_angular + 1) + j);
  };

  // Seams: f(e^{it}) against f*(t, 0) and f_hat(e^{it}) against f*(pi/3 - t, pi).
  // They are glued by index; the fold rows of the sector grid may sit closer
  // together than any weld tolerance.
  std::vector<std::uint32_t> sid_table((n_u + 1) * (n_v + 1));
  for (int j = 0; j <= n_v; ++j)
    for (int i = 0; i <= n_u; ++i) {
      const Vec3 x = timelike_extend(gamma, t3 * i / n_u, kPi * j / n_v);
      std::uint32_t id;
      if (j == 0) {
        id = ring(max_base, i);
        out.gap_gamma = std::max(out.gap_gamma, norm(m.vertices[id] - x));
      } else if (j == n_v) {
        id = ring(hat_base, n_angular - i);
        out.gap_sigma = std::max(out.gap_sigma, norm(m.vertices[id] - x));
      } else {
        id = static_cast<std::uint32_t>(m.add_vertex(x));
      }
      sid_table[j * (n_u + 1) + i] = id;
    }
  const double gap = std::max(out.gap_gamma, out.gap_sigma);
  if (gap > opt.weld_tol) {
    std::ostringstream msg;
    msg << "fold seams of the fundamental piece do not meet: max gap " << gap << " > weld tolerance " << opt.weld_tol;
    throw GlueError(msg.str(), gap);
  }
  auto sid = [&](int i, int j) { return sid_table[j * (n_u + 1) + i]; };
  for (int j = 0; j < n_v; ++j)
    for (int i = 0; i < n_u; ++i) {
      FaceTag t{CausalClass::Timelike, Patch::Min, 0};
      if (std::min(kPi * (j + 1) / n_v, kPi - kPi * j / n_v) < opt.guard) t.causal = CausalClass::Lightlike;
      m.add_face(sid(i, j), sid(i + 1, j), sid(i + 1, j + 1), t);
      m.add_face(sid(i, j), sid(i + 1, j + 1), sid(i, j + 1), t);
    }
  out.seam_vertices = 2 * static_cast<std::size_t>(n_u + 1);
  orient_consistently(m);
  return out;
}

enum class SymmetryKind { Identity, PlaneReflection, LineRotation, LatticeTranslation, Composite };

inline const char* to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Identity: return "identity";
    case SymmetryKind::PlaneReflection: return "plane_reflection";
    case SymmetryKind::LineRotation: return "line_rotation";
    case SymmetryKind::LatticeTranslation: return "lattice_translation";
    case SymmetryKind::Composite: return "composite";
  }
  return "?";
}

/// Affine isometry x -> linear x + translation. `word` lists the generators
/// applied, first to last.
struct SymmetryOp {
  Mat3 linear = Mat3::identity();
  Vec3 translation;
  SymmetryKind kind = SymmetryKind::Identity;
  std::vector<int> word;

  Vec3 apply(const Vec3& x) const { return linear * x + translation; }
  bool flips_orientation() const { return word.size() % 2 == 1; }

  /// this after other.
  SymmetryOp after(const SymmetryOp& other) const {
    SymmetryOp r;
    r.linear = linear * other.linear;
    r.translation = linear * other.translation + translation;
    r.word = other.word;
    r.word.insert(r.word.end(), word.begin(), word.end());
    r.kind = r.word.empty() ? SymmetryKind::Identity : SymmetryKind::Composite;
    return r;
  }

  double distance(const SymmetryOp& o) const {
    return std::max(linear.max_abs_diff(o.linear), norm(translation - o.translation));
  }
};

namespace detail {

inline Mat3 outer(const Vec3& u, const Vec3& v) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
  return m;
}

inline Mat3 sub(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
  return r;
}

}  // namespace detail

/// Half-turn about the line through p with (non-null) direction d.
inline SymmetryOp line_rotation(const Vec3& p, const Vec3& d) {
  const double dd = minkowski_inner(d, d);
  if (std::abs(dd) < 1e-12 * euclid_inner(d, d)) throw Error(ErrorKind::Precondition, "rotation axis is lightlike");
  SymmetryOp op;
  op.linear = detail::sub((2.0 / dd) * detail::outer(d, kLorentzJ * d), Mat3::identity());
  op.translation = p - op.linear * p;
  op.kind = SymmetryKind::LineRotation;
  return op;
}

/// Lorentzian reflection in the plane through p with Euclidean normal n.
inline SymmetryOp plane_reflection(const Vec3& p, const Vec3& n) {
  const Vec3 nl = kLorentzJ * n;  // <nl, x>_L = n . x
  const double nn = minkowski_inner(nl, nl);
  if (std::abs(nn) < 1e-12 * euclid_inner(n, n)) throw Error(ErrorKind::Precondition, "reflection plane is lightlike");
  SymmetryOp op;
  op.linear = detail::sub(Mat3::identity(), (2.0 / nn) * detail::outer(nl, n));
  op.translation = p - op.linear * p;
  op.kind = SymmetryKind::PlaneReflection;
  return op;
}

/// Reflections in the two planar-curve planes and half-turns about the two
/// boundary lines, in that order.
inline std::vector<SymmetryOp> boundary_generators(const FundamentalBoundary& b) {
  std::vector<SymmetryOp> g = {plane_reflection(b.plane1_fit.point, b.plane1_fit.normal),
                               plane_reflection(b.plane2_fit.point, b.plane2_fit.normal),
                               line_rotation(b.line1_fit.point, b.line1_fit.direction),
                               line_rotation(b.line2_fit.point, b.line2_fit.direction)};
  for (int i = 0; i < 4; ++i) g[i].word = {i};
  return g;
}

/// All distinct words of length <= depth in the generators, breadth first.
inline std::vector<SymmetryOp> generate_group(const std::vector<SymmetryOp>& gens, int depth, double tol = 1e-8) {
  if (depth < 0) throw Error(ErrorKind::Parameter, "depth must be >= 0");
  std::vector<SymmetryOp> all = {SymmetryOp{}};
  std::vector<std::size_t> frontier = {0};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::size_t> next;
    for (auto idx : frontier)
      for (const auto& g : gens) {
        SymmetryOp cand = g.after(all[idx]);
        if (cand.word.size() == 1) cand.kind = g.kind;
        bool dup = false;
        for (const auto& e : all)
          if (e.distance(cand) <= tol) {
            dup = true;
            break;
          }
        if (dup) continue;
        all.push_back(std::move(cand));
        next.push_back(all.size() - 1);
      }
    frontier = std::move(next);
  }
  return all;
}

inline std::vector<SymmetryOp> symmetry_group(const FundamentalBoundary& b, int depth) {
  return generate_group(boundary_generators(b), depth);
}

inline std::vector<SymmetryOp> symmetry_group(double a, int depth) {
  return symmetry_group(fundamental_boundary(a), depth);
}

/// Index of the element equal to op within tol, or -1.
inline std::ptrdiff_t find_op(const std::vector<SymmetryOp>& ops, const SymmetryOp& op, double tol = 1e-8) {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (ops[i].distance(op) <= tol) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

/// Pure translations in the group, as lattice-translation ops.
inline std::vector<SymmetryOp> group_translations(const std::vector<SymmetryOp>& ops, double tol = 1e-8) {
  std::vector<SymmetryOp> out;
  for (const auto& op : ops)
    if (op.linear.max_abs_diff(Mat3::identity()) <= tol && norm(op.translation) > tol) {
      out.push_back(op);
      out.back().kind = SymmetryKind::LatticeTranslation;
    }
  return out;
}

/// Lattice spanned by the translations among words of length <= depth.
inline PeriodLattice translation_lattice(const std::vector<SymmetryOp>& ops, double tol = 1e-6) {
  std::vector<Vec3> t;
  for (const auto& op : group_translations(ops)) t.push_back(op.translation);
  if (t.empty()) return PeriodLattice{};
  return lattice_detect(t, tol);
}

/// The six copies generated by the two planar-curve reflections.
struct TriangularUnit {
  std::vector<SymmetryOp> ops;
  double closure_defect = 0;  // |(P1 P2)^3 - id|
  double rotation_angle = 0;  // of P1 P2 about its axis
  Vec3 axis_direction;
  Vec3 axis_point;
};

inline TriangularUnit triangular_unit(const FundamentalBoundary& b) {
  const auto g = boundary_generators(b);
  TriangularUnit u;
  u.ops = generate_group({g[0], g[1]}, 3);
  const SymmetryOp rot = g[0].after(g[1]);
  const SymmetryOp cube = rot.after(rot).after(rot);
  u.closure_defect = cube.distance(SymmetryOp{});
  const double tr = rot.linear(0, 0) + rot.linear(1, 1) + rot.linear(2, 2);
  u.rotation_angle = std::acos(std::clamp(0.5 * (tr - 1.0), -1.0, 1.0));
  // Axis: the common line of the two planes.
  u.axis_direction = cross(b.plane1_fit.normal, b.plane2_fit.normal);
  u.axis_direction = u.axis_direction / norm(u.axis_direction);
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  const Vec3 n1 = b.plane1_fit.normal, n2 = b.plane2_fit.normal, d = u.axis_direction;
  m << n1.c0, n1.c1, n1.c2, n2.c0, n2.c1, n2.c2, d.c0, d.c1, d.c2;
  rhs << euclid_inner(n1, b.plane1_fit.point), euclid_inner(n2, b.plane2_fit.point), 0.0;
  const Eigen::Vector3d p = m.colPivHouseholderQr().solve(rhs);
  u.axis_point = {p[0], p[1], p[2]};
  return u;
}

struct AssemblyOptions {
  double weld_tol = 1e-7;
};

/// Union of op(piece) over ops, tagged with the op index as copy id. Copies
/// made by an odd word are flipped so orientation stays consistent.
/// Coincident vertices are welded and repeated faces dropped.
inline TaggedMesh assemble(const TaggedMesh& piece, const std::vector<SymmetryOp>& ops, const AssemblyOptions& opt = {},
                           WeldStats* stats = nullptr) {
  validate(piece);
  TaggedMesh out;
  std::vector<std::int32_t> group;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& op = ops[k];
    if (isometry_defect(op.linear, Signature::Lorentzian) > 1e-12) {
      std::ostringstream msg;
      msg << "symmetry op " << k << " is not a Lorentzian isometry";
      throw Error(ErrorKind::Precondition, msg.str());
    }
    TaggedMesh copy;
    copy.vertices.reserve(piece.vertices.size());
    for (const auto& v : piece.vertices) copy.vertices.push_back(op.apply(v));
    copy.faces = piece.faces;
    copy.tags = piece.tags;
    for (std::size_t f = 0; f < copy.faces.size(); ++f) {
      if (op.flips_orientation()) std::swap(copy.faces[f][1], copy.faces[f][2]);
      copy.tags[f].copy = static_cast<std::int32_t>(k);
    }
    out.append(copy);
    group.resize(out.vertices.size(), static_cast<std::int32_t>(k));
  }
  const auto st = weld(out, opt.weld_tol, &group);
  if (stats) *stats = st;
  return out;
}

struct InvarianceReport {
  double max_distance = 0;
  std::size_t checked = 0;
};

/// For each translation T and each copy k whose translate T op_k is also a
/// copy, every vertex of copy k moved by T must have a partner in the mesh.
inline InvarianceReport lattice_invariance(const TaggedMesh& mesh, const std::vector<SymmetryOp>& ops,
                                           const std::vector<Vec3>& translations, double search = 1e-3) {
  InvarianceReport rep;
  PointGrid grid(search);
  for (std::uint32_t i = 0; i < mesh.vertices.size(); ++i) grid.insert(mesh.vertices[i], i);
  std::vector<std::vector<std::uint32_t>> by_copy(ops.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto k = static_cast<std::size_t>(mesh.tags[f].copy);
    if (k < ops.size()) by_copy[k].insert(by_copy[k].end(), mesh.faces[f].begin(), mesh.faces[f].end());
  }
  for (const auto& t : translations)
    for (double sgn : {1.0, -1.0}) {
      SymmetryOp shift;
      shift.translation = sgn * t;
      shift.word = {0, 0};
      for (std::size_t k = 0; k < ops.size(); ++k) {
        if (find_op(ops, shift.after(ops[k])) < 0) continue;
        for (auto v : by_copy[k]) {
          const double d = grid.nearest_distance(mesh.vertices[v] + sgn * t, 1);
          rep.max_distance = std::max(rep.max_distance, d);
          ++rep.checked;
        }
      }
    }
  return rep;
}

/// Fraction of faces outside the guard band whose tag matches the causal type
/// of the face plane.
inline double causal_agreement(const TaggedMesh& mesh, double rel_tol = 1e-9) {
  std::size_t n = 0, ok = 0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.tags[f].causal == CausalClass::Lightlike) continue;
    const auto& t = mesh.faces[f];
    const Vec3 x0 = mesh.vertices[t[0]];
    ++n;
    ok += plane_causal_class(mesh.vertices[t[1]] - x0, mesh.vertices[t[2]] - x0, rel_tol) == mesh.tags[f].causal;
  }
  return n ? double(ok) / n : 1.0;
}

}  // namespace tpzmc
