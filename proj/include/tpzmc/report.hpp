#pragma once

// Verification suites and the versioned JSON report they feed.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "tpzmc/assembly.hpp"
#include "tpzmc/config.hpp"
#include "tpzmc/families.hpp"
#include "tpzmc/lattice.hpp"
#include "tpzmc/maxface.hpp"
#include "tpzmc/null_extension.hpp"
#include "tpzmc/weierstrass.hpp"

namespace tpzmc {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "tpzmc.report/1";

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// residual <= threshold; NaN never passes.
inline Check at_most(std::string name, double residual, double threshold) {
  return {std::move(name), residual, threshold, residual <= threshold};
}

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  ojson details = ojson::object();

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check& check(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return c;
    throw Error(ErrorKind::Precondition, "no check named " + n);
  }
};

inline ojson to_json(const Check& c) {
  return {{"name", c.name}, {"residual", c.residual}, {"threshold", c.threshold}, {"pass", c.pass}};
}

inline ojson to_json(const SuiteResult& s) {
  ojson checks = ojson::array();
  for (const auto& c : s.checks) checks.push_back(to_json(c));
  return {{"suite", s.name}, {"pass", s.pass()}, {"checks", checks}, {"details", s.details}};
}

inline ojson to_json(const Vec3& v) { return ojson::array({v.c0, v.c1, v.c2}); }

inline ojson to_json(const std::vector<Vec3>& vs) {
  ojson out = ojson::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

namespace detail {

inline void require_family(const RunConfig& c, FamilyTag want, const char* suite) {
  if (*family_from_name(c.family) != want)
    throw Error(ErrorKind::Precondition,
                std::string("suite ") + suite + " applies to family " + family_name(want) + ", not " + c.family);
}

inline std::vector<SheetPoint> unit_circle(const FamilySpec& f, int n) {
  // Planar families puncture the circle at roots of unity, so shift off them.
  const double phase = f.data.curve.is_planar() ? 0.5 : 0.0;
  std::vector<cplx> wp;
  for (int k = 0; k < n; ++k) wp.push_back(std::polar(1.0, 2 * kPi * (k + phase) / n));
  if (f.data.curve.is_planar()) {
    std::vector<SheetPoint> out;
    for (auto z : wp) out.push_back({z, 1.0});
    return out;
  }
  return sheet_at_waypoints(f.data.curve, wp, f.data.base_w);
}

inline std::optional<int> expected_rank(FamilyTag t) {
  switch (t) {
    case FamilyTag::SchwarzHZmc:
    case FamilyTag::RPD:
    case FamilyTag::SchwarzH_R3: return 3;
    case FamilyTag::KarcherTower: return 1;
    case FamilyTag::KarcherMaxface:
    case FamilyTag::ScherkZmcGraph: return 0;
    case FamilyTag::SchwarzHZmcConjugate: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Singular set |z| = 1 consists of folds: Re(dg / (g^2 eta)) = 0 there.
inline SuiteResult suite_folds(const RunConfig& c) {
  const auto tag = *family_from_name(c.family);
  if (tag != FamilyTag::SchwarzHZmc && tag != FamilyTag::SchwarzHZmcConjugate && tag != FamilyTag::KarcherMaxface &&
      tag != FamilyTag::ScherkZmcGraph)
    throw Error(ErrorKind::Precondition, "suite folds needs a Lorentzian family, not " + c.family);
  const auto fam = family_of(c);
  const int n = 360;
  double sing = 0.0, fold = 0.0;
  int degenerate = 0, non_fold = 0;
  for (const auto& p : detail::unit_circle(fam, n)) {
    sing = std::max(sing, std::abs(singular_residual(fam.data, p)));
    if (!nondegenerate_singular(fam.data, p)) {
      ++degenerate;
      continue;
    }
    const double r = std::abs(fold_residual(fam.data, p));
    fold = std::max(fold, r);
    non_fold += r > 1e-10;
  }
  SuiteResult s;
  s.name = "folds";
  s.checks.push_back(at_most("singular_set_on_unit_circle", sing, 1e-10));
  s.checks.push_back(at_most("degenerate_singular_points", degenerate, 0));
  s.checks.push_back(at_most("fold_residual_max", fold, 1e-10));
  s.details = {{"points", n}, {"non_fold_points", non_fold}};
  return s;
}

/// The three pushforward identities of the Schwarz-H symmetries on random curve points.
inline SuiteResult suite_symmetry(const RunConfig& c) {
  detail::require_family(c, FamilyTag::SchwarzHZmc, "symmetry");
  const auto fam = family_of(c);
  const auto& d = fam.data;
  const double c3 = std::cos(kPi / 3), s3 = std::sin(kPi / 3);
  const Mat3 m1 = Mat3::diag(-1, -1, 1);
  const Mat3 m2{{1, 0, 0, 0, -c3, s3, 0, s3, c3}};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double e1 = 0, e2 = 0, e3 = 0;
  int n = 0;
  while (n < 100) {
    const cplx z(u(rng), u(rng));
    if (std::abs(d.curve.p(z)) < 1e-3 || std::abs(z) < 1e-2) continue;
    const cplx w = d.curve.principal_w(z);
    const CVec3 conj_phi = phi(d, {z, w}).conj();
    const cplx zb = std::conj(z), wb = std::conj(w);
    const cplx rot = std::polar(1.0, 2 * kPi / 3);
    const double scale = 1.0 + conj_phi.max_abs();
    e1 = std::max(e1, (phi(d, {zb, wb}) - m1 * conj_phi).max_abs() / scale);
    e2 = std::max(e2, (phi(d, {rot * zb, std::polar(1.0, kPi / 3) * wb}) * rot - m2 * conj_phi).max_abs() / scale);
    e3 = std::max(e3, (phi(d, {1.0 / zb, wb / (zb * zb * zb * zb)}) * (-1.0 / (zb * zb)) - conj_phi).max_abs() / scale);
    ++n;
  }
  SuiteResult s;
  s.name = "symmetry";
  s.checks.push_back(at_most("pushforward_conjugation", e1, 1e-10));
  s.checks.push_back(at_most("pushforward_rotation", e2, 1e-10));
  s.checks.push_back(at_most("pushforward_inversion", e3, 1e-10));
  const auto b = fundamental_boundary(c.a);
  double iso = 0.0;
  for (const auto& g : boundary_generators(b)) iso = std::max(iso, isometry_defect(g.linear, Signature::Lorentzian));
  s.checks.push_back(at_most("generator_isometry_defect", iso, 1e-12));
  const auto unit = triangular_unit(b);
  s.checks.push_back(at_most("triangular_unit_closure", unit.closure_defect, c.verify_tol));
  s.details = {{"samples", n},
               {"group_sizes", {symmetry_group(b, 0).size(), symmetry_group(b, 1).size(), symmetry_group(b, 2).size()}},
               {"rotation_angle", unit.rotation_angle},
               {"axis_direction", to_json(unit.axis_direction)},
               {"axis_point", to_json(unit.axis_point)}};
  return s;
}

/// gamma' is null and non-degenerate.
inline SuiteResult suite_null(const RunConfig& c) {
  require_unit_interval(c.a);
  const auto g = NullCurve::schwarz_h(c.a);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  double worst = 0.0;
  int degenerate = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double t = u(rng);
    const Vec3 v = g.velocity(t);
    worst = std::max(worst, std::abs(minkowski_inner(v, v)));
    degenerate += !nondegenerate_null_check(g, t).nondegenerate;
  }
  SuiteResult s;
  s.name = "null";
  s.checks.push_back(at_most("null_velocity", worst, 1e-12));
  s.checks.push_back(at_most("degenerate_points", degenerate, 0));
  s.details = {{"samples", n}};
  return s;
}

/// Timelike extension across the fold and its reflection through sigma.
inline SuiteResult suite_extension(const RunConfig& c) {
  require_unit_interval(c.a);
  const auto g = NullCurve::schwarz_h(c.a);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uu(0.0, kPi / 3), vv(0.0, kPi);
  double sum = 0, cross_term = 0, refl = 0, line0 = 0, line3 = 0;
  const Vec3 base0 = timelike_extend(g, 0, kPi / 2), base3 = timelike_extend(g, kPi / 3, kPi / 2);
  for (int i = 0; i < 200; ++i) {
    const double u = uu(rng);
    double v = vv(rng);
    if (v == 0.0) v = kPi / 2;
    const Vec3 fu = timelike_extend_du(g, u, v), fv = timelike_extend_dv(g, u, v);
    const double scale = 1.0 + euclid_inner(fu, fu) + euclid_inner(fv, fv);
    sum = std::max(sum, std::abs(minkowski_inner(fu, fu) + minkowski_inner(fv, fv)) / scale);
    cross_term = std::max(cross_term, std::abs(minkowski_inner(fu, fv)) / scale);
    refl = std::max(refl, norm(timelike_extend(g, u, kPi + v) - timelike_extend(g, u, kPi - v)));
    const Vec3 d0 = timelike_extend(g, 0, v) - base0;
    line0 = std::max(line0, std::hypot(d0.c0, d0.c1));
    const Vec3 d3 = timelike_extend(g, kPi / 3, v) - base3;
    if (norm(d3) > 1e-6)
      line3 = std::max(line3, std::max(std::abs(d3.c0), std::abs(d3.c1 + std::sqrt(3.0) * d3.c2)) / norm(d3));
  }
  const Mat3 A = matrix_A();
  const bool printed = c.c_sign == "printed";
  const Vec3 cv = printed ? translation_c_as_printed(g) : translation_c(g);
  const Vec3 cw = printed ? translation_c_as_printed_via_extension(g) : translation_c_via_extension(g);
  const double sign = printed ? 1.0 : -1.0;
  std::uniform_real_distribution<double> us(0.0, kPi / 3);
  double vel = 0, pos = 0;
  for (int i = 0; i < 50; ++i) {
    const double t = us(rng);
    vel = std::max(vel, norm(sigma_prime(g, t) - A * g.velocity(kPi / 3 - t)));
    pos = std::max(pos, norm(sigma(g, t) - (sign * (A * g(kPi / 3 - t)) + cv)));
  }
  SuiteResult s;
  s.name = "extension";
  s.checks.push_back(at_most("conformal_diagonal", sum, 1e-10));
  s.checks.push_back(at_most("conformal_offdiagonal", cross_term, 1e-10));
  s.checks.push_back(at_most("reflection_in_v", refl, 1e-12));
  s.checks.push_back(at_most("line_u0_along_e2", line0, 1e-10));
  s.checks.push_back(at_most("line_u_third_pi_direction", line3, 1e-10));
  s.checks.push_back(at_most("sigma_velocity", vel, 1e-12));
  s.checks.push_back(at_most(printed ? "sigma_translation_printed_sign" : "sigma_translation", pos, 1e-10));
  s.checks.push_back(at_most("translation_two_expressions", norm(cv - cw), 1e-12));
  s.details = {{"c_sign", c.c_sign}, {"c", to_json(cv)}};
  return s;
}

/// Raw periods, their lattice and, for the ZMC family, the lattice of the symmetry group.
inline SuiteResult suite_periods(const RunConfig& c) {
  const auto fam = family_of(c);
  std::vector<std::string> labels;
  const auto per = periods(fam.data, &labels);
  const auto lat = lattice_detect(per, c.lattice_tol);
  SuiteResult s;
  s.name = "periods";
  s.checks.push_back(at_most("integer_combination_residual", lat.residual, c.lattice_tol));
  if (const auto want = detail::expected_rank(fam.tag))
    s.checks.push_back(at_most("rank_matches_family", std::abs(lat.rank - *want), 0));
  s.details = {{"labels", labels},
               {"periods", to_json(per)},
               {"rank", lat.rank},
               {"basis", to_json(lat.basis)},
               {"classification", to_string(periodicity_classify(lat))}};
  if (fam.tag == FamilyTag::SchwarzHZmc) {
    const auto group = translation_lattice(symmetry_group(c.a, 4), c.lattice_tol);
    double mismatch = std::max(detail::integer_residual(group.basis, lat.basis), detail::integer_residual(lat.basis, group.basis));
    if (group.rank != lat.rank) mismatch = std::numeric_limits<double>::infinity();
    s.checks.push_back(at_most("group_lattice_equals_period_lattice", mismatch, c.lattice_tol));
    s.details["group_lattice_rank"] = group.rank;
    s.details["group_lattice_basis"] = to_json(group.basis);
  }
  return s;
}

/// Discrete mean curvature of the Scherk-type graph converges to zero at
/// second order, and the extended maxface aligns with the graph.
inline SuiteResult suite_zmc(const RunConfig& c) {
  const double half = 0.4;
  const double r16 = mean_curvature_residual(scherk_graph_mesh(half, 16)).max;
  const double r32 = mean_curvature_residual(scherk_graph_mesh(half, 32)).max;
  const double r64 = mean_curvature_residual(scherk_graph_mesh(half, 64)).max;
  const double order = std::log2(r32 / r64);
  const auto align = scherk_alignment_check(100, 0, c.seed);
  SuiteResult s;
  s.name = "zmc";
  s.checks.push_back(at_most("graph_curvature_order_deficit", std::max(0.0, 1.8 - order), 0.0));
  s.checks.push_back(at_most("graph_identity_on_extension", align.max_residual, 1e-6));
  s.details = {{"graph_half_width", half},
               {"cells", {16, 32, 64}},
               {"residual_max", {r16, r32, r64}},
               {"order", order},
               {"order_coarse", std::log2(r16 / r32)},
               {"identity_samples", align.samples}};
  return s;
}

/// Fundamental piece: seams, causal tags and the four boundary arcs.
inline SuiteResult suite_boundary(const RunConfig& c) {
  detail::require_family(c, FamilyTag::SchwarzHZmc, "boundary");
  const auto b = fundamental_boundary(c.a);
  PieceOptions opt;
  opt.weld_tol = c.weld_tol;
  opt.quad = quad_options(c);
  const auto piece = sample_fundamental_piece(c.a, c.n_radial, c.n_angular, c.strip_u(), c.n_v, opt);
  SuiteResult s;
  s.name = "boundary";
  s.checks.push_back(at_most("line1_collinearity", b.line1_fit.residual, 1e-6));
  s.checks.push_back(at_most("line2_collinearity", b.line2_fit.residual, 1e-6));
  s.checks.push_back(at_most("plane1_coplanarity", b.plane1_fit.residual, 1e-6));
  s.checks.push_back(at_most("plane2_coplanarity", b.plane2_fit.residual, 1e-6));
  s.checks.push_back(at_most("plane1_not_timelike", b.plane1_fit.causal != CausalClass::Timelike, 0));
  s.checks.push_back(at_most("plane2_not_timelike", b.plane2_fit.causal != CausalClass::Timelike, 0));
  const auto fam = family_of(c);
  const auto& d = fam.data;
  const cplx e3 = std::polar(1.0, kPi / 3);
  const double a = c.a;
  struct Arc {
    const char* name;
    double r0, r1, theta;
    BoundaryKind want;
  };
  const Arc arcs[] = {{"real_axis_is_line", 0.02, 0.98, 0.0, BoundaryKind::StraightLine},
                      {"inner_ray_is_planar", 0.02 * a, 0.96 * a, kPi / 3, BoundaryKind::PlanarCurve},
                      {"outer_ray_is_line", a + 0.04 * (1 - a), 0.98, kPi / 3, BoundaryKind::StraightLine}};
  ojson kinds = ojson::object();
  for (const auto& arc : arcs) {
    const cplx dir = arc.theta == 0.0 ? cplx(1.0) : e3;
    const auto cls = boundary_classify(d, arc.r0 * dir, arc.r1 * dir, sector_point(d, arc.r0, arc.theta).w);
    s.checks.push_back(at_most(arc.name, cls.kind != arc.want, 0));
    kinds[arc.name] = {{"kind", to_string(cls.kind)}, {"off_class", cls.off_class}};
  }
  s.checks.push_back(at_most("seam_gap_gamma", piece.gap_gamma, c.verify_tol));
  s.checks.push_back(at_most("seam_gap_sigma", piece.gap_sigma, c.verify_tol));
  s.checks.push_back(at_most("orientation_conflicts", orientation_conflicts(piece.mesh), 0));
  s.checks.push_back(at_most("causal_disagreement_fraction", 1.0 - causal_agreement(piece.mesh), 0.01));
  s.details = {{"arcs", kinds},
               {"line1", {{"point", to_json(b.line1_fit.point)}, {"direction", to_json(b.line1_fit.direction)}}},
               {"line2", {{"point", to_json(b.line2_fit.point)}, {"direction", to_json(b.line2_fit.direction)}}},
               {"plane1", {{"point", to_json(b.plane1_fit.point)}, {"normal", to_json(b.plane1_fit.normal)}}},
               {"plane2", {{"point", to_json(b.plane2_fit.point)}, {"normal", to_json(b.plane2_fit.normal)}}},
               {"piece_vertices", piece.mesh.vertices.size()},
               {"piece_faces", piece.mesh.faces.size()}};
  return s;
}

/// Helicoid limit as a -> 0, nodal limit as a -> 1, Scherk graph for k = 2.
inline SuiteResult suite_limits(const RunConfig& c) {
  SuiteResult s;
  s.name = "limits";
  ojson helicoid = ojson::array();
  const double as[] = {0.3, 0.2, 0.1, 0.05, 0.01};
  std::vector<double> dev;
  for (double a : as) {
    dev.push_back(helicoid_limit_deviation(a));
    helicoid.push_back({{"a", a}, {"deviation", dev.back()}});
  }
  int helicoid_breaks = 0;
  for (int i = 1; i < 4; ++i) helicoid_breaks += !(dev[i] < dev[i - 1]);
  s.checks.push_back(at_most("helicoid_deviation_a0.1", dev[2], 1.1e-3));
  s.checks.push_back(at_most("helicoid_deviation_a0.01", dev[4], 1e-5));
  s.checks.push_back(at_most("helicoid_monotonicity_breaks", helicoid_breaks, 0));

  std::vector<cplx> samples;
  for (int j = 0; j < 12; ++j) samples.push_back(std::polar(0.5, 2 * kPi * j / 12 + 0.1));
  ojson nodal = ojson::array();
  std::vector<double> nd;
  for (double a : {0.9, 0.99, 0.999}) {
    nd.push_back(nodal_limit_comparison(a, samples, c.nodal_sign).deviation);
    nodal.push_back({{"a", a}, {"deviation", nd.back()}});
  }
  s.checks.push_back(at_most("nodal_monotonicity_breaks", !(nd[1] < nd[0]) + !(nd[2] < nd[1]), 0));

  const auto align = scherk_alignment_check(100, 0, c.seed);
  s.checks.push_back(at_most("scherk_graph_residual", align.max_residual, 1e-6));
  s.details = {{"helicoid", helicoid}, {"nodal", nodal}, {"nodal_radius", 0.5}, {"scherk_samples", align.samples}};
  return s;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"folds", "symmetry", "null", "extension",
                                                 "periods", "zmc", "boundary", "limits"};
  return names;
}

inline SuiteResult run_suite(const RunConfig& c, const std::string& name) {
  if (name == "folds") return suite_folds(c);
  if (name == "symmetry") return suite_symmetry(c);
  if (name == "null") return suite_null(c);
  if (name == "extension") return suite_extension(c);
  if (name == "periods") return suite_periods(c);
  if (name == "zmc") return suite_zmc(c);
  if (name == "boundary") return suite_boundary(c);
  if (name == "limits") return suite_limits(c);
  throw Error(ErrorKind::Usage, "unknown suite '" + name + "'");
}

/// Report skeleton: schema, command and the configuration that produced it.
inline ojson report_header(const std::string& command, const RunConfig& c) {
  ojson r;
  r["schema"] = kReportSchema;
  r["command"] = command;
  r["config"] = to_json(c);
  return r;
}

inline std::string failed_checks_message(const std::vector<SuiteResult>& suites) {
  std::string msg;
  for (const auto& s : suites)
    for (const auto& c : s.checks)
      if (!c.pass) msg += (msg.empty() ? "" : ", ") + s.name + "." + c.name;
  return "failed: " + msg;
}

/// Adds the suites and the overall status.
inline void add_suites(ojson& report, const std::vector<SuiteResult>& suites) {
  bool ok = true;
  ojson arr = ojson::array();
  for (const auto& s : suites) {
    arr.push_back(to_json(s));
    ok = ok && s.pass();
  }
  report["suites"] = arr;
  report["status"] = ok ? "pass" : "fail";
  if (!ok) report["error"] = {{"category", "check_failed"}, {"message", failed_checks_message(suites)}};
}

inline void add_error(ojson& report, const Error& e) {
  report["status"] = "error";
  report["error"] = {{"category", to_string(e.kind())}, {"message", e.what()}};
}

}  // namespace tpzmc
