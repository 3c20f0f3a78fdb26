#pragma once

// Command-line front end: generate, verify, periods, limits.
// Exit codes: 0 pass, 1 failed check or computation error, 2 usage, parameter or degenerate curve error.

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpzmc/assembly.hpp"
#include "tpzmc/config.hpp"
#include "tpzmc/intersect.hpp"
#include "tpzmc/mesh_io.hpp"
#include "tpzmc/report.hpp"

namespace tpzmc {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

inline int exit_code_for(ErrorKind k) {
  return k == ErrorKind::Usage || k == ErrorKind::Parameter || k == ErrorKind::DegenerateCurve ? kExitUsage : kExitFail;
}

namespace detail {

class Stopwatch {
 public:
  void lap(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    laps_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  const ojson& laps() const { return laps_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  ojson laps_ = ojson::object();
};

inline void export_requested(const TaggedMesh& m, const RunConfig& c) {
  if (!c.obj.empty()) export_obj(m, c.obj);
  if (!c.ply.empty()) export_ply(m, c.ply);
}

inline SuiteResult generate_schwarz_h(const RunConfig& c, Stopwatch& sw) {
  PieceOptions popt;
  popt.weld_tol = c.weld_tol;
  popt.quad = quad_options(c);
  const auto piece = sample_fundamental_piece(c.a, c.n_radial, c.n_angular, c.strip_u(), c.n_v, popt);
  sw.lap("piece");
  const auto b = fundamental_boundary(c.a);
  const auto ops = symmetry_group(b, c.depth);
  WeldStats stats;
  const auto mesh = assemble(piece.mesh, ops, AssemblyOptions{c.weld_tol}, &stats);
  sw.lap("assemble");
  const auto fam = family_of(c);
  const auto per = periods(fam.data);
  const auto lat = lattice_detect(per, c.lattice_tol);
  const auto group = translation_lattice(symmetry_group(b, std::max(c.depth, 4)), c.lattice_tol);
  double mismatch = std::max(integer_residual(group.basis, lat.basis), integer_residual(lat.basis, group.basis));
  if (group.rank != lat.rank) mismatch = std::numeric_limits<double>::infinity();
  const auto inv = lattice_invariance(mesh, ops, lat.basis);
  sw.lap("lattice");

  SuiteResult s;
  s.name = "generate";
  s.checks.push_back(at_most("seam_gap_gamma", piece.gap_gamma, c.verify_tol));
  s.checks.push_back(at_most("seam_gap_sigma", piece.gap_sigma, c.verify_tol));
  s.checks.push_back(at_most("orientation_conflicts", orientation_conflicts(mesh), 0));
  s.checks.push_back(at_most("causal_disagreement_fraction", 1.0 - causal_agreement(mesh), 0.01));
  s.checks.push_back(at_most("lattice_rank_deficit", 3 - lat.rank, 0));
  s.checks.push_back(at_most("group_lattice_equals_period_lattice", mismatch, c.lattice_tol));
  if (inv.checked > 0) s.checks.push_back(at_most("lattice_invariance", inv.max_distance, c.lattice_tol));
  s.details = {{"vertices", mesh.vertices.size()},
               {"faces", mesh.faces.size()},
               {"copies", ops.size()},
               {"weld", {{"merged_vertices", stats.merged_vertices},
                         {"dropped_degenerate", stats.dropped_degenerate},
                         {"dropped_duplicates", stats.dropped_duplicates}}},
               {"lattice", {{"rank", lat.rank},
                            {"basis", to_json(lat.basis)},
                            {"classification", to_string(periodicity_classify(lat))},
                            {"periods", to_json(per)}}},
               {"invariance_checked_vertices", inv.checked}};
  if (c.intersections) {
    const auto rep = self_intersection_report(mesh);
    ojson pairs = ojson::array();
    for (auto [f, g] : rep.samples) pairs.push_back({f, g});
    s.details["self_intersections"] = {{"count", rep.count}, {"samples", pairs}};
    sw.lap("intersections");
  }
  export_requested(mesh, c);
  sw.lap("export");
  return s;
}

inline SuiteResult generate_scherk(const RunConfig& c, Stopwatch& sw) {
  const auto mesh = scherk_graph_mesh(c.graph_extent, c.graph_cells);
  const auto curv = mean_curvature_residual(mesh);
  const auto align = scherk_alignment_check(100, 0, c.seed);
  sw.lap("graph");
  SuiteResult s;
  s.name = "generate";
  s.checks.push_back(at_most("graph_identity_on_extension", align.max_residual, 1e-6));
  s.details = {{"vertices", mesh.vertices.size()},
               {"faces", mesh.faces.size()},
               {"graph", "x0 = log(cosh x1 / cosh x2)"},
               {"mean_curvature_residual_max", curv.max},
               {"mean_curvature_residual_rms", curv.rms}};
  export_requested(mesh, c);
  sw.lap("export");
  return s;
}

inline std::vector<SuiteResult> run_command(const std::string& command, const RunConfig& c, Stopwatch& sw) {
  if (command == "generate") {
    const auto tag = *family_from_name(c.family);
    // Assembly is defined on 0 < a < 1 only; check before the curve is built.
    if (tag == FamilyTag::SchwarzHZmc) require_unit_interval(c.a);
    family_of(c);
    if (tag == FamilyTag::SchwarzHZmc) return {generate_schwarz_h(c, sw)};
    if (tag == FamilyTag::ScherkZmcGraph) return {generate_scherk(c, sw)};
    throw Error(ErrorKind::Usage, "generate supports schwarz-h-zmc and scherk-zmc, not " + c.family);
  }
  if (command == "verify") {
    if (c.suite.empty()) throw Error(ErrorKind::Usage, "verify needs --suite");
    family_of(c);
    auto s = run_suite(c, c.suite);
    sw.lap(c.suite);
    return {std::move(s)};
  }
  if (command == "periods") {
    auto s = suite_periods(c);
    sw.lap("periods");
    return {std::move(s)};
  }
  if (command == "limits") {
    auto s = suite_limits(c);
    sw.lap("limits");
    return {std::move(s)};
  }
  throw Error(ErrorKind::Usage, "unknown command " + command);
}

inline std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

inline void add_run_options(CLI::App& sub, RunConfig& c, std::string& config_path) {
  sub.add_option("--config", config_path, "sectioned key = value file; flags override it");
  sub.add_option("--family", c.family, "schwarz-h-zmc, schwarz-h-zmc-conj, rpd, schwarz-h-r3, karcher-tower, "
                                       "karcher-maxface, scherk-zmc");
  sub.add_option("--a", c.a, "family parameter a");
  sub.add_option("--k", c.k, "family parameter k");
  sub.add_option("--seed", c.seed, "seed for randomized checks");
  sub.add_option("--n-radial", c.n_radial);
  sub.add_option("--n-angular", c.n_angular);
  sub.add_option("--n-u", c.n_u, "strip u resolution (0 follows --n-angular)");
  sub.add_option("--n-v", c.n_v);
  sub.add_option("--depth", c.depth, "symmetry word length for assembly");
  sub.add_option("--graph-extent", c.graph_extent, "half width of the Scherk graph square");
  sub.add_option("--graph-cells", c.graph_cells);
  sub.add_option("--quad-tol", c.quad_tol);
  sub.add_option("--weld-tol", c.weld_tol);
  sub.add_option("--verify-tol", c.verify_tol);
  sub.add_option("--lattice-tol", c.lattice_tol);
  sub.add_option("--c-sign", c.c_sign, "corrected or printed");
  sub.add_option("--nodal-sign", c.nodal_sign);
  sub.add_option("--out", c.obj, "OBJ destination");
  sub.add_option("--ply", c.ply, "PLY destination");
  sub.add_option("--report", c.report, "JSON report destination (default stdout)");
  sub.add_flag("--timings", c.timings, "include wall-clock timings in the report");
  sub.add_flag("--intersections", c.intersections, "run the self-intersection diagnostic");
}

inline void emit(const ojson& report, const RunConfig& c, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.report.empty()) {
    out << text;
    return;
  }
  write_atomic(c.report, text);
  out << report.value("status", "error") << ": " << c.report << "\n";
}

}  // namespace detail

/// Runs one command; the report goes to --report or `out`, diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string config_path;
  CLI::App app{"Triply periodic ZMC surfaces in Lorentz-Minkowski space"};
  app.require_subcommand(1);
  const char* commands[][2] = {{"generate", "build and export a surface mesh"},
                               {"verify", "run one verification suite"},
                               {"periods", "periods, lattice basis and classification"},
                               {"limits", "helicoid, nodal and Scherk limit tables"}};
  for (auto [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    detail::add_run_options(*sub, c, config_path);
    if (std::string(name) == "verify")
      sub->add_option("--suite", c.suite, "folds, symmetry, null, extension, periods, zmc, boundary, limits");
  }
  std::string command = "none";
  ojson report;
  try {
    if (const auto path = detail::find_config_path(args); !path.empty()) apply_config_file(c, path);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    command = app.get_subcommands().front()->get_name();
    validate(c);
    report = report_header(command, c);
    detail::Stopwatch sw;
    const auto suites = detail::run_command(command, c, sw);
    add_suites(report, suites);
    if (c.timings) report["timings"] = sw.laps();
    detail::emit(report, c, out);
    if (report["status"] != "pass") err << report["error"]["message"].get<std::string>() << "\n";
    return report["status"] == "pass" ? kExitPass : kExitFail;
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitPass;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    ojson r;
    r["schema"] = kReportSchema;
    r["command"] = command;
    r["status"] = "error";
    r["error"] = {{"category", to_string(ErrorKind::Usage)}, {"message", e.what()}};
    out << r.dump(2) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << "\n";
    if (report.is_null()) {
      report["schema"] = kReportSchema;
      report["command"] = command;
    }
    add_error(report, e);
    try {
      detail::emit(report, c, out);
    } catch (const Error& io) {
      err << "io: " << io.what() << "\n";
    }
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << "\n";
    return kExitFail;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace tpzmc
