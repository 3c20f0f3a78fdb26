// One line per acceptance criterion; exit status is the number of failures.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tpzmc/assembly.hpp"
#include "tpzmc/curve.hpp"
#include "tpzmc/mesh_io.hpp"
#include "tpzmc/report.hpp"

using namespace tpzmc;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

/// "name r <= t" fragment plus the verdict folded into `ok`.
std::string within(const std::string& name, double r, double t, bool& ok) {
  const bool pass = r <= t;
  ok = ok && pass;
  return name + " " + sci(r) + (pass ? " <= " : " > ") + sci(t);
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("[%s] %2d %s: %s; runtime %.2fs (< %gs%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              o.summary.c_str(), dt, budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

RunConfig at(double a, std::uint64_t seed = 20261016) {
  RunConfig c;
  c.a = a;
  c.seed = seed;
  return c;
}

double residual_of(const SuiteResult& s, const std::string& name) { return s.check(name).residual; }

Outcome null_curve() {
  bool ok = true;
  double worst = 0, closed = 0;
  for (double a : {0.1, 0.5, 0.9}) {
    worst = std::max(worst, residual_of(suite_null(at(a)), "null_velocity"));
    const auto g = NullCurve::schwarz_h(a);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
      const double s = u(rng);
      closed = std::max(closed, oracle::max_diff(g.velocity(s), Vec3{1, -std::cos(s), -std::sin(s)} * oracle::xi(s, a)));
    }
  }
  std::string msg = within("max |<g',g'>|", worst, 1e-12, ok);
  msg += ", " + within("|g' - closed form|", closed, 1e-12, ok);
  return {ok, msg + " (a = 0.1, 0.5, 0.9; 1000 s each)"};
}

Outcome folds() {
  bool ok = true;
  double worst = 0;
  for (double a : {0.1, 0.5, 0.9}) {
    const auto s = suite_folds(at(a));
    worst = std::max(worst, residual_of(s, "fold_residual_max"));
    ok = ok && s.check("singular_set_on_unit_circle").pass && s.check("degenerate_singular_points").pass;
  }
  std::string msg = within("max |Re dg/(g^2 eta)|", worst, 1e-10, ok);
  RunConfig conj = at(0.5);
  conj.family = "schwarz-h-zmc-conj";
  const int non_fold = suite_folds(conj).details["non_fold_points"].get<int>();
  ok = ok && non_fold >= 300;
  return {ok, msg + ", conjugate family fails at " + std::to_string(non_fold) + "/360 (need >= 300)"};
}

Outcome symmetry() {
  bool ok = true;
  const auto s = suite_symmetry(at(0.5));
  std::string msg = within("conjugation", residual_of(s, "pushforward_conjugation"), 1e-10, ok);
  msg += ", " + within("rotation", residual_of(s, "pushforward_rotation"), 1e-10, ok);
  msg += ", " + within("inversion", residual_of(s, "pushforward_inversion"), 1e-10, ok);
  return {ok, msg + " (100 points, a = 0.5)"};
}

Outcome extension() {
  bool ok = true;
  const auto s = suite_extension(at(0.5));
  std::string msg = within("conformality", std::max(residual_of(s, "conformal_diagonal"), residual_of(s, "conformal_offdiagonal")),
                           1e-10, ok);
  msg += ", " + within("f*(u,pi+v)-f*(u,pi-v)", residual_of(s, "reflection_in_v"), 1e-12, ok);
  msg += ", " + within("u=0 line off e2", residual_of(s, "line_u0_along_e2"), 1e-10, ok);
  msg += ", " + within("u=pi/3 direction", residual_of(s, "line_u_third_pi_direction"), 1e-10, ok);
  return {ok, msg};
}

Outcome reflection() {
  bool ok = true;
  RunConfig printed = at(0.5);
  printed.c_sign = "printed";
  const auto p = suite_extension(printed);
  const auto corrected = suite_extension(at(0.5));
  std::string msg = within("sigma' - A g'(pi/3-s)", residual_of(p, "sigma_velocity"), 1e-12, ok);
  msg += ", " + within("sigma - (A g(pi/3-s) + c)", residual_of(p, "sigma_translation_printed_sign"), 1e-10, ok);
  msg += ", " + within("c two ways", residual_of(p, "translation_two_expressions"), 1e-12, ok);
  msg += "; with -A g(pi/3-s) + c the residual is " + sci(residual_of(corrected, "sigma_translation")) +
         " and c two ways " + sci(residual_of(corrected, "translation_two_expressions"));
  return {ok, msg};
}

Outcome boundary() {
  bool ok = true;
  const auto s = suite_boundary(at(0.5));
  const double lines = std::max(residual_of(s, "line1_collinearity"), residual_of(s, "line2_collinearity"));
  const double planes = std::max(residual_of(s, "plane1_coplanarity"), residual_of(s, "plane2_coplanarity"));
  std::string msg = within("collinearity", lines, 1e-6, ok);
  msg += ", " + within("coplanarity", planes, 1e-6, ok);
  const bool timelike = s.check("plane1_not_timelike").pass && s.check("plane2_not_timelike").pass;
  ok = ok && timelike;
  msg += timelike ? ", both planes timelike" : ", a plane is not timelike";
  return {ok, msg};
}

Outcome periodicity() {
  bool ok = true;
  std::ostringstream msg;
  double worst = 0;
  auto family = [&](const char* label, RunConfig c, int want) {
    const auto s = suite_periods(c);
    const int rank = s.details["rank"].get<int>();
    worst = std::max(worst, residual_of(s, "integer_combination_residual"));
    ok = ok && rank == want;
    msg << label << " " << rank << (rank == want ? "" : "!") << ", ";
  };
  RunConfig c = at(0.5);
  family("schwarz-h-zmc", c, 3);
  c.family = "rpd";
  c.a = 1 / std::sqrt(2.0);
  family("rpd(1/sqrt2)", c, 3);
  c.a = std::sqrt(2.0);
  family("rpd(sqrt2)", c, 3);
  c.family = "schwarz-h-r3";
  c.a = 0.5;
  family("schwarz-h-r3", c, 3);
  c.family = "karcher-tower";
  for (int k : {2, 3}) {
    c.k = k;
    family(k == 2 ? "tower(2)" : "tower(3)", c, 1);
  }
  // The assembled surface: its symmetry translations and its vertex cloud.
  const auto b = fundamental_boundary(0.5);
  const auto ops = symmetry_group(b, 2);
  const auto mesh = assemble(sample_fundamental_piece(0.5, 12, 12, 12, 16).mesh, ops);
  const auto group = translation_lattice(symmetry_group(b, 4));
  const auto inv = lattice_invariance(mesh, ops, group.basis);
  ok = ok && group.rank == 3 && inv.checked > 0;
  msg << "assembly translations " << group.rank << ", ";
  std::string text = msg.str() + within("integer residual", worst, 1e-6, ok);
  text += ", " + within("assembly invariance", inv.max_distance, 1e-6, ok);
  return {ok, "ranks " + text};
}

Outcome zmc() {
  bool ok = true;
  const auto s = suite_zmc(at(0.5));
  const double order = s.details["order"].get<double>();
  ok = ok && order >= 1.8;
  std::string msg = "mean-curvature order " + std::to_string(order).substr(0, 5) + (order >= 1.8 ? " >= 1.8" : " < 1.8");
  msg += ", " + within("graph residual", residual_of(s, "graph_identity_on_extension"), 1e-6, ok);
  return {ok, msg + " (100 extension points, k = 2)"};
}

Outcome limits() {
  bool ok = true;
  const auto s = suite_limits(at(0.5));
  std::string msg = within("helicoid a=0.1", residual_of(s, "helicoid_deviation_a0.1"), 1.1e-3, ok);
  msg += ", " + within("helicoid a=0.01", residual_of(s, "helicoid_deviation_a0.01"), 1e-5, ok);
  const bool mono = s.check("helicoid_monotonicity_breaks").pass;
  const bool nodal = s.check("nodal_monotonicity_breaks").pass;
  ok = ok && mono && nodal;
  msg += mono ? ", helicoid monotone" : ", helicoid not monotone";
  const auto& nd = s.details["nodal"];
  msg += nodal ? ", nodal monotone (" : ", nodal not monotone (";
  for (std::size_t i = 0; i < nd.size(); ++i) msg += (i ? " " : "") + sci(nd[i]["deviation"].get<double>());
  return {ok, msg + ")"};
}

Outcome quadrature() {
  bool ok = true;
  const double a = 0.5;
  const auto c = HyperellipticCurve::schwarz_h(a);
  const auto roots = oracle::schwarz_h_roots(a);
  auto form = [](cplx z, cplx w) { return oracle::phi_l(z, cplx(0, 1) / w); };
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  double worst = 0;
  for (int done = 0; done < 20;) {
    const cplx z0(u(rng), u(rng)), z1(u(rng), u(rng));
    if (std::abs(z1 - z0) < 0.3 || oracle::segment_hits_cut(roots, z0, z1, 0.1)) continue;
    const auto lib = integrate_form(c, make_path(c, {z0, z1}), oracle::factorized_sqrt(roots, z0), form);
    auto f = [&](double t) {
      const cplx z = z0 + (z1 - z0) * t;
      return form(z, oracle::factorized_sqrt(roots, z)) * (z1 - z0);
    };
    worst = std::max(worst, oracle::max_diff(lib, oracle::composite_gl<CVec3>(f, 0.0, 1.0, 4000)));
    ++done;
  }
  int flips = 0;
  for (cplx e : c.branch_points()) {
    const cplx w0 = c.principal_w(e + 0.2);
    const auto pts = continue_sheet(c, make_path(c, circle_waypoints(e, 0.2, 32)), w0);
    flips += std::abs(pts.back().w + w0) <= 1e-10 * std::abs(w0);
  }
  const int finite = static_cast<int>(c.branch_points().size());
  ok = ok && finite == 7 && flips == finite;
  return {ok, within("max |lib - oracle|", worst, 1e-10, ok) + " on 20 paths, sheet flips " + std::to_string(flips) +
                  "/" + std::to_string(finite) + " branch points"};
}

int run_cli_in(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" TPZMC_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("tpzmc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ofstream(dir / "run.ini") << "[run]\nfamily = schwarz-h-zmc\na = 0.5\nseed = 11\n[mesh]\ndepth = 1\n";
  const std::string files[] = {"m.obj", "m.ply", "m.json", "v.json"};
  std::string first[4];
  bool ok = true;
  for (int round = 0; round < 2; ++round) {
    ok = ok && run_cli_in(dir, "generate --config run.ini --out m.obj --ply m.ply --report m.json") == 0;
    ok = ok && run_cli_in(dir, "verify --config run.ini --suite symmetry --report v.json") == 0;
    for (int i = 0; i < 4; ++i) {
      const auto bytes = read_file(dir / files[i]);
      if (round == 0) first[i] = bytes;
      else ok = ok && !bytes.empty() && bytes == first[i];
    }
  }
  fs::remove_all(dir);
  return {ok, ok ? "OBJ, PLY, generate and verify reports byte-identical across two runs"
                 : "outputs differ between runs or a run failed"};
}

}  // namespace

int main() {
  criterion(1, "null-curve identity", 1, null_curve);
  criterion(2, "fold criterion", 5, folds);
  criterion(3, "symmetry pushforwards", 5, symmetry);
  criterion(4, "extension structure", 5, extension);
  criterion(5, "reflection identity", 5, reflection);
  criterion(6, "fundamental boundary", 30, boundary);
  criterion(7, "periodicity", 120, periodicity);
  criterion(8, "ZMC verification", 60, zmc);
  criterion(9, "limits", 60, limits);
  criterion(10, "quadrature oracle", 30, quadrature);
  criterion(11, "reproducibility", 60, reproducibility);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
