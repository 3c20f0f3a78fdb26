#pragma once

// Run configuration shared by the command-line tool and the verification
// suites, plus a reader for sectioned `key = value` files.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "tpzmc/error.hpp"
#include "tpzmc/families.hpp"
#include "tpzmc/mesh_io.hpp"
#include "json.hpp"

namespace tpzmc {

struct RunConfig {
  std::string family = "schwarz-h-zmc";
  double a = 0.5;
  int k = 2;
  std::uint64_t seed = 1;
  std::string suite;

  int n_radial = 16;
  int n_angular = 16;
  int n_u = 0;  // 0 follows n_angular
  int n_v = 24;
  int depth = 1;
  double graph_extent = 1.5;
  int graph_cells = 48;

  double quad_tol = 1e-10;
  double weld_tol = 1e-7;
  double verify_tol = 1e-8;
  double lattice_tol = 1e-6;

  std::string c_sign = "corrected";  // or "printed"
  int nodal_sign = +1;

  std::string obj;
  std::string ply;
  std::string report;
  bool timings = false;
  bool intersections = false;

  int strip_u() const { return n_u == 0 ? n_angular : n_u; }
};

inline void validate(const RunConfig& c) {
  if (!family_from_name(c.family)) throw Error(ErrorKind::Usage, "unknown family '" + c.family + "'");
  const std::pair<const char*, double> tols[] = {
      {"quadrature", c.quad_tol}, {"weld", c.weld_tol}, {"verification", c.verify_tol}, {"lattice", c.lattice_tol}};
  for (auto [name, v] : tols)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::Usage, std::string(name) + " tolerance must be > 0");
  if (c.depth < 0) throw Error(ErrorKind::Usage, "depth must be >= 0");
  if (c.c_sign != "corrected" && c.c_sign != "printed")
    throw Error(ErrorKind::Usage, "c sign must be 'corrected' or 'printed'");
  if (c.nodal_sign != 1 && c.nodal_sign != -1) throw Error(ErrorKind::Usage, "nodal sign must be +1 or -1");
}

/// Internal panel tolerance used for Weierstrass integrals, three orders
/// below the requested end-to-end tolerance.
inline QuadOptions quad_options(const RunConfig& c) {
  QuadOptions q;
  q.abs_tol = q.rel_tol = c.quad_tol * 1e-3;
  return q;
}

inline FamilySpec family_of(const RunConfig& c) {
  auto f = make_family(*family_from_name(c.family), c.a, c.k);
  f.data.quad = quad_options(c);
  return f;
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["family"] = c.family;
  if (family_uses_k(*family_from_name(c.family))) j["k"] = c.k;
  else j["a"] = c.a;
  j["seed"] = c.seed;
  j["resolution"] = {{"n_radial", c.n_radial}, {"n_angular", c.n_angular}, {"n_u", c.strip_u()}, {"n_v", c.n_v},
                     {"depth", c.depth},       {"graph_extent", c.graph_extent}, {"graph_cells", c.graph_cells}};
  j["tolerances"] = {{"quadrature", c.quad_tol}, {"weld", c.weld_tol}, {"verification", c.verify_tol},
                     {"lattice", c.lattice_tol}};
  j["signs"] = {{"c", c.c_sign}, {"nodal", c.nodal_sign}};
  return j;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, const std::string& key) {
  T v{};
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(ErrorKind::Usage, "bad value '" + std::string(text) + "' for " + key);
  return v;
}

inline bool parse_bool(std::string_view text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorKind::Usage, "bad value '" + std::string(text) + "' for " + key);
}

}  // namespace detail

/// Applies `[section]` / `key = value` lines to `c`. Blank lines and lines
/// starting with '#' or ';' are ignored; unknown keys are usage errors.
inline void apply_config_text(RunConfig& c, std::string_view text) {
  using detail::parse_number;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto where = "config line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Usage, where + ": unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::Usage, where + ": expected key = value");
    const std::string key = section + "." + std::string(detail::trim(line.substr(0, eq)));
    const auto val = detail::trim(line.substr(eq + 1));
    if (key == "run.family") c.family = val;
    else if (key == "run.a") c.a = parse_number<double>(val, key);
    else if (key == "run.k") c.k = parse_number<int>(val, key);
    else if (key == "run.seed") c.seed = parse_number<std::uint64_t>(val, key);
    else if (key == "run.suite") c.suite = val;
    else if (key == "mesh.n_radial") c.n_radial = parse_number<int>(val, key);
    else if (key == "mesh.n_angular") c.n_angular = parse_number<int>(val, key);
    else if (key == "mesh.n_u") c.n_u = parse_number<int>(val, key);
    else if (key == "mesh.n_v") c.n_v = parse_number<int>(val, key);
    else if (key == "mesh.depth") c.depth = parse_number<int>(val, key);
    else if (key == "mesh.graph_extent") c.graph_extent = parse_number<double>(val, key);
    else if (key == "mesh.graph_cells") c.graph_cells = parse_number<int>(val, key);
    else if (key == "tolerances.quadrature") c.quad_tol = parse_number<double>(val, key);
    else if (key == "tolerances.weld") c.weld_tol = parse_number<double>(val, key);
    else if (key == "tolerances.verification") c.verify_tol = parse_number<double>(val, key);
    else if (key == "tolerances.lattice") c.lattice_tol = parse_number<double>(val, key);
    else if (key == "signs.c") c.c_sign = val;
    else if (key == "signs.nodal") c.nodal_sign = parse_number<int>(val, key);
    else if (key == "output.obj") c.obj = val;
    else if (key == "output.ply") c.ply = val;
    else if (key == "output.report") c.report = val;
    else if (key == "output.timings") c.timings = detail::parse_bool(val, key);
    else if (key == "output.intersections") c.intersections = detail::parse_bool(val, key);
    else throw Error(ErrorKind::Usage, where + ": unknown key '" + key + "'");
  }
}

inline void apply_config_file(RunConfig& c, const std::filesystem::path& p) {
  std::string text;
  try {
    text = read_file(p);
  } catch (const Error& e) {
    throw Error(ErrorKind::Usage, e.what());
  }
  apply_config_text(c, text);
}

}  // namespace tpzmc
