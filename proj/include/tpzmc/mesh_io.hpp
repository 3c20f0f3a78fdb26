#pragma once

// OBJ and binary PLY export of tagged meshes, plus readers for round trips.
// Numbers are written as shortest round-trip decimals so equal meshes give
// equal bytes.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/mesh.hpp"

namespace tpzmc {

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string group_name(const FaceTag& t) {
  std::string s = to_string(t.causal);
  s += '_';
  s += to_string(t.patch);
  s += "_copy";
  s += std::to_string(t.copy);
  return s;
}

inline std::string obj_string(const TaggedMesh& m) {
  validate(m);
  std::string out = "# tpzmc tagged mesh\n";
  out += "# vertices " + std::to_string(m.vertices.size()) + " faces " + std::to_string(m.faces.size()) + "\n";
  for (const auto& v : m.vertices)
    out += "v " + format_double(v.c0) + " " + format_double(v.c1) + " " + format_double(v.c2) + "\n";
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (f == 0 || !(m.tags[f] == m.tags[f - 1])) {
      out += "g " + group_name(m.tags[f]) + "\n";
      if (f == 0 || m.tags[f].causal != m.tags[f - 1].causal) out += std::string("usemtl ") + to_string(m.tags[f].causal) + "\n";
    }
    const auto& t = m.faces[f];
    out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  }
  return out;
}

namespace detail {

template <class T>
void put_le(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

template <class T>
T get_le(const char* p) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

inline constexpr const char* kPlyHeaderTail =
    "property float64 x\n"
    "property float64 y\n"
    "property float64 z\n";

inline constexpr const char* kPlyFaceProps =
    "property list uint8 int32 vertex_indices\n"
    "property int8 causal\n"
    "property int8 patch\n"
    "property int32 copy\n"
    "end_header\n";

}  // namespace detail

inline std::string ply_bytes(const TaggedMesh& m) {
  validate(m);
  std::string out = "ply\nformat binary_little_endian 1.0\ncomment tpzmc tagged mesh\n";
  out += "element vertex " + std::to_string(m.vertices.size()) + "\n";
  out += detail::kPlyHeaderTail;
  out += "element face " + std::to_string(m.faces.size()) + "\n";
  out += detail::kPlyFaceProps;
  for (const auto& v : m.vertices) {
    detail::put_le<double>(out, v.c0);
    detail::put_le<double>(out, v.c1);
    detail::put_le<double>(out, v.c2);
  }
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    detail::put_le<std::uint8_t>(out, 3);
    for (auto i : m.faces[f]) detail::put_le<std::int32_t>(out, static_cast<std::int32_t>(i));
    detail::put_le<std::int8_t>(out, static_cast<std::int8_t>(m.tags[f].causal));
    detail::put_le<std::int8_t>(out, static_cast<std::int8_t>(m.tags[f].patch));
    detail::put_le<std::int32_t>(out, m.tags[f].copy);
  }
  return out;
}

/// Writes `bytes` to a temporary sibling and renames it over `dest`.
inline void write_atomic(const std::filesystem::path& dest, std::string_view bytes) {
  const auto tmp = dest.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + tmp + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorKind::Io, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dest, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move " + tmp + " to " + dest.string());
  }
}

inline void export_obj(const TaggedMesh& m, const std::filesystem::path& dest) { write_atomic(dest, obj_string(m)); }

inline void export_ply(const TaggedMesh& m, const std::filesystem::path& dest) { write_atomic(dest, ply_bytes(m)); }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace detail {

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::Io, "malformed number '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline FaceTag parse_group(std::string_view name) {
  FaceTag t;
  for (auto c : {CausalClass::Spacelike, CausalClass::Timelike, CausalClass::Lightlike}) {
    const std::string prefix = std::string(to_string(c)) + "_";
    if (name.substr(0, prefix.size()) != prefix) continue;
    t.causal = c;
    name.remove_prefix(prefix.size());
    const auto pos = name.rfind("_copy");
    if (pos == std::string_view::npos) break;
    const auto patch = name.substr(0, pos);
    for (auto p : {Patch::Max, Patch::Min, Patch::MaxHat, Patch::Graph, Patch::Other})
      if (patch == to_string(p)) t.patch = p;
    const auto copy = name.substr(pos + 5);
    std::from_chars(copy.data(), copy.data() + copy.size(), t.copy);
    break;
  }
  return t;
}

}  // namespace detail

/// Reads the subset of OBJ written by obj_string (v, f, g; other lines ignored).
inline TaggedMesh parse_obj(std::string_view text) {
  TaggedMesh m;
  FaceTag current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto tok = detail::split(text.substr(pos, end - pos));
    pos = end + 1;
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw Error(ErrorKind::Io, "vertex line with fewer than 3 coordinates");
      m.add_vertex({detail::parse_double(tok[1]), detail::parse_double(tok[2]), detail::parse_double(tok[3])});
    } else if (tok[0] == "f") {
      if (tok.size() != 4) throw Error(ErrorKind::Io, "only triangular faces are supported");
      std::uint32_t idx[3];
      for (int k = 0; k < 3; ++k) {
        auto s = tok[k + 1].substr(0, tok[k + 1].find('/'));
        long v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || v < 1) throw Error(ErrorKind::Io, "malformed face index");
        idx[k] = static_cast<std::uint32_t>(v - 1);
      }
      m.add_face(idx[0], idx[1], idx[2], current);
    } else if (tok[0] == "g" && tok.size() > 1) {
      current = detail::parse_group(tok[1]);
    }
  }
  validate(m);
  return m;
}

inline TaggedMesh import_obj(const std::filesystem::path& p) { return parse_obj(read_file(p)); }

/// Reads the binary layout written by ply_bytes.
inline TaggedMesh parse_ply(std::string_view bytes) {
  const auto end = bytes.find("end_header\n");
  if (bytes.substr(0, 4) != "ply\n" || end == std::string_view::npos) throw Error(ErrorKind::Io, "not a PLY file");
  const std::string header(bytes.substr(0, end));
  if (header.find("format binary_little_endian 1.0") == std::string::npos)
    throw Error(ErrorKind::Io, "only binary little-endian PLY is supported");
  std::size_t nv = 0, nf = 0;
  {
    std::istringstream hs(header);
    std::string line;
    while (std::getline(hs, line)) {
      std::istringstream ls(line);
      std::string a, b;
      std::size_t n = 0;
      if (ls >> a >> b >> n && a == "element") (b == "vertex" ? nv : nf) = n;
    }
  }
  const char* p = bytes.data() + end + 11;
  const std::size_t need = nv * 24 + nf * (1 + 12 + 1 + 1 + 4);
  if (static_cast<std::size_t>(bytes.data() + bytes.size() - p) < need) throw Error(ErrorKind::Io, "truncated PLY body");
  TaggedMesh m;
  for (std::size_t i = 0; i < nv; ++i, p += 24)
    m.add_vertex({detail::get_le<double>(p), detail::get_le<double>(p + 8), detail::get_le<double>(p + 16)});
  for (std::size_t f = 0; f < nf; ++f) {
    if (detail::get_le<std::uint8_t>(p) != 3) throw Error(ErrorKind::Io, "only triangular faces are supported");
    ++p;
    std::uint32_t idx[3];
    for (auto& k : idx) {
      k = static_cast<std::uint32_t>(detail::get_le<std::int32_t>(p));
      p += 4;
    }
    FaceTag t;
    t.causal = static_cast<CausalClass>(detail::get_le<std::int8_t>(p));
    t.patch = static_cast<Patch>(detail::get_le<std::int8_t>(p + 1));
    t.copy = detail::get_le<std::int32_t>(p + 2);
    p += 6;
    m.add_face(idx[0], idx[1], idx[2], t);
  }
  validate(m);
  return m;
}

inline TaggedMesh import_ply(const std::filesystem::path& p) { return parse_ply(read_file(p)); }

}  // namespace tpzmc
