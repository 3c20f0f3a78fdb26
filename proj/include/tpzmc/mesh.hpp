#pragma once

// Indexed triangle meshes with per-face causal/patch/copy tags, welding and
// duplicate-face removal.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpzmc/error.hpp"
#include "tpzmc/lorentz.hpp"

namespace tpzmc {

enum class Patch : std::int8_t { Max = 0, Min = 1, MaxHat = 2, Graph = 3, Other = 4 };

inline const char* to_string(Patch p) {
  switch (p) {
    case Patch::Max: return "max";
    case Patch::Min: return "min";
    case Patch::MaxHat: return "max_hat";
    case Patch::Graph: return "graph";
    case Patch::Other: return "other";
  }
  return "?";
}

struct FaceTag {
  CausalClass causal = CausalClass::Spacelike;
  Patch patch = Patch::Other;
  std::int32_t copy = 0;
  friend bool operator==(const FaceTag&, const FaceTag&) = default;
};

using Face = std::array<std::uint32_t, 3>;

struct TaggedMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<FaceTag> tags;
  std::vector<double> residual;  // optional, per vertex

  std::size_t add_vertex(const Vec3& v) {
    vertices.push_back(v);
    return vertices.size() - 1;
  }

  void add_face(std::uint32_t i, std::uint32_t j, std::uint32_t k, FaceTag tag) {
    faces.push_back({i, j, k});
    tags.push_back(tag);
  }

  /// Appends another mesh, offsetting its indices.
  void append(const TaggedMesh& o) {
    const auto off = static_cast<std::uint32_t>(vertices.size());
    vertices.insert(vertices.end(), o.vertices.begin(), o.vertices.end());
    for (std::size_t f = 0; f < o.faces.size(); ++f)
      add_face(o.faces[f][0] + off, o.faces[f][1] + off, o.faces[f][2] + off, o.tags[f]);
    residual.clear();
  }

  bool empty() const { return faces.empty(); }
};

/// Throws Precondition when indices are out of range or tags are missing.
inline void validate(const TaggedMesh& m) {
  if (m.tags.size() != m.faces.size()) throw Error(ErrorKind::Precondition, "mesh tag count differs from face count");
  for (const auto& f : m.faces)
    for (auto i : f)
      if (i >= m.vertices.size()) throw Error(ErrorKind::Precondition, "mesh face index out of range");
  for (const auto& v : m.vertices)
    if (!v.finite()) throw Error(ErrorKind::Precondition, "mesh vertex is not finite");
}

inline double face_area(const TaggedMesh& m, std::size_t f) {
  const auto& t = m.faces[f];
  return 0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]));
}

namespace detail {

struct CellKey {
  std::int64_t x, y, z;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline CellKey cell_of(const Vec3& v, double cell) {
  return {static_cast<std::int64_t>(std::floor(v.c0 / cell)), static_cast<std::int64_t>(std::floor(v.c1 / cell)),
          static_cast<std::int64_t>(std::floor(v.c2 / cell))};
}

}  // namespace detail

/// Uniform-grid point locator for nearest-neighbour queries within a radius.
class PointGrid {
 public:
  PointGrid(double cell) : cell_(cell) {}

  void insert(const Vec3& v, std::uint32_t id) {
    cells_[detail::cell_of(v, cell_)].push_back(id);
    pts_.resize(std::max<std::size_t>(pts_.size(), id + 1));
    pts_[id] = v;
  }

  /// Smallest-index point within `radius` (radius <= cell) or -1.
  std::int64_t find(const Vec3& v, double radius) const {
    const auto c = detail::cell_of(v, cell_);
    std::int64_t best = -1;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (auto id : it->second)
            if (norm(pts_[id] - v) <= radius && (best < 0 || id < best)) best = id;
        }
    return best;
  }

  /// Distance to the nearest stored point, searching rings up to `max_rings`.
  double nearest_distance(const Vec3& v, int max_rings = 2) const {
    const auto c = detail::cell_of(v, cell_);
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t dx = -max_rings; dx <= max_rings; ++dx)
      for (std::int64_t dy = -max_rings; dy <= max_rings; ++dy)
        for (std::int64_t dz = -max_rings; dz <= max_rings; ++dz) {
          auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (auto id : it->second) best = std::min(best, norm(pts_[id] - v));
        }
    return best;
  }

 private:
  double cell_;
  std::unordered_map<detail::CellKey, std::vector<std::uint32_t>, detail::CellHash> cells_;
  std::vector<Vec3> pts_;
};

struct WeldStats {
  std::size_t merged_vertices = 0;
  std::size_t dropped_degenerate = 0;
  std::size_t dropped_duplicates = 0;
};

/// Merges each vertex into the nearest earlier kept vertex within tol, then
/// drops faces that collapsed and faces whose vertex set repeats an earlier
/// face. With `group` (one id per vertex) only vertices of different groups
/// merge, so sub-tolerance spacing inside one group survives; a vertex whose
/// candidates lie more than tol apart from each other raises GlueError.
inline WeldStats weld(TaggedMesh& m, double tol, const std::vector<std::int32_t>* group = nullptr) {
  if (group && group->size() != m.vertices.size())
    throw Error(ErrorKind::Precondition, "weld group count differs from vertex count");
  WeldStats st;
  const double cell = std::max(tol, 1e-300) * 2.0;
  std::unordered_map<detail::CellKey, std::vector<std::uint32_t>, detail::CellHash> cells;
  std::vector<std::uint32_t> remap(m.vertices.size());
  std::vector<Vec3> kept;
  std::vector<std::int32_t> kept_group;
  std::vector<std::uint32_t> near;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const Vec3& v = m.vertices[i];
    const std::int32_t gi = group ? (*group)[i] : 0;
    const auto c = detail::cell_of(v, cell);
    near.clear();
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == cells.end()) continue;
          for (auto id : it->second)
            if ((!group || kept_group[id] != gi) && norm(kept[id] - v) <= tol) near.push_back(id);
        }
    if (!near.empty()) {
      std::uint32_t best = near[0];
      for (auto id : near)
        if (norm(kept[id] - v) < norm(kept[best] - v) || (norm(kept[id] - v) == norm(kept[best] - v) && id < best))
          best = id;
      if (group)
        for (auto id : near)
          if (kept_group[id] != kept_group[best] && norm(kept[id] - kept[best]) > tol) {
            std::ostringstream msg;
            msg << "weld ambiguity at vertex " << i << ": candidates " << best << " and " << id << " are "
                << norm(kept[id] - kept[best]) << " apart";
            throw GlueError(msg.str(), norm(kept[id] - kept[best]));
          }
      remap[i] = best;
      ++st.merged_vertices;
    } else {
      const auto id = static_cast<std::uint32_t>(kept.size());
      kept.push_back(v);
      kept_group.push_back(gi);
      cells[c].push_back(id);
      remap[i] = id;
    }
  }
  std::vector<Face> faces;
  std::vector<FaceTag> tags;
  std::map<std::array<std::uint32_t, 3>, std::size_t> seen;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    Face t = {remap[m.faces[f][0]], remap[m.faces[f][1]], remap[m.faces[f][2]]};
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      ++st.dropped_degenerate;
      continue;
    }
    auto key = t;
    std::sort(key.begin(), key.end());
    if (!seen.emplace(key, faces.size()).second) {
      ++st.dropped_duplicates;
      continue;
    }
    faces.push_back(t);
    tags.push_back(m.tags[f]);
  }
  m.vertices = std::move(kept);
  m.faces = std::move(faces);
  m.tags = std::move(tags);
  m.residual.clear();
  return st;
}

/// Removes faces whose Euclidean area is at most `area_tol`; returns the count.
inline std::size_t drop_degenerate_faces(TaggedMesh& m, double area_tol) {
  std::size_t w = 0, dropped = 0;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    if (face_area(m, f) <= area_tol) {
      ++dropped;
      continue;
    }
    m.faces[w] = m.faces[f];
    m.tags[w] = m.tags[f];
    ++w;
  }
  m.faces.resize(w);
  m.tags.resize(w);
  return dropped;
}

/// Number of faces using each edge, keyed by sorted vertex pair.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_use(const TaggedMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> use;
  for (const auto& f : m.faces)
    for (int e = 0; e < 3; ++e) {
      auto a = f[e], b = f[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++use[{a, b}];
    }
  return use;
}

/// Vertices lying on a boundary edge.
inline std::vector<bool> boundary_vertices(const TaggedMesh& m) {
  std::vector<bool> out(m.vertices.size(), false);
  for (const auto& [e, n] : edge_use(m))
    if (n == 1) out[e.first] = out[e.second] = true;
  return out;
}

}  // namespace tpzmc
