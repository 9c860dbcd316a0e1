// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/mesh/layout.hpp"

#include "emsurf/mesh/point_index.hpp"

#include <algorithm>
#include <cmath>

namespace emsurf {

int ArrayLayout::neighbor(int index, Face face) const {
  const int i = index % mx, j = index / mx;
  int ni = i, nj = j;
  switch (face) {
    case Face::NegX: ni = i - 1; break;
    case Face::PosX: ni = i + 1; break;
    case Face::NegY: nj = j - 1; break;
    case Face::PosY: nj = j + 1; break;
    default: return -1;
  }
  if (ni < 0 || nj < 0 || ni >= mx || nj >= my) return -1;
  return nj * mx + ni;
}

ArrayLayout replicate(const std::vector<UnitCellGeometry>& unique_cells, const LayoutSpec& spec) {
  if (unique_cells.empty()) throw Error(ErrorKind::Config, "layout needs at least one unique cell");
  if (spec.mx < 1 || spec.my < 1) throw Error(ErrorKind::Config, "layout dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(spec.mx) * static_cast<std::size_t>(spec.my);
  if (!spec.cell_map.empty() && spec.cell_map.size() != n)
    throw Error(ErrorKind::Config, "layout cell map has the wrong size");
  if (!spec.rotation_map.empty() && spec.rotation_map.size() != n)
    throw Error(ErrorKind::Config, "layout rotation map has the wrong size");
  if (!(spec.rotation_symmetry_deg > 0.0 && spec.rotation_symmetry_deg <= 360.0))
    throw Error(ErrorKind::Config, "rotation symmetry must lie in (0, 360]");

  const auto& ref = unique_cells.front();
  for (const auto& c : unique_cells) {
    if (!c.has_box) throw Error(ErrorKind::Geometry, "cell '" + c.name + "' has no equivalent surface");
    if (std::abs(c.pitch_x - ref.pitch_x) > kGeomTol || std::abs(c.pitch_y - ref.pitch_y) > kGeomTol)
      throw Error(ErrorKind::Geometry, "mismatched pitch between unique cells '" + ref.name + "' and '" + c.name + "'");
  }

  ArrayLayout layout;
  layout.mx = spec.mx;
  layout.my = spec.my;
  layout.pitch_x = ref.pitch_x;
  layout.pitch_y = ref.pitch_y;
  std::map<std::pair<int, long long>, int> entry_index;
  for (int j = 0; j < spec.my; ++j) {
    for (int i = 0; i < spec.mx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j * spec.mx + i);
      const int cell = spec.cell_map.empty() ? 0 : spec.cell_map[idx];
      if (cell < 0 || cell >= static_cast<int>(unique_cells.size()))
        throw Error(ErrorKind::Config, "layout references undefined unique cell " + std::to_string(cell));
      double rot = spec.rotation_map.empty() ? 0.0 : spec.rotation_map[idx];
      rot = std::fmod(rot, spec.rotation_symmetry_deg);
      if (rot < 0) rot += spec.rotation_symmetry_deg;
      if (std::abs(rot - spec.rotation_symmetry_deg) < 1e-9) rot = 0.0;
      const long long key = std::llround(rot * 1e6);
      auto [it, inserted] = entry_index.emplace(std::make_pair(cell, key), static_cast<int>(layout.entries.size()));
      if (inserted) layout.entries.push_back({cell, rot});
      Placement p;
      p.i = i;
      p.j = j;
      p.entry = it->second;
      p.translation = Vec3(i * layout.pitch_x, j * layout.pitch_y, 0.0);
      layout.cells.push_back(p);
    }
  }
  return layout;
}

std::array<FaceTraversal, 6> traversal_positions(const UnitCellGeometry& cell) {
  std::array<FaceTraversal, 6> out;
  for (int f = 0; f < 6; ++f) out[static_cast<std::size_t>(f)].face = static_cast<Face>(f);
  for (const auto& e : cell.edges) {
    if (e.cls != EdgeClass::Traversal) continue;
    Face face = Face::Interior;
    for (int t : e.triangles)
      if (cell.kind(t) == PatchKind::Equivalent) face = cell.triangles[static_cast<std::size_t>(t)].face;
    const Vec3 mid = 0.5 * (cell.vertices[static_cast<std::size_t>(e.v[0])] + cell.vertices[static_cast<std::size_t>(e.v[1])]);
    out[static_cast<std::size_t>(face)].midpoints.push_back(mid - cell.box.lo);
  }
  for (auto& ft : out)
    std::sort(ft.midpoints.begin(), ft.midpoints.end(), [](const Vec3& a, const Vec3& b) {
      return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
  return out;
}

namespace {

// Centroids of the equivalent-surface triangles on one face, relative to the box corner.
std::vector<std::array<Vec3, 3>> face_triangles(const UnitCellGeometry& cell, Face face) {
  std::vector<std::array<Vec3, 3>> out;
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t)
    if (cell.kind(t) == PatchKind::Equivalent && cell.triangles[static_cast<std::size_t>(t)].face == face)
      out.push_back({cell.vertex(t, 0) - cell.box.lo, cell.vertex(t, 1) - cell.box.lo, cell.vertex(t, 2) - cell.box.lo});
  return out;
}

// True when both triangle sets coincide vertex-wise after shifting `b` by `shift`.
bool congruent(const std::vector<std::array<Vec3, 3>>& a, const std::vector<std::array<Vec3, 3>>& b,
               const Vec3& shift) {
  if (a.size() != b.size()) return false;
  PointIndex centroids;
  for (const auto& tri : a) centroids.insert((tri[0] + tri[1] + tri[2]) / 3.0);
  if (centroids.size() != a.size()) return false;
  std::vector<char> used(a.size(), 0);
  for (const auto& tri : b) {
    const int k = centroids.find((tri[0] + tri[1] + tri[2]) / 3.0 + shift);
    if (k < 0 || used[static_cast<std::size_t>(k)]) return false;
    used[static_cast<std::size_t>(k)] = 1;
    const auto& ta = a[static_cast<std::size_t>(k)];
    for (const auto& v : tri) {
      const Vec3 p = v + shift;
      if ((p - ta[0]).norm() > kGeomTol && (p - ta[1]).norm() > kGeomTol && (p - ta[2]).norm() > kGeomTol)
        return false;
    }
  }
  return true;
}

}  // namespace

PeriodicityReport check_eq_surface_periodicity(const std::vector<UnitCellGeometry>& entry_cells,
                                               const ArrayLayout& layout) {
  PeriodicityReport report;
  auto fail = [&](int entry, Face face, const std::string& msg) {
    if (report.pass) {
      report.pass = false;
      report.first_entry = entry;
      report.first_face = face;
      report.message = msg;
    }
  };
  if (entry_cells.empty()) {
    fail(-1, Face::Interior, "no cells");
    return report;
  }
  const auto& ref = entry_cells.front();
  std::array<std::vector<std::array<Vec3, 3>>, 6> ref_faces;
  for (int f = 0; f < 6; ++f) ref_faces[static_cast<std::size_t>(f)] = face_triangles(ref, static_cast<Face>(f));

  // Opposite side faces of the reference must coincide after a lattice shift.
  const Vec3 shift_x(ref.box.size().x(), 0, 0), shift_y(0, ref.box.size().y(), 0);
  if (std::abs(ref.box.size().x() - layout.pitch_x) > kGeomTol ||
      std::abs(ref.box.size().y() - layout.pitch_y) > kGeomTol)
    fail(0, Face::PosX, "box extent differs from the lattice pitch; neighboring equivalent surfaces do not touch");
  if (!congruent(ref_faces[1], ref_faces[0], shift_x)) fail(0, Face::PosX, "+x and -x face meshes differ");
  if (!congruent(ref_faces[3], ref_faces[2], shift_y)) fail(0, Face::PosY, "+y and -y face meshes differ");

  for (std::size_t e = 0; e < entry_cells.size(); ++e) {
    const auto& c = entry_cells[e];
    report.traversal.push_back(traversal_positions(c));
    if ((c.box.size() - ref.box.size()).norm() > kGeomTol) {
      fail(static_cast<int>(e), Face::Interior, "equivalent-surface box differs from the reference");
      continue;
    }
    for (int f = 0; f < 6; ++f) {
      if (!congruent(ref_faces[static_cast<std::size_t>(f)], face_triangles(c, static_cast<Face>(f)), Vec3::Zero())) {
        fail(static_cast<int>(e), static_cast<Face>(f),
             std::string("face ") + to_string(static_cast<Face>(f)) + " mesh differs from the reference");
        break;
      }
    }
  }
  return report;
}

}  // namespace emsurf
