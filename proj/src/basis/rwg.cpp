// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/basis/rwg.hpp"

#include "emsurf/mesh/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace emsurf {

const RwgPiece* RwgFunction::piece_on(int tri) const {
  for (int i = 0; i < count; ++i)
    if (pieces[static_cast<std::size_t>(i)].tri == tri) return &pieces[static_cast<std::size_t>(i)];
  return nullptr;
}

const RegionRange& DofLayout::range(int region) const {
  for (const auto& r : ranges)
    if (r.region == region) return r;
  throw Error(ErrorKind::Geometry, "no dofs for region " + std::to_string(region));
}

int half_sign(Face face) {
  switch (face) {
    case Face::PosX:
    case Face::PosY:
    case Face::PosZ: return 1;
    default: return -1;
  }
}

double edge_length(const UnitCellGeometry& cell, int tri, int local_edge) {
  return (cell.vertex(tri, (local_edge + 1) % 3) - cell.vertex(tri, (local_edge + 2) % 3)).norm();
}

Vec3 edge_function(const UnitCellGeometry& cell, int tri, int local_edge, const Vec3& r) {
  return edge_length(cell, tri, local_edge) / (2.0 * cell.area(tri)) * (r - cell.vertex(tri, local_edge));
}

Vec3 eval_rwg(const UnitCellGeometry& cell, const RwgFunction& f, int tri, const Vec3& b) {
  const RwgPiece* p = f.piece_on(tri);
  if (!p) return Vec3::Zero();
  const Vec3 r = b[0] * cell.vertex(tri, 0) + b[1] * cell.vertex(tri, 1) + b[2] * cell.vertex(tri, 2);
  return p->sign * edge_function(cell, tri, p->local_edge, r);
}

double div_rwg(const UnitCellGeometry& cell, const RwgFunction& f, int tri) {
  const RwgPiece* p = f.piece_on(tri);
  if (!p) return 0.0;
  return p->sign * edge_length(cell, tri, p->local_edge) / cell.area(tri);
}

namespace {

int local_edge_of(const UnitCellGeometry& cell, int tri, int edge) {
  const auto& te = cell.triangle_edges[static_cast<std::size_t>(tri)];
  for (int i = 0; i < 3; ++i)
    if (te[static_cast<std::size_t>(i)] == edge) return i;
  throw Error(ErrorKind::Geometry, "triangle does not own edge");
}

bool bounds(const UnitCellGeometry& cell, int tri, int region) {
  return cell.region_plus(tri) == region || cell.region_minus(tri) == region;
}

}  // namespace

CellBasis build_basis(const UnitCellGeometry& cell) {
  std::vector<int> regions;
  if (!cell.has_box) regions.push_back(kExteriorRegion);
  for (const auto& r : cell.regions) regions.push_back(r.id);

  CellBasis out;
  for (int region : regions) {
    RegionRange range;
    range.region = region;
    for (int pass = 0; pass < 2; ++pass) {
      const CurrentKind kind = pass == 0 ? CurrentKind::Electric : CurrentKind::Magnetic;
      (pass == 0 ? range.j_begin : range.m_begin) = static_cast<int>(out.basis.size());
      for (int e = 0; e < static_cast<int>(cell.edges.size()); ++e) {
        const auto& rec = cell.edges[static_cast<std::size_t>(e)];
        std::vector<int> tris;
        bool pec = false;
        for (int t : rec.triangles) {
          pec = pec || cell.kind(t) == PatchKind::Pec;
          if (bounds(cell, t, region)) tris.push_back(t);
        }
        if (tris.empty()) continue;
        if (tris.size() != 2)
          throw Error(ErrorKind::Geometry, "open-boundary edge on the boundary of region " + std::to_string(region));
        if (kind == CurrentKind::Magnetic && pec) continue;
        std::sort(tris.begin(), tris.end());
        int plus = tris[0], minus = tris[1];
        if (rec.cls == EdgeClass::Traversal) {
          // Orient so that the link to the equivalent-surface half carries +1.
          const int eq = cell.kind(tris[0]) == PatchKind::Equivalent ? tris[0] : tris[1];
          const int sign_on_eq = -half_sign(cell.triangles[static_cast<std::size_t>(eq)].face);
          const int other = eq == tris[0] ? tris[1] : tris[0];
          plus = sign_on_eq > 0 ? eq : other;
          minus = sign_on_eq > 0 ? other : eq;
        }
        RwgFunction f;
        f.edge = e;
        f.kind = kind;
        f.region = region;
        f.count = 2;
        f.pieces[0] = {plus, local_edge_of(cell, plus, e), 1};
        f.pieces[1] = {minus, local_edge_of(cell, minus, e), -1};
        out.basis.functions.push_back(f);
      }
      (pass == 0 ? range.j_count : range.m_count) =
          static_cast<int>(out.basis.size()) - (pass == 0 ? range.j_begin : range.m_begin);
    }
    if (range.j_count + range.m_count == 0)
      throw Error(ErrorKind::Geometry, "region " + std::to_string(region) + " has no degrees of freedom");
    out.layout.ranges.push_back(range);
  }
  out.layout.size = static_cast<int>(out.basis.size());
  out.layout.half.assign(out.basis.size(), 0);
  return out;
}

BasisSet build_eq_basis(const UnitCellGeometry& cell, const std::vector<Vec3>& padding) {
  if (!cell.has_box) throw Error(ErrorKind::Geometry, "cell has no equivalent surface");
  const Vec3 origin = cell.box.lo;
  PointIndex split;
  for (const auto& p : padding) split.insert(p);

  auto quant = [](const Vec3& p) {
    return std::array<long long, 3>{std::llround(p.x() / kGeomTol), std::llround(p.y() / kGeomTol),
                                    std::llround(p.z() / kGeomTol)};
  };
  struct Item {
    std::array<long long, 3> key;
    int edge;
    std::array<int, 2> tris;
  };
  std::vector<Item> items;
  for (int e = 0; e < static_cast<int>(cell.edges.size()); ++e) {
    const auto& rec = cell.edges[static_cast<std::size_t>(e)];
    std::vector<int> tris;
    for (int t : rec.triangles)
      if (cell.kind(t) == PatchKind::Equivalent) tris.push_back(t);
    if (tris.empty()) continue;
    if (tris.size() != 2) throw Error(ErrorKind::Geometry, "equivalent surface is not a closed 2-manifold");
    const Vec3 mid = 0.5 * (cell.vertices[static_cast<std::size_t>(rec.v[0])] + cell.vertices[static_cast<std::size_t>(rec.v[1])]);
    // Order the two triangles by their position so congruent boxes agree.
    auto ka = quant(cell.centroid(tris[0]) - origin), kb = quant(cell.centroid(tris[1]) - origin);
    if (kb < ka) std::swap(tris[0], tris[1]);
    items.push_back({quant(mid - origin), e, {tris[0], tris[1]}});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.key < b.key; });

  BasisSet out;
  for (int pass = 0; pass < 2; ++pass) {
    const CurrentKind kind = pass == 0 ? CurrentKind::Electric : CurrentKind::Magnetic;
    for (const auto& it : items) {
      const auto& rec = cell.edges[static_cast<std::size_t>(it.edge)];
      const Vec3 mid = 0.5 * (cell.vertices[static_cast<std::size_t>(rec.v[0])] + cell.vertices[static_cast<std::size_t>(rec.v[1])]);
      const bool is_split = kind == CurrentKind::Electric &&
                            (rec.cls == EdgeClass::Traversal || split.find(mid - origin) >= 0);
      if (is_split) {
        for (int t : it.tris) {
          RwgFunction f;
          f.edge = it.edge;
          f.kind = kind;
          f.region = kExteriorRegion;
          f.count = 1;
          f.pieces[0] = {t, local_edge_of(cell, t, it.edge), half_sign(cell.triangles[static_cast<std::size_t>(t)].face)};
          out.functions.push_back(f);
        }
      } else {
        RwgFunction f;
        f.edge = it.edge;
        f.kind = kind;
        f.region = kExteriorRegion;
        f.count = 2;
        f.pieces[0] = {it.tris[0], local_edge_of(cell, it.tris[0], it.edge), 1};
        f.pieces[1] = {it.tris[1], local_edge_of(cell, it.tris[1], it.edge), -1};
        out.functions.push_back(f);
      }
    }
  }
  return out;
}

}  // namespace emsurf
