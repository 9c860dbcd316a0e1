// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/mesh/cell.hpp"

#include "emsurf/mesh/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace emsurf {

const char* to_string(PatchKind kind) {
  switch (kind) {
    case PatchKind::Pec: return "pec";
    case PatchKind::Dielectric: return "dielectric";
    case PatchKind::Equivalent: return "equivalent";
  }
  return "?";
}

const char* to_string(Face face) {
  static const char* names[] = {"-x", "+x", "-y", "+y", "-z", "+z", "interior"};
  return names[static_cast<int>(face)];
}

const char* to_string(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::InteriorPair: return "interior-pair";
    case EdgeClass::OpenBoundary: return "open-boundary";
    case EdgeClass::Junction: return "junction";
    case EdgeClass::Traversal: return "traversal";
    case EdgeClass::EqSeam: return "eq-seam";
  }
  return "?";
}

Face opposite(Face face) {
  if (face == Face::Interior) return face;
  const int f = static_cast<int>(face);
  return static_cast<Face>(f ^ 1);
}

Vec3 face_normal(Face face) {
  switch (face) {
    case Face::NegX: return -Vec3::UnitX();
    case Face::PosX: return Vec3::UnitX();
    case Face::NegY: return -Vec3::UnitY();
    case Face::PosY: return Vec3::UnitY();
    case Face::NegZ: return -Vec3::UnitZ();
    case Face::PosZ: return Vec3::UnitZ();
    case Face::Interior: break;
  }
  return Vec3::Zero();
}

cdouble region_wavenumber(const Region& region, double frequency_hz) {
  cdouble k = free_space_wavenumber(frequency_hz) * std::sqrt(region.eps_r);
  if (k.imag() > 0.0) k = -k;
  if (k.real() < 0.0) k = -k;
  return k;
}

bool Box::contains(const Vec3& p, double tol) const {
  return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
}

Vec3 UnitCellGeometry::normal(int t) const {
  const Vec3 n = (vertex(t, 1) - vertex(t, 0)).cross(vertex(t, 2) - vertex(t, 0));
  return n.normalized();
}

double UnitCellGeometry::area(int t) const {
  return 0.5 * (vertex(t, 1) - vertex(t, 0)).cross(vertex(t, 2) - vertex(t, 0)).norm();
}

Vec3 UnitCellGeometry::centroid(int t) const { return (vertex(t, 0) + vertex(t, 1) + vertex(t, 2)) / 3.0; }

const Region& UnitCellGeometry::region(int id) const {
  for (const auto& r : regions)
    if (r.id == id) return r;
  static const Region exterior{kExteriorRegion, {1.0, 0.0}};
  if (id == kExteriorRegion) return exterior;
  throw Error(ErrorKind::Geometry, "unknown region id " + std::to_string(id));
}

bool UnitCellGeometry::has_region(int id) const {
  return id == kExteriorRegion ||
         std::any_of(regions.begin(), regions.end(), [id](const Region& r) { return r.id == id; });
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

Face detect_face(const UnitCellGeometry& cell, int t) {
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const double plane = side == 0 ? cell.box.lo[axis] : cell.box.hi[axis];
      bool on = true;
      for (int i = 0; i < 3; ++i) on = on && std::abs(cell.vertex(t, i)[axis] - plane) <= kGeomTol;
      if (on) return static_cast<Face>(2 * axis + side);
    }
  }
  return Face::Interior;
}

void build_edges(UnitCellGeometry& cell) {
  std::unordered_map<std::uint64_t, int> index;
  cell.edges.clear();
  cell.triangle_edges.assign(cell.triangles.size(), {-1, -1, -1});
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
    const auto& v = cell.triangles[static_cast<std::size_t>(t)].v;
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
      auto [it, inserted] = index.emplace(edge_key(a, b), static_cast<int>(cell.edges.size()));
      if (inserted) {
        EdgeRecord e;
        e.v = {std::min(a, b), std::max(a, b)};
        cell.edges.push_back(e);
      }
      cell.edges[static_cast<std::size_t>(it->second)].triangles.push_back(t);
      cell.triangle_edges[static_cast<std::size_t>(t)][i] = it->second;
    }
  }
  // Deterministic edge order: ascending (min vertex, max vertex).
  std::vector<int> order(cell.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return cell.edges[x].v < cell.edges[y].v; });
  std::vector<int> rank(order.size());
  std::vector<EdgeRecord> sorted;
  sorted.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    sorted.push_back(std::move(cell.edges[static_cast<std::size_t>(order[i])]));
  }
  cell.edges = std::move(sorted);
  for (auto& te : cell.triangle_edges)
    for (auto& e : te) e = rank[static_cast<std::size_t>(e)];
}

void check_region_closure(const UnitCellGeometry& cell, int region) {
  std::map<std::pair<int, int>, int> directed;
  bool any = false;
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
    const bool plus = cell.region_plus(t) == region;
    const bool minus = cell.region_minus(t) == region;
    if (!plus && !minus) continue;
    any = true;
    const auto& v = cell.triangles[static_cast<std::size_t>(t)].v;
    for (int i = 0; i < 3; ++i) {
      int a = v[i], b = v[(i + 1) % 3];
      if (minus) std::swap(a, b);
      ++directed[{a, b}];
    }
  }
  if (!any) throw Error(ErrorKind::Geometry, "region " + std::to_string(region) + " has no boundary triangles");
  for (const auto& [ab, count] : directed) {
    const auto back = directed.find({ab.second, ab.first});
    const int reverse = back == directed.end() ? 0 : back->second;
    if (count + reverse != 2) {
      const Vec3& p = cell.vertices[static_cast<std::size_t>(ab.first)];
      std::ostringstream msg;
      msg << "region " << region << " boundary is not watertight at edge near (" << p.x() << ", " << p.y() << ", "
          << p.z() << ")";
      throw Error(ErrorKind::Geometry, msg.str());
    }
    if (count != 1) {
      throw Error(ErrorKind::Geometry,
                  "inconsistent orientation on the boundary of region " + std::to_string(region));
    }
  }
}

}  // namespace

UnitCellGeometry build_cell(const RawMesh& mesh, const CellSpec& spec) {
  UnitCellGeometry cell;
  cell.name = spec.name;

  std::map<int, Region> regions;
  for (const auto& r : spec.regions) {
    if (r.id <= 0) throw Error(ErrorKind::Config, "region ids must be positive (0 is the exterior)");
    if (r.eps_r.imag() > 0.0)
      throw Error(ErrorKind::Config, "region " + std::to_string(r.id) + " has Im(eps_r) > 0 (active medium)");
    if (!regions.emplace(r.id, r).second)
      throw Error(ErrorKind::Config, "duplicate region id " + std::to_string(r.id));
  }
  for (const auto& [id, r] : regions) cell.regions.push_back(r);

  std::map<int, TagSpec> tags;
  for (const auto& ts : spec.tags) {
    for (int id : {ts.region_plus, ts.region_minus})
      if (id != kExteriorRegion && !regions.count(id))
        throw Error(ErrorKind::Config, "tag " + std::to_string(ts.tag) + " references unknown region " +
                                           std::to_string(id));
    if (ts.region_plus == ts.region_minus)
      throw Error(ErrorKind::Config, "tag " + std::to_string(ts.tag) + " separates a region from itself");
    if (ts.kind == PatchKind::Equivalent && ts.region_minus != kExteriorRegion)
      throw Error(ErrorKind::Config,
                  "equivalent-surface tag " + std::to_string(ts.tag) + " must have the exterior as region_minus");
    tags[ts.tag] = ts;
  }

  // Weld coincident vertices.
  PointIndex welded;
  std::vector<int> remap(mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) remap[i] = welded.insert(mesh.nodes[i]);
  cell.vertices = welded.points();

  std::map<int, int> patch_of_tag;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int tag = mesh.tags.empty() ? 0 : mesh.tags[t];
    const auto ts = tags.find(tag);
    if (ts == tags.end())
      throw Error(ErrorKind::Config, "physical tag " + std::to_string(tag) + " has no entry in the tag map");
    auto [it, inserted] = patch_of_tag.emplace(tag, 0);
    if (inserted) {
      it->second = static_cast<int>(cell.patches.size());
      SurfacePatch p;
      p.tag = tag;
      p.kind = ts->second.kind;
      p.region_plus = ts->second.region_plus;
      p.region_minus = ts->second.region_minus;
      cell.patches.push_back(p);
    }
    Triangle tri;
    for (int i = 0; i < 3; ++i) tri.v[i] = remap[static_cast<std::size_t>(mesh.triangles[t][i])];
    tri.patch = it->second;
    const int id = static_cast<int>(cell.triangles.size());
    cell.triangles.push_back(tri);
    if (cell.area(id) <= kGeomTol * kGeomTol)
      throw Error(ErrorKind::Geometry, "degenerate triangle " + std::to_string(t + 1));
    cell.patches[static_cast<std::size_t>(tri.patch)].triangles.push_back(id);
  }
  if (cell.triangles.empty()) throw Error(ErrorKind::Geometry, "mesh has no triangles");

  bool any_eq = false;
  Box bbox{Vec3::Constant(1e300), Vec3::Constant(-1e300)};
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
    if (cell.kind(t) != PatchKind::Equivalent) continue;
    any_eq = true;
    for (int i = 0; i < 3; ++i) {
      bbox.lo = bbox.lo.cwiseMin(cell.vertex(t, i));
      bbox.hi = bbox.hi.cwiseMax(cell.vertex(t, i));
    }
  }
  if (spec.box) {
    cell.has_box = true;
    cell.box = *spec.box;
  } else if (any_eq) {
    cell.has_box = true;
    cell.box = bbox;
  }

  if (cell.has_box) {
    if (!any_eq) throw Error(ErrorKind::Geometry, "a box was given but the mesh has no equivalent-surface triangles");
    for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
      auto& tri = cell.triangles[static_cast<std::size_t>(t)];
      if (cell.kind(t) == PatchKind::Equivalent) {
        tri.face = detect_face(cell, t);
        if (tri.face == Face::Interior)
          throw Error(ErrorKind::Geometry, "equivalent-surface triangle " + std::to_string(t) + " is off the box");
        if (cell.normal(t).dot(face_normal(tri.face)) <= 0.0)
          throw Error(ErrorKind::Geometry,
                      "inconsistent orientation: equivalent-surface triangle " + std::to_string(t) + " points inward");
      } else {
        for (int i = 0; i < 3; ++i)
          if (!cell.box.contains(cell.vertex(t, i)))
            throw Error(ErrorKind::Geometry, std::string(to_string(cell.kind(t))) +
                                                 " geometry lies outside the equivalent surface");
        if (cell.region_minus(t) == kExteriorRegion || cell.region_plus(t) == kExteriorRegion)
          throw Error(ErrorKind::Geometry, "interior patch touches the exterior inside the equivalent surface");
      }
    }
    cell.pitch_x = spec.pitch_x > 0.0 ? spec.pitch_x : cell.box.size().x();
    cell.pitch_y = spec.pitch_y > 0.0 ? spec.pitch_y : cell.box.size().y();
    cell.height = cell.box.size().z();
  }

  build_edges(cell);

  std::set<int> bounded;
  for (const auto& p : cell.patches)
    for (int id : {p.region_plus, p.region_minus}) bounded.insert(id);
  for (int id : bounded) check_region_closure(cell, id);

  cell.edges = classify_edges(cell);
  cell.hash = geometry_hash(cell);
  return cell;
}

std::vector<EdgeRecord> classify_edges(const UnitCellGeometry& cell) {
  std::vector<EdgeRecord> out = cell.edges;
  for (auto& e : out) {
    bool pec = false, eq = false, all_eq = true;
    std::set<int> regions;
    std::set<Face> faces;
    for (int t : e.triangles) {
      const PatchKind k = cell.kind(t);
      pec = pec || k == PatchKind::Pec;
      eq = eq || k == PatchKind::Equivalent;
      all_eq = all_eq && k == PatchKind::Equivalent;
      regions.insert(cell.region_plus(t));
      regions.insert(cell.region_minus(t));
      faces.insert(cell.triangles[static_cast<std::size_t>(t)].face);
    }
    e.regions = static_cast<int>(regions.size());
    if (pec && eq) {
      e.cls = EdgeClass::Traversal;
    } else if (e.triangles.size() == 1) {
      if (!pec) throw Error(ErrorKind::Geometry, "dangling edge on a closed region boundary");
      e.cls = EdgeClass::OpenBoundary;
    } else if (e.regions >= 3) {
      e.cls = EdgeClass::Junction;
    } else if (all_eq && faces.size() > 1) {
      e.cls = EdgeClass::EqSeam;
    } else {
      e.cls = EdgeClass::InteriorPair;
    }
  }
  return out;
}

std::array<int, 5> edge_class_counts(const UnitCellGeometry& cell) {
  std::array<int, 5> counts{};
  for (const auto& e : cell.edges) ++counts[static_cast<std::size_t>(e.cls)];
  return counts;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { i64(std::llround(v * 1e9)); }
};

}  // namespace

std::uint64_t geometry_hash(const UnitCellGeometry& cell) {
  const Vec3 origin = cell.has_box ? cell.box.lo : Vec3::Zero();
  using Record = std::array<std::int64_t, 14>;
  std::vector<Record> records;
  records.reserve(cell.triangles.size());
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
    std::array<std::array<std::int64_t, 3>, 3> q{};
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) q[i][a] = std::llround((cell.vertex(t, i)[a] - origin[a]) / kGeomTol);
    // Keep the cyclic order (orientation) but start from the smallest vertex.
    int first = 0;
    for (int i = 1; i < 3; ++i)
      if (q[i] < q[first]) first = i;
    Record r{};
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) r[3 * i + a] = q[(first + i) % 3][a];
    const auto& p = cell.patch_of(t);
    r[9] = static_cast<int>(p.kind);
    const cdouble ep = cell.region(p.region_plus).eps_r, em = cell.region(p.region_minus).eps_r;
    r[10] = std::llround(ep.real() * 1e9);
    r[11] = std::llround(ep.imag() * 1e9);
    r[12] = std::llround(em.real() * 1e9) ^ (std::llround(em.imag() * 1e9) << 1);
    r[13] = p.region_plus * 1000 + p.region_minus;
    records.push_back(r);
  }
  std::sort(records.begin(), records.end());
  Fnv h;
  for (const auto& r : records)
    for (auto v : r) h.i64(v);
  h.f64(cell.has_box ? cell.box.size().x() : 0.0);
  h.f64(cell.has_box ? cell.box.size().y() : 0.0);
  h.f64(cell.has_box ? cell.box.size().z() : 0.0);
  h.f64(cell.rotation_deg);
  return h.h;
}

UnitCellGeometry rotate_interior(const UnitCellGeometry& cell, double angle_deg) {
  if (!cell.has_box) throw Error(ErrorKind::Geometry, "rotation requires an equivalent-surface box");
  UnitCellGeometry out = cell;
  out.rotation_deg = std::fmod(cell.rotation_deg + angle_deg, 360.0);
  if (out.rotation_deg < 0) out.rotation_deg += 360.0;
  std::vector<char> on_eq(cell.vertices.size(), 0), interior(cell.vertices.size(), 0);
  for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t)
    for (int v : cell.triangles[static_cast<std::size_t>(t)].v)
      (cell.kind(t) == PatchKind::Equivalent ? on_eq : interior)[static_cast<std::size_t>(v)] = 1;
  const double a = angle_deg * kPi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  const Vec3 center = cell.box.center();
  for (std::size_t v = 0; v < cell.vertices.size(); ++v) {
    if (!interior[v]) continue;
    if (on_eq[v])
      throw Error(ErrorKind::Geometry,
                  "interior geometry touches the equivalent surface and cannot be rotated; supply a rotated mesh");
    const Vec3 d = cell.vertices[v] - center;
    out.vertices[v] = center + Vec3(c * d.x() - s * d.y(), s * d.x() + c * d.y(), d.z());
    if (!cell.box.contains(out.vertices[v]))
      throw Error(ErrorKind::Geometry, "rotated interior geometry leaves the equivalent surface");
  }
  out.hash = geometry_hash(out);
  return out;
}

UnitCellGeometry translate_cell(const UnitCellGeometry& cell, const Vec3& d) {
  UnitCellGeometry out = cell;
  for (auto& v : out.vertices) v += d;
  out.box.lo += d;
  out.box.hi += d;
  return out;
}

}  // namespace emsurf
