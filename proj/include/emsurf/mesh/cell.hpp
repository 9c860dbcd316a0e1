// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/mesh/msh.hpp"
#include "emsurf/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emsurf {

enum class PatchKind { Pec, Dielectric, Equivalent };
enum class Face { NegX = 0, PosX, NegY, PosY, NegZ, PosZ, Interior };
enum class EdgeClass { InteriorPair, OpenBoundary, Junction, Traversal, EqSeam };

/// Region id reserved for the unbounded free-space exterior.
inline constexpr int kExteriorRegion = 0;

const char* to_string(PatchKind kind);
const char* to_string(Face face);
const char* to_string(EdgeClass cls);
Face opposite(Face face);
/// Outward unit normal of a box face.
Vec3 face_normal(Face face);

struct Region {
  int id = 0;
  cdouble eps_r{1.0, 0.0};
};

/// Wavenumber of a region at the given frequency, branch with Im(k) <= 0.
cdouble region_wavenumber(const Region& region, double frequency_hz);

struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  Vec3 size() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec3& p, double tol = kGeomTol) const;
};

/// Maps one physical-group tag onto surface semantics. The triangle normal
/// points out of region_plus and into region_minus.
struct TagSpec {
  int tag = 0;
  PatchKind kind = PatchKind::Dielectric;
  int region_plus = 0;
  int region_minus = kExteriorRegion;
};

struct CellSpec {
  std::string name;
  std::vector<Region> regions;
  std::vector<TagSpec> tags;
  std::optional<Box> box;
  /// Lattice pitch; zero means the box extent along that axis.
  double pitch_x = 0.0;
  double pitch_y = 0.0;
};

struct Triangle {
  std::array<int, 3> v{};
  int patch = -1;
  Face face = Face::Interior;
};

struct SurfacePatch {
  int tag = 0;
  PatchKind kind = PatchKind::Dielectric;
  int region_plus = 0;
  int region_minus = kExteriorRegion;
  std::vector<int> triangles;
};

struct EdgeRecord {
  std::array<int, 2> v{};
  std::vector<int> triangles;
  EdgeClass cls = EdgeClass::InteriorPair;
  /// Number of distinct regions touching the edge.
  int regions = 0;
};

struct UnitCellGeometry {
  std::string name;
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<SurfacePatch> patches;
  /// Bounded regions in ascending id; the exterior is implicit.
  std::vector<Region> regions;
  bool has_box = false;
  Box box;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  double height = 0.0;
  double rotation_deg = 0.0;
  std::uint64_t hash = 0;
  std::vector<EdgeRecord> edges;
  /// Edge id of local edge i (opposite vertex i) for every triangle.
  std::vector<std::array<int, 3>> triangle_edges;

  const SurfacePatch& patch_of(int t) const { return patches[static_cast<std::size_t>(triangles[t].patch)]; }
  PatchKind kind(int t) const { return patch_of(t).kind; }
  int region_plus(int t) const { return patch_of(t).region_plus; }
  int region_minus(int t) const { return patch_of(t).region_minus; }
  const Vec3& vertex(int t, int i) const { return vertices[static_cast<std::size_t>(triangles[t].v[i])]; }
  Vec3 normal(int t) const;
  double area(int t) const;
  Vec3 centroid(int t) const;
  const Region& region(int id) const;
  bool has_region(int id) const;
};

UnitCellGeometry build_cell(const RawMesh& mesh, const CellSpec& spec);
std::vector<EdgeRecord> classify_edges(const UnitCellGeometry& cell);

/// Order-independent hash of geometry (quantized to the geometric tolerance),
/// materials and rotation.
std::uint64_t geometry_hash(const UnitCellGeometry& cell);

/// Count of edges in each class, indexed by EdgeClass.
std::array<int, 5> edge_class_counts(const UnitCellGeometry& cell);

/// Rotates everything except the equivalent surface about the vertical axis
/// through the box center. Interior geometry touching the box is rejected.
UnitCellGeometry rotate_interior(const UnitCellGeometry& cell, double angle_deg);

/// Returns a copy of the cell rigidly translated by d.
UnitCellGeometry translate_cell(const UnitCellGeometry& cell, const Vec3& d);

}  // namespace emsurf
