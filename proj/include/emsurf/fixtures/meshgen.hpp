// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/mesh/cell.hpp"
#include "emsurf/mesh/msh.hpp"

#include <vector>

namespace emsurf {

/// Axis-aligned rectangle on the layer interface, in cell-local coordinates.
struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

/// A box-shaped unit cell of one or two stacked dielectric layers. The box is
/// centered on the origin in x and y. With two layers the interface sits at
/// z = 0 and may carry PEC rectangles.
struct LayeredCellParams {
  double size_x = 13.5e-3;
  double size_y = 13.5e-3;
  std::vector<double> thickness{1.0e-3, 1.0e-3};
  std::vector<cdouble> eps{2.2, 3.0};
  double h_eq = 2.5e-3;
  double h_mid = 2.0e-3;
  double h_pec = 1.2e-3;
  std::vector<Rect> pec;
  /// Extra interface breakpoints so that cell variants share one face mesh.
  std::vector<double> extra_x;
  std::vector<double> extra_y;
  /// Interface areas meshed at h_pec without carrying PEC.
  std::vector<Rect> refine;
};

/// Physical tags used by the generator.
enum LayeredTag : int { kTagEqBottom = 1, kTagEqTop = 2, kTagInterface = 3, kTagPec = 4 };

RawMesh layered_cell_mesh(const LayeredCellParams& params);
CellSpec layered_cell_spec(const LayeredCellParams& params, const std::string& name = "cell");
UnitCellGeometry layered_cell(const LayeredCellParams& params, const std::string& name = "cell");

/// Icosphere with outward normals, subdivided `level` times, tag 1.
RawMesh icosphere_mesh(double radius, int level, const Vec3& center = Vec3::Zero());

/// Geodesic sphere whose longest edge does not exceed `max_edge`. With
/// `equal_volume` the facets are pushed out so the polyhedron encloses the
/// sphere's volume.
RawMesh geodesic_sphere_mesh(double radius, double max_edge, bool equal_volume = true,
                             const Vec3& center = Vec3::Zero());

/// Scene spec for a homogeneous dielectric body bounded by tag 1.
CellSpec dielectric_body_spec(cdouble eps_r, const std::string& name = "body");

}  // namespace emsurf
