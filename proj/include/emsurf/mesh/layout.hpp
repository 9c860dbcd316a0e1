// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/mesh/cell.hpp"

#include <map>
#include <string>
#include <vector>

namespace emsurf {

struct LayoutSpec {
  int mx = 1;
  int my = 1;
  /// Unique-cell index per placement, row-major with index j*mx + i. Empty means all zero.
  std::vector<int> cell_map;
  /// In-plane rotation per placement in degrees. Empty means no rotation.
  std::vector<double> rotation_map;
  /// Rotations are folded modulo this angle when forming unique entries
  /// (360 for no element symmetry, 180 for two-fold symmetric elements).
  double rotation_symmetry_deg = 360.0;
};

/// One distinct (unique cell, rotation) pair; a macromodel is built per entry.
struct UniqueEntry {
  int cell = 0;
  double rotation_deg = 0.0;
};

struct Placement {
  int i = 0;
  int j = 0;
  int entry = 0;
  Vec3 translation = Vec3::Zero();
};

struct ArrayLayout {
  int mx = 1;
  int my = 1;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  std::vector<UniqueEntry> entries;
  /// Row-major, index j*mx + i.
  std::vector<Placement> cells;

  const Placement& at(int i, int j) const { return cells[static_cast<std::size_t>(j * mx + i)]; }
  /// Index of the neighbor across the given side face, or -1 at the array rim.
  int neighbor(int index, Face face) const;
};

ArrayLayout replicate(const std::vector<UnitCellGeometry>& unique_cells, const LayoutSpec& spec);

/// A traversal position on a box face, expressed relative to the box corner.
struct FaceTraversal {
  Face face = Face::Interior;
  std::vector<Vec3> midpoints;
};

struct PeriodicityReport {
  bool pass = true;
  std::string message;
  int first_entry = -1;
  Face first_face = Face::Interior;
  /// Traversal positions per unique entry and face (six faces each).
  std::vector<std::array<FaceTraversal, 6>> traversal;
};

/// Checks that every entry shares the reference box and equivalent-surface
/// mesh, and that opposite side faces are congruent under lattice translation.
/// `entry_cells` holds the (possibly rotated) geometry of each layout entry.
PeriodicityReport check_eq_surface_periodicity(const std::vector<UnitCellGeometry>& entry_cells,
                                               const ArrayLayout& layout);

/// Midpoints of traversal edges per face, relative to the box corner.
std::array<FaceTraversal, 6> traversal_positions(const UnitCellGeometry& cell);

}  // namespace emsurf
