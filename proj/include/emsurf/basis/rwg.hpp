// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/mesh/cell.hpp"
#include "emsurf/types.hpp"

#include <array>
#include <vector>

namespace emsurf {

enum class CurrentKind { Electric, Magnetic };

/// One triangle of a basis function: sign times the canonical edge function
/// of `tri` that has unit outward flux through local edge `local_edge`.
struct RwgPiece {
  int tri = -1;
  int local_edge = 0;
  int sign = 1;
};

/// Full RWG (two pieces, +1 on the plus triangle, -1 on the minus triangle)
/// or half RWG (a single piece).
struct RwgFunction {
  int edge = -1;
  CurrentKind kind = CurrentKind::Electric;
  int region = 0;
  int count = 0;
  std::array<RwgPiece, 2> pieces{};

  bool half() const { return count == 1; }
  const RwgPiece* piece_on(int tri) const;
};

struct BasisSet {
  std::vector<RwgFunction> functions;
  std::size_t size() const { return functions.size(); }
};

struct RegionRange {
  int region = 0;
  int j_begin = 0;
  int j_count = 0;
  int m_begin = 0;
  int m_count = 0;
};

/// Index layout of the per-cell unknown vector: for each region in ascending
/// id, its electric then magnetic coefficients, edges in ascending order.
struct DofLayout {
  std::vector<RegionRange> ranges;
  int size = 0;
  std::vector<char> half;

  const RegionRange& range(int region) const;
};

struct CellBasis {
  BasisSet basis;
  DofLayout layout;
};

/// Region-local bases of every bounded region of the cell (and of the
/// exterior too when the cell has no equivalent surface).
CellBasis build_basis(const UnitCellGeometry& cell);

/// Basis of the equivalent surface as seen from the exterior. Electric
/// functions come first, then magnetic; edges are ordered by their position
/// relative to the box corner so congruent boxes get identical layouts. The
/// electric function is split into two halves at every traversal edge and at
/// every edge whose midpoint is listed in `padding` (box-local coordinates).
BasisSet build_eq_basis(const UnitCellGeometry& cell, const std::vector<Vec3>& padding = {});

/// Orientation of a half function on a box face: +1 on +x/+y/+z, -1 otherwise.
int half_sign(Face face);

/// Canonical edge function of a triangle at point r.
Vec3 edge_function(const UnitCellGeometry& cell, int tri, int local_edge, const Vec3& r);
double edge_length(const UnitCellGeometry& cell, int tri, int local_edge);

Vec3 eval_rwg(const UnitCellGeometry& cell, const RwgFunction& f, int tri, const Vec3& barycentric);
double div_rwg(const UnitCellGeometry& cell, const RwgFunction& f, int tri);

}  // namespace emsurf
