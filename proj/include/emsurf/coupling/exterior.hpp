// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/kernels/operators.hpp"
#include "emsurf/macromodel/connectivity.hpp"
#include "emsurf/mesh/layout.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace emsurf {

/// Geometry, equivalent-surface basis and interior connectivity of one
/// layout entry, as needed on the exterior side.
struct EntryModel {
  const UnitCellGeometry* cell = nullptr;
  const BasisSet* eq = nullptr;
  const InteriorConnectivity* interior = nullptr;
};

/// Sparse U0 of Y = U0 Y~ with one signed entry per row (or none when the
/// coefficient is forced to zero).
struct ExteriorConnectivity {
  int rows = 0;
  int unknowns = 0;
  std::vector<int> offsets;  // first row of each placement
  std::vector<int> col;
  std::vector<int> sign;
  int seam_links = 0;
  int rim_merges = 0;
  int dropped = 0;

  Eigen::SparseMatrix<double> matrix() const;
  CVector expand(const CVector& y) const;
  CVector project(const CVector& x) const;
};

/// Merges coincident coefficients across shared faces (value_b = -s_a s_b
/// value_a through the coincident triangle), applies each entry's interior
/// ties, drops classes containing an inactive coefficient, and with
/// `rim_merge` joins the two traversal halves on faces without a neighbor.
ExteriorConnectivity build_exterior_connectivity(const ArrayLayout& layout, const std::vector<EntryModel>& entries,
                                                 bool rim_merge = true);

/// Free-space interaction between the equivalent surfaces of two placed cells.
CMatrix assemble_coupling_block(const UnitCellGeometry& test_cell, const BasisSet& test_eq, const Vec3& test_offset,
                                const UnitCellGeometry& source_cell, const BasisSet& source_eq,
                                const Vec3& source_offset, double frequency_hz, const QuadratureOptions& quad = {});

}  // namespace emsurf
