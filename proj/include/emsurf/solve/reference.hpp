// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/kernels/operators.hpp"
#include "emsurf/kernels/sources.hpp"
#include "emsurf/macromodel/connectivity.hpp"
#include "emsurf/mesh/layout.hpp"

namespace emsurf {

/// Joins the placed cells into one geometry without equivalent surfaces:
/// coincident box faces between neighbors disappear, the regions they
/// separated become one, and the remaining box faces become dielectric
/// interfaces with the exterior.
UnitCellGeometry merge_array(const ArrayLayout& layout, const std::vector<UnitCellGeometry>& entry_cells);

struct ReferenceOptions {
  int dof_limit = 20000;
  QuadratureOptions quad;
};

struct ReferenceSolution {
  UnitCellGeometry geometry;
  CellBasis basis;
  InteriorConnectivity connectivity;
  CVector unknowns;  // unique coefficients
  CVector x;         // region coefficients, U * unknowns
  double rcond = 0.0;

  /// Range of exterior-region functions in `basis`.
  const RegionRange& exterior() const { return basis.layout.range(kExteriorRegion); }
};

/// Dense solve of the coupled multi-region system over a closed geometry
/// (no equivalent surface).
ReferenceSolution direct_reference_solve(const UnitCellGeometry& geometry, const IncidentSource& source,
                                         const ReferenceOptions& options = {});

/// Unique unknown count of the reference system, for dof-limit checks.
int reference_unknowns(const UnitCellGeometry& geometry);

}  // namespace emsurf
