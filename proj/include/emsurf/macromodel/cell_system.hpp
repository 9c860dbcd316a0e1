// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/kernels/operators.hpp"
#include "emsurf/macromodel/connectivity.hpp"

#include <vector>

namespace emsurf {

/// Block-diagonal per-region system of one cell; off-diagonal region blocks
/// are zero and never stored.
struct CellSystem {
  DofLayout layout;
  std::vector<int> offsets;   // first row of each block
  std::vector<CMatrix> blocks;  // one per layout range

  int size() const { return layout.size; }
  CMatrix dense() const;
};

CellSystem assemble_cell_system(const UnitCellGeometry& cell, const CellBasis& basis, double frequency_hz,
                                const QuadratureOptions& quad = {});

/// U^T Z U partitioned into eq and interior columns.
struct ReducedSystem {
  CMatrix z;
  int n_eq = 0;
  int n_int = 0;

  auto ee() const { return z.topLeftCorner(n_eq, n_eq); }
  auto ei() const { return z.topRightCorner(n_eq, n_int); }
  auto ie() const { return z.bottomLeftCorner(n_int, n_eq); }
  auto ii() const { return z.bottomRightCorner(n_int, n_int); }
};

ReducedSystem reduce_system(const CellSystem& system, const InteriorConnectivity& u);
/// Same product for an arbitrary dense Z (for testing and small fixtures).
ReducedSystem reduce_system(const CMatrix& z, const InteriorConnectivity& u);

}  // namespace emsurf
