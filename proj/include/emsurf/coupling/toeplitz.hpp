// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/mesh/layout.hpp"
#include "emsurf/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace emsurf {

/// 1: every entry has the same traversal positions on each face.
/// 2: on each face an entry has either the common set or none (pad).
/// 3: anything else, including non-periodic equivalent surfaces (dense).
struct ToeplitzReport {
  int scenario = 1;
  bool toeplitz = true;
  /// Box-relative edge midpoints where every cell needs split functions.
  std::vector<Vec3> padding;
  /// Scenario per axis group (x, y, z faces).
  std::array<int, 3> axis_scenario{1, 1, 1};
  int traversal_edges = 0;
  PeriodicityReport periodicity;
  std::string message;
};

ToeplitzReport check_toeplitz_conditions(const ArrayLayout& layout, const std::vector<UnitCellGeometry>& entry_cells);

/// Block-Toeplitz coupling over an mx x my lattice of identical n-dof blocks.
/// Block T(di, dj) couples test cell (i, j) to source cell (i + di, j + dj).
/// Products use a (2mx-1) x (2my-1) circulant embedding per dof pair.
class BlockToeplitzOperator {
 public:
  using BlockFn = std::function<CMatrix(int di, int dj)>;
  BlockToeplitzOperator(int mx, int my, int n, const BlockFn& block);
  ~BlockToeplitzOperator();
  BlockToeplitzOperator(BlockToeplitzOperator&&) noexcept;
  BlockToeplitzOperator& operator=(BlockToeplitzOperator&&) noexcept;

  int mx() const { return mx_; }
  int my() const { return my_; }
  int block_size() const { return n_; }
  int size() const { return mx_ * my_ * n_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const CMatrix& block(int di, int dj) const;

  /// y = T x with x ordered cell-major (cell index j*mx + i).
  CVector apply(const CVector& x) const;
  /// Same product by explicit block sums.
  CVector apply_dense(const CVector& x) const;
  CMatrix dense() const;
  std::size_t memory_bytes() const;

 private:
  struct Plans;
  int mx_, my_, n_, lx_, ly_;
  std::vector<CMatrix> blocks_;    // (2mx-1)(2my-1), index (dj+my-1)*(2mx-1) + di+mx-1
  std::vector<CMatrix> spectra_;   // per frequency bin, n x n
  std::unique_ptr<Plans> plans_;
};

}  // namespace emsurf
