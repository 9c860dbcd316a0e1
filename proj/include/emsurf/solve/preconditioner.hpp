// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/coupling/system.hpp"

#include <Eigen/LU>
#include <vector>

namespace emsurf {

/// Block-Jacobi right preconditioner: LU factors of the principal
/// submatrices of U0^T (Z_eq + Z0) U0 over the unknowns of each cell. Each
/// unique unknown belongs to the first placement that references it.
class BlockJacobi {
 public:
  explicit BlockJacobi(const AssembledSystem& system);
  CVector apply(const CVector& x) const;
  int blocks() const { return static_cast<int>(index_.size()); }
  const std::vector<int>& block_indices(int b) const { return index_[static_cast<std::size_t>(b)]; }
  const CMatrix& block_matrix(int b) const { return local_[static_cast<std::size_t>(b)]; }

 private:
  std::vector<std::vector<int>> index_;
  std::vector<CMatrix> local_;
  std::vector<Eigen::PartialPivLU<CMatrix>> lu_;
};

}  // namespace emsurf
