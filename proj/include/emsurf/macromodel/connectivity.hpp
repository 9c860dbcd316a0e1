// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/mesh/cell.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace emsurf {

/// Union-find over signed nodes: every node carries a parity p with
/// value(node) = p * value(root).
class ParityUnionFind {
 public:
  explicit ParityUnionFind(int n = 0);
  int add();
  /// Root and parity of the node relative to its root.
  std::pair<int, int> find(int a);
  /// Imposes value(b) = sign * value(a). Returns false on a parity conflict.
  bool unite(int a, int b, int sign);
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> parity_;
  std::vector<int> rank_;
};

/// Two equivalent-surface coefficients forced equal up to sign: y[dof] = sign * y[rep].
struct EqTie {
  int dof = 0;
  int rep = 0;
  int sign = 1;
};

/// Sparse U of X = U [X_eq; X_int] with one signed entry per row.
struct InteriorConnectivity {
  int rows = 0;
  int n_eq = 0;
  int n_int = 0;
  std::vector<int> col;
  std::vector<int> sign;
  /// Relations among eq coefficients implied by interior continuity; the
  /// tied dof's column is empty and the exterior connectivity enforces them.
  std::vector<EqTie> ties;
  /// Eq coefficients that no interior unknown references (forced to zero).
  std::vector<char> eq_active;

  int cols() const { return n_eq + n_int; }
  Eigen::SparseMatrix<double> matrix() const;
  RMatrix dense() const;
};

/// Link sign between two coefficients sharing a non-PEC triangle: with piece
/// signs s_a and s_b on it, value_b = -s_a s_b value_a.
int link_sign(int s_a, int s_b);

/// Builds U for one cell. Region coefficients are linked across every shared
/// dielectric or equivalent triangle (PEC sheets carry independent currents
/// on their two sides). Eq coefficients take the first columns, in the order
/// of `eq`. Traversal edges on `terminating` faces merge their two halves
/// into one coefficient (the trace ends at the face).
InteriorConnectivity build_interior_connectivity(const UnitCellGeometry& cell, const CellBasis& regions,
                                                 const BasisSet& eq, const std::vector<Face>& terminating = {});

}  // namespace emsurf
