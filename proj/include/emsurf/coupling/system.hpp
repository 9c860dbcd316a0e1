// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/coupling/exterior.hpp"
#include "emsurf/coupling/toeplitz.hpp"
#include "emsurf/macromodel/schur.hpp"

#include <optional>
#include <vector>

namespace emsurf {

enum class CouplingPath { Fft, Dense, None };

/// Implicit operator U0^T (Z_eq + Z0) U0 and its excitation U0^T V.
struct AssembledSystem {
  std::vector<int> offsets;                 // first expanded row per placement
  std::vector<const Macromodel*> models;    // per placement
  std::optional<BlockToeplitzOperator> toeplitz;
  CMatrix z0_dense;
  CouplingPath path = CouplingPath::Dense;
  ExteriorConnectivity u0;
  CVector v;        // expanded excitation
  CVector v_tilde;  // projected excitation

  int expanded_size() const { return u0.rows; }
  int unknowns() const { return u0.unknowns; }
  /// (Z_eq + Z0) Y on expanded coefficients.
  CVector apply_expanded(const CVector& y) const;
  /// Dense Z0 regardless of storage.
  CMatrix z0() const;
};

CVector apply_system(const AssembledSystem& system, const CVector& y_tilde);

/// Dense U0^T (Z_eq + Z0) U0, for small systems and tests.
CMatrix dense_system(const AssembledSystem& system);

}  // namespace emsurf
