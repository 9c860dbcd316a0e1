// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/macromodel/cell_system.hpp"

#include <Eigen/LU>
#include <cstdint>
#include <memory>

namespace emsurf {

/// Reduced matrix of one unique cell on its equivalent surface, with the
/// interior factorization kept for back-substitution.
struct Macromodel {
  std::uint64_t id = 0;
  double frequency = 0.0;
  CMatrix z;  // n_eq x n_eq
  int n_int = 0;
  /// Reciprocal condition estimate of Z_ii (1 when there are no interior unknowns).
  double rcond = 1.0;
  /// Present when built in this run; absent for macromodels loaded from cache.
  std::shared_ptr<const Eigen::PartialPivLU<CMatrix>> lu_ii;
  CMatrix z_ie;

  int size() const { return static_cast<int>(z.rows()); }
  bool has_factors() const { return n_int == 0 || lu_ii != nullptr; }
};

/// Z_ee - Z_ei Z_ii^-1 Z_ie. Singular Z_ii raises a numerical error carrying
/// the condition estimate.
Macromodel schur_complement(const ReducedSystem& reduced, double rcond_floor = 1e-15);

/// Interior unknowns -Z_ii^-1 Z_ie x_eq.
CVector back_substitute(const Macromodel& model, const CVector& x_eq);

}  // namespace emsurf
