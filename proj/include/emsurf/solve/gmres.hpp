// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace emsurf {

using LinearOperator = std::function<CVector(const CVector&)>;

struct GmresOptions {
  double tol = 1e-4;
  int restart = 200;
  int max_iterations = 2000;
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// Relative residual after each iteration (index 0 is the initial residual).
  std::vector<double> residuals;
  /// True relative residual |b - A x| / |b| at exit.
  double final_residual = 0.0;
  std::map<std::string, double> phase_seconds;
  double peak_memory_bytes = 0.0;
};

struct GmresResult {
  CVector x;
  SolveReport report;
};

/// Restarted GMRES with right preconditioning (Givens rotations), starting
/// from zero. `precond` may be empty.
GmresResult gmres(const LinearOperator& a, const CVector& b, const GmresOptions& options = {},
                  const LinearOperator& precond = {});

}  // namespace emsurf
