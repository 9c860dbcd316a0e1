// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/coupling/system.hpp"
#include "emsurf/coupling/toeplitz.hpp"
#include "emsurf/kernels/sources.hpp"
#include "emsurf/macromodel/cache.hpp"
#include "emsurf/macromodel/connectivity.hpp"
#include "emsurf/mesh/layout.hpp"
#include "emsurf/postproc/farfield.hpp"
#include "emsurf/solve/gmres.hpp"
#include "emsurf/solve/reference.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace emsurf {

/// Array geometry ready for either solver. Coordinates handed to sources and
/// far fields are relative to the array center.
struct ArraySetup {
  std::vector<UnitCellGeometry> unique_cells;
  ArrayLayout layout;
  std::vector<UnitCellGeometry> entry_cells;  // rotated geometry per layout entry
  ToeplitzReport toeplitz;
  Vec3 center = Vec3::Zero();
};

ArraySetup prepare_array(std::vector<UnitCellGeometry> unique_cells, const LayoutSpec& spec);

struct RunOptions {
  QuadratureOptions quad;
  GmresOptions gmres;
  bool preconditioner = true;
  /// Assemble Z0 densely even when the Toeplitz conditions hold.
  bool force_dense = false;
  bool rim_merge = true;
  ReferenceOptions reference;
};

struct MacromodelRun {
  double frequency = 0.0;
  std::vector<BasisSet> eq;                     // per entry
  std::vector<InteriorConnectivity> interior;   // per entry
  std::vector<int> interior_unknowns;           // per entry
  std::vector<const Macromodel*> entry_models;  // per entry, owned by the cache
  AssembledSystem system;
  GmresResult solution;
  CVector y;  // expanded eq coefficients
  int cache_hits = 0;
  int cache_builds = 0;
  std::map<std::string, double> timings;
  double peak_memory_bytes = 0.0;
};

/// Macromodels, exterior coupling and the iterative solve of the array.
MacromodelRun run_macromodel(const ArraySetup& setup, const IncidentSource& source, const RunOptions& options,
                             MacromodelCache& cache);

/// Equivalent bases and expanded offsets only, enough to radiate a stored
/// solution without assembling anything.
MacromodelRun macromodel_layout(const ArraySetup& setup, double frequency);

/// Radiator over the exterior equivalent currents of every placement.
Radiator macromodel_radiator(const ArraySetup& setup, const MacromodelRun& run, const CVector& y);

struct OracleRun {
  double frequency = 0.0;
  ReferenceSolution solution;
  std::map<std::string, double> timings;
};

/// Direct solve of the merged array without equivalent surfaces.
OracleRun run_oracle(const ArraySetup& setup, const IncidentSource& source, const RunOptions& options);

Radiator oracle_radiator(const ArraySetup& setup, const OracleRun& run);

/// Exterior-region coefficients of an oracle solution.
CVector oracle_exterior(const OracleRun& run);
/// Rebuilds an oracle run from stored exterior-region coefficients.
OracleRun oracle_from_exterior(const ArraySetup& setup, double frequency, const CVector& exterior);

/// Identifies the array geometry a stored solution belongs to.
std::uint64_t layout_hash(const ArraySetup& setup);

/// Cache key of one entry's macromodel.
std::uint64_t macromodel_key(const UnitCellGeometry& cell, const BasisSet& eq, double frequency,
                             const QuadratureOptions& quad);

}  // namespace emsurf
