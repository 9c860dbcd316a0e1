// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/mesh/cell.hpp"
#include "emsurf/types.hpp"

#include <array>
#include <vector>

namespace emsurf {

/// Triangle geometry cached for integration, in global coordinates.
struct TriangleData {
  std::array<Vec3, 3> p;
  Vec3 n = Vec3::Zero();
  double area = 0.0;
  std::array<double, 3> len{};
  Vec3 centroid = Vec3::Zero();
  double size = 0.0;
};

TriangleData triangle_data(const UnitCellGeometry& cell, int tri, const Vec3& offset = Vec3::Zero());
TriangleData triangle_data(const std::array<Vec3, 3>& p);

/// True when both triangles have the same vertex set within the geometric tolerance.
bool coincident(const TriangleData& a, const TriangleData& b);

struct QuadratureOptions {
  /// Rule (number of points) on test and source for well-separated pairs.
  int far_points = 6;
  /// Outer rule on near pairs, subdivided `near_outer_levels` times.
  int near_outer_points = 7;
  int near_outer_levels = 1;
  /// Source rule for the smooth remainder on near pairs.
  int near_inner_points = 7;
  /// Pairs with centroid distance below near_factor * max edge are near.
  double near_factor = 2.0;
};

/// Galerkin integrals between the three canonical edge functions of a test
/// and a source triangle:
///   L[i][j] = int int G phi_i . phi'_j - (1/k^2) int int G div phi_i div' phi'_j
///   K[i][j] = p.v. int phi_i . (grad G x phi'_j)
struct PairIntegrals {
  std::array<std::array<cdouble, 3>, 3> L{};
  std::array<std::array<cdouble, 3>, 3> K{};
};

PairIntegrals triangle_pair(const TriangleData& test, const TriangleData& source, cdouble k,
                            const QuadratureOptions& quad = {});

/// Residual term (1/2) int phi_i . (n_in x phi'_j) over coincident triangles.
std::array<std::array<double, 3>, 3> identity_term(const TriangleData& test, const TriangleData& source,
                                                  const Vec3& n_in);

/// Homogeneous medium of one region.
struct RegionKernel {
  int region = kExteriorRegion;
  cdouble k{0.0, 0.0};
  cdouble eps_r{1.0, 0.0};
};

RegionKernel region_kernel(const Region& region, double frequency_hz);

/// A basis set placed in space: functions [first, first + count) of `basis`
/// on `cell` translated by `offset`.
struct BasisView {
  const UnitCellGeometry* cell = nullptr;
  const BasisSet* basis = nullptr;
  Vec3 offset = Vec3::Zero();
  int first = 0;
  int count = -1;

  int size() const { return count < 0 ? static_cast<int>(basis->size()) - first : count; }
  const RwgFunction& function(int i) const { return basis->functions[static_cast<std::size_t>(first + i)]; }
};

/// Where each view function lands in a target matrix. Index -1 drops it.
struct DofMap {
  std::vector<int> index;
  std::vector<int> sign;
  static DofMap identity(int n);
};

enum class FieldKind { E, H };
enum class OperatorKind { L, K };

/// Multipliers of the four sub-blocks of a region system with magnetic
/// unknowns scaled by 1/eta0 and electric-field rows by 1/eta0.
struct BlockCoefficients {
  cdouble l_e, k_e, k_h, l_h;
};
BlockCoefficients block_coefficients(const RegionKernel& kernel);

/// Adds the region operator [L_E K_E; K_H L_H] between test and source views
/// into `out` through the row and column maps. Test-side normals point into
/// kernel.region; the residual identity term is added on coincident pairs.
void assemble_region(const BasisView& test, const BasisView& source, const RegionKernel& kernel,
                     const QuadratureOptions& quad, const DofMap& rows, const DofMap& cols, CMatrix& out);

/// One scaled operator block, regardless of function kinds: alpha = E gives
/// the electric-field row scaling and alpha = H the magnetic one.
CMatrix assemble_operator(FieldKind alpha, OperatorKind op, const BasisView& test, const BasisView& source,
                          const RegionKernel& kernel, const QuadratureOptions& quad = {});

/// Unscaled Galerkin L or K (K including the identity term on coincident pairs).
CMatrix assemble_raw(OperatorKind op, const BasisView& test, const BasisView& source, const RegionKernel& kernel,
                     const QuadratureOptions& quad = {});

/// Near-pair integrals split as G = 1/(4 pi R) + (G - 1/(4 pi R)): the
/// static part analytic on the source, the smooth part by quadrature.
/// `vector` holds int int G phi_i . phi'_j and `scalar` int int G.
struct SingularTerms {
  std::array<std::array<double, 3>, 3> static_vector{};
  double static_scalar = 0.0;
  std::array<std::array<cdouble, 3>, 3> smooth_vector{};
  cdouble smooth_scalar{0.0, 0.0};
};

SingularTerms singular_self_term(const TriangleData& test, const TriangleData& source, cdouble k,
                                 const QuadratureOptions& quad = {});

}  // namespace emsurf
