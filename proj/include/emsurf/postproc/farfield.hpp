// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/basis/rwg.hpp"
#include "emsurf/types.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace emsurf {

/// Coefficients of functions [first, first + coeff.size()) of `basis` placed
/// at `offset`. Magnetic coefficients are M / eta0.
struct CurrentSet {
  const UnitCellGeometry* cell = nullptr;
  const BasisSet* basis = nullptr;
  Vec3 offset = Vec3::Zero();
  int first = 0;
  CVector coeff;
};

/// Far-zone field with exp(-j k0 r) / r removed, phase referenced to the origin.
struct FarField {
  cdouble e_theta{0.0, 0.0};
  cdouble e_phi{0.0, 0.0};
  double intensity() const { return (std::norm(e_theta) + std::norm(e_phi)) / (2.0 * kEta0); }
};

/// Sampled free-space radiation of electric and magnetic surface currents.
class Radiator {
 public:
  Radiator(const std::vector<CurrentSet>& currents, double frequency_hz, int quad_points = 6);
  FarField field(double theta_rad, double phi_rad) const;
  double wavenumber() const { return k_; }

 private:
  double k_;
  std::vector<Vec3> points_;
  std::vector<CVec3> j_;  // weighted J at each point
  std::vector<CVec3> m_;  // weighted M (physical units)
};

struct FarFieldCut {
  double phi_deg = 0.0;
  std::vector<double> theta_deg;
  std::vector<FarField> field;
  std::vector<double> directivity_dbi;  // empty until normalized
};

using FieldFunction = std::function<FarField(double theta_rad, double phi_rad)>;

FarFieldCut radiate_cut(const FieldFunction& f, double phi_deg, const std::vector<double>& theta_deg);

/// Total radiated power by midpoint sampling in theta and uniform phi.
double radiated_power(const FieldFunction& f, int n_theta = 180, int n_phi = 360);

/// D = 4 pi U / P_rad.
double directivity(const FarField& e, double p_rad);
inline double to_dbi(double d) { return 10.0 * std::log10(std::max(d, 1e-300)); }

/// Fills the cut's directivity column.
void normalize_cut(FarFieldCut& cut, double p_rad);

/// Relative L2 distance of the complex field vectors of two cuts on the same
/// grid, normalized by the second cut.
double relative_l2(const FarFieldCut& a, const FarFieldCut& b);

/// theta_deg,phi_deg,re_Etheta,im_Etheta,re_Ephi,im_Ephi,D_dBi
void write_cut_csv(std::ostream& os, const FarFieldCut& cut);

}  // namespace emsurf
