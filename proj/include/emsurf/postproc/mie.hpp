// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <vector>

namespace emsurf {

/// Scattering amplitudes S1, S2 of a homogeneous sphere at scattering angle
/// theta (from the forward direction).
struct MieAmplitudes {
  cdouble s1{0.0, 0.0};
  cdouble s2{0.0, 0.0};
};

class MieSphere {
 public:
  /// Sphere of radius `radius` with relative index sqrt(eps_r) in free space.
  MieSphere(double radius, cdouble eps_r, double frequency_hz);
  MieAmplitudes amplitudes(double theta_rad) const;
  /// Bistatic RCS (m^2) for a plane wave along +z polarized along x, observed
  /// at (theta, phi).
  double bistatic_rcs(double theta_rad, double phi_rad) const;
  int terms() const { return static_cast<int>(a_.size()); }

 private:
  double k_;
  std::vector<cdouble> a_, b_;
};

}  // namespace emsurf
