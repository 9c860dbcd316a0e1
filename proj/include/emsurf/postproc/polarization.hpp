// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/postproc/farfield.hpp"

#include <vector>

namespace emsurf {

struct CpField {
  cdouble rhcp{0.0, 0.0};
  cdouble lhcp{0.0, 0.0};
};

/// RHCP = (E_phi - j E_theta) / sqrt 2, LHCP = (E_phi + j E_theta) / sqrt 2.
CpField cp_decompose(cdouble e_theta, cdouble e_phi);

/// Circular components from the patterns of an x-polarized and a
/// y-polarized excitation.
CpField cp_dual(const FarField& x_pol, const FarField& y_pol);
std::vector<CpField> cp_dual(const FarFieldCut& x_pol, const FarFieldCut& y_pol);

/// Unwrapped rotation of the element at (x, y) steering to alpha0 with feed
/// distance F: -k0/2 [x sin(alpha0) - sqrt(x^2 + y^2 + F^2)], radians.
double rotation_angle(double x, double y, double focal, double alpha0_rad, double k0);

/// Angle wrapped to [0, 360) degrees and rounded to a multiple of `step`
/// degrees (ties toward +inf), with 360 mapped back to 0.
double round_rotation_deg(double angle_rad, double step_deg = 5.0);

}  // namespace emsurf
