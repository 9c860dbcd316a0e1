// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/postproc/polarization.hpp"

#include <cmath>

namespace emsurf {

CpField cp_decompose(cdouble et, cdouble ep) {
  const double s = 1.0 / std::sqrt(2.0);
  return {(ep - kJ * et) * s, (ep + kJ * et) * s};
}

CpField cp_dual(const FarField& x, const FarField& y) {
  return {(x.e_theta - y.e_phi + kJ * (x.e_phi + y.e_theta)) / 2.0,
          (x.e_theta + y.e_phi + kJ * (-x.e_phi + y.e_theta)) / 2.0};
}

std::vector<CpField> cp_dual(const FarFieldCut& x, const FarFieldCut& y) {
  if (x.theta_deg != y.theta_deg || x.phi_deg != y.phi_deg)
    throw Error(ErrorKind::Config, "dual-polarization patterns are sampled on different grids");
  std::vector<CpField> out;
  for (std::size_t i = 0; i < x.field.size(); ++i) out.push_back(cp_dual(x.field[i], y.field[i]));
  return out;
}

double rotation_angle(double x, double y, double focal, double alpha0, double k0) {
  if (!(focal > 0.0)) throw Error(ErrorKind::Config, "focal distance must be positive");
  return -0.5 * k0 * (x * std::sin(alpha0) - std::sqrt(x * x + y * y + focal * focal));
}

double round_rotation_deg(double angle_rad, double step) {
  double d = std::fmod(angle_rad * 180.0 / kPi, 360.0);
  if (d < 0.0) d += 360.0;
  double r = std::floor(d / step + 0.5) * step;
  if (r >= 360.0) r -= 360.0;
  return r;
}

}  // namespace emsurf
