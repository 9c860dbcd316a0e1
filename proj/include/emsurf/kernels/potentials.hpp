// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <array>

namespace emsurf {

/// Static potential integrals of a flat source triangle seen from point r:
/// i0 = int 1/R dS', i1 = int (r' - r)/R dS', grad_i0 = grad_r i0.
/// The normal part of grad_i0 is the principal value (zero) when r lies in
/// the plane of the triangle.
struct StaticPotentials {
  double i0 = 0.0;
  Vec3 i1 = Vec3::Zero();
  Vec3 grad_i0 = Vec3::Zero();
};

StaticPotentials static_potentials(const std::array<Vec3, 3>& tri, const Vec3& r);

/// Closed form of the double integral of 1/|r - r'| over a triangle with itself.
double static_self_integral(const std::array<Vec3, 3>& tri);

}  // namespace emsurf
