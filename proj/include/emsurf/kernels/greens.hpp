// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

namespace emsurf {

/// Homogeneous-medium Green's function exp(-jkR)/(4 pi R), e^{+j omega t}.
cdouble greens(cdouble k, const Vec3& r, const Vec3& rp);

/// G(R) - 1/(4 pi R), finite at R = 0 where it equals -jk/(4 pi).
cdouble greens_smooth(cdouble k, double R);

/// Radial factor g with grad_r G = (r - r') g(R).
cdouble greens_grad_factor(cdouble k, double R);

/// g(R) + 1/(4 pi R^3); bounded times R near zero.
cdouble greens_grad_factor_smooth(cdouble k, double R);

}  // namespace emsurf
