// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <string>
#include <vector>

namespace emsurf {

/// Barycentric rule on the reference triangle; weights sum to one.
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int degree = 0;
  std::string label;
  std::size_t size() const { return weights.size(); }
};

/// Symmetric triangle rules with 1, 3, 6, 7 or 12 points.
const QuadratureRule& triangle_rule(int points);

/// Composite rule: each triangle split into 4^levels congruent subtriangles.
QuadratureRule subdivided_rule(const QuadratureRule& base, int levels);

/// Collapsed tensor Gauss-Legendre rule with n x n points, exact to degree 2n-2.
QuadratureRule conical_rule(int n);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace emsurf
