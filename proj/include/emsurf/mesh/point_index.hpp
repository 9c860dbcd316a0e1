// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace emsurf {

/// Spatial hash for matching points within an absolute tolerance.
class PointIndex {
 public:
  explicit PointIndex(double tol = kGeomTol);

  /// Returns the id of a stored point within tolerance of p, or -1.
  int find(const Vec3& p) const;
  /// Returns the existing id of a matching point, otherwise stores p with a new id.
  int insert(const Vec3& p);

  const std::vector<Vec3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::int64_t key(std::int64_t i, std::int64_t j, std::int64_t k) const;

  double tol_;
  double cell_;
  std::vector<Vec3> points_;
  std::unordered_multimap<std::int64_t, int> buckets_;
};

}  // namespace emsurf
