// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/mesh/point_index.hpp"

#include <cmath>

namespace emsurf {

PointIndex::PointIndex(double tol) : tol_(tol), cell_(std::max(1e3 * tol, 1e-12)) {}

std::int64_t PointIndex::key(std::int64_t i, std::int64_t j, std::int64_t k) const {
  return (i * 73856093LL) ^ (j * 19349663LL) ^ (k * 83492791LL);
}

int PointIndex::find(const Vec3& p) const {
  const auto i0 = static_cast<std::int64_t>(std::floor(p.x() / cell_));
  const auto j0 = static_cast<std::int64_t>(std::floor(p.y() / cell_));
  const auto k0 = static_cast<std::int64_t>(std::floor(p.z() / cell_));
  int best = -1;
  double best_d = tol_;
  for (std::int64_t di = -1; di <= 1; ++di)
    for (std::int64_t dj = -1; dj <= 1; ++dj)
      for (std::int64_t dk = -1; dk <= 1; ++dk) {
        auto range = buckets_.equal_range(key(i0 + di, j0 + dj, k0 + dk));
        for (auto it = range.first; it != range.second; ++it) {
          const double d = (points_[static_cast<std::size_t>(it->second)] - p).norm();
          if (d <= best_d && (best < 0 || it->second < best || d < best_d)) {
            best = it->second;
            best_d = d;
          }
        }
      }
  return best;
}

int PointIndex::insert(const Vec3& p) {
  const int found = find(p);
  if (found >= 0) return found;
  const int id = static_cast<int>(points_.size());
  points_.push_back(p);
  buckets_.emplace(key(static_cast<std::int64_t>(std::floor(p.x() / cell_)),
                       static_cast<std::int64_t>(std::floor(p.y() / cell_)),
                       static_cast<std::int64_t>(std::floor(p.z() / cell_))),
                   id);
  return id;
}

}  // namespace emsurf
