// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

// Small geometry helpers shared by the unit suites.

#pragma once

#include "emsurf/fixtures/meshgen.hpp"
#include "emsurf/mesh/cell.hpp"
#include "emsurf/mesh/msh.hpp"

#include <random>

namespace emsurf::test {

/// Axis-aligned box surface split into n x n quads per face (two triangles
/// each), outward normals, one tag.
inline RawMesh box_mesh(const Vec3& lo, const Vec3& hi, int n = 1, int tag = 1) {
  RawMesh m;
  auto node = [&](const Vec3& p) {
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
      if ((m.nodes[i] - p).norm() < 1e-12) return static_cast<int>(i);
    m.nodes.push_back(p);
    return static_cast<int>(m.nodes.size() - 1);
  };
  const Vec3 c = 0.5 * (lo + hi);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          auto pt = [&](int da, int db) {
            Vec3 p;
            p[axis] = side ? hi[axis] : lo[axis];
            p[u] = lo[u] + (hi[u] - lo[u]) * (a + da) / n;
            p[v] = lo[v] + (hi[v] - lo[v]) * (b + db) / n;
            return p;
          };
          const int p00 = node(pt(0, 0)), p10 = node(pt(1, 0)), p11 = node(pt(1, 1)), p01 = node(pt(0, 1));
          for (std::array<int, 3> t : {std::array<int, 3>{p00, p10, p11}, std::array<int, 3>{p00, p11, p01}}) {
            const Vec3 &A = m.nodes[static_cast<std::size_t>(t[0])], &B = m.nodes[static_cast<std::size_t>(t[1])],
                       &C = m.nodes[static_cast<std::size_t>(t[2])];
            if ((B - A).cross(C - A).dot((A + B + C) / 3.0 - c) < 0) std::swap(t[1], t[2]);
            m.triangles.push_back(t);
            m.tags.push_back(tag);
          }
        }
    }
  return m;
}

/// Air-filled box of side `size` holding a dielectric block, offset from the
/// center so rotations are visible. `n` sets the box mesh density.
inline UnitCellGeometry nested_box_cell(double size = 6e-3, cdouble eps = 3.0, int n = 2) {
  RawMesh m = box_mesh(Vec3(-size / 2, -size / 2, 0), Vec3(size / 2, size / 2, size / 3), n, 1);
  const RawMesh inner = box_mesh(Vec3(-size / 6, -size / 8, size / 12), Vec3(size / 4, size / 8, size / 4), n / 2, 2);
  const int off = static_cast<int>(m.nodes.size());
  m.nodes.insert(m.nodes.end(), inner.nodes.begin(), inner.nodes.end());
  for (auto t : inner.triangles) m.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  m.tags.insert(m.tags.end(), inner.tags.begin(), inner.tags.end());
  CellSpec s;
  s.name = "nested";
  s.regions = {{1, 1.0}, {2, eps}};
  s.tags = {{1, PatchKind::Equivalent, 1, kExteriorRegion}, {2, PatchKind::Dielectric, 2, 1}};
  return build_cell(m, s);
}

inline CellSpec single_region_spec(cdouble eps, PatchKind kind) {
  CellSpec s;
  s.regions = {{1, eps}};
  s.tags = {{1, kind, 1, kExteriorRegion}};
  return s;
}

/// Air cell with a PEC strip at mid-height running along x. With `through`
/// the strip crosses both x faces; otherwise it ends `gap` short of the +x
/// face and starts on the -x face.
inline LayeredCellParams strip_cell_params(bool through, double size = 6e-3) {
  LayeredCellParams p;
  p.size_x = size;
  p.size_y = size;
  p.thickness = {1e-3, 1e-3};
  p.eps = {1.0, 1.0};
  p.h_eq = 2e-3;
  p.h_mid = 2e-3;
  p.h_pec = 1e-3;
  const double h = size / 2;
  p.pec = {{-h, through ? h : h - 2e-3, -0.5e-3, 0.5e-3}};
  p.refine = {{-h, h, -0.5e-3, 0.5e-3}};
  return p;
}

/// Through-strip cell variant whose strip spans y0..y1 (none when y1 <= y0).
/// All variants share one refinement window so their box meshes conform.
inline LayeredCellParams offset_strip_params(double y0, double y1) {
  LayeredCellParams p = strip_cell_params(true);
  const double h = p.size_x / 2;
  p.refine = {{-h, h, -0.5e-3, 1.5e-3}};
  p.pec.clear();
  if (y1 > y0) p.pec = {{-h, h, y0, y1}};
  return p;
}

inline CVector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cdouble(d(rng), d(rng));
  return v;
}

inline CMatrix random_matrix(int r, int c, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CMatrix m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = cdouble(d(rng), d(rng));
  return m;
}

}  // namespace emsurf::test
