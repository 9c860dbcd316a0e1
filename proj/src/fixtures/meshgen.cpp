// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/fixtures/meshgen.hpp"

#include "emsurf/mesh/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace emsurf {

namespace {

class MeshBuilder {
 public:
  int node(const Vec3& p) {
    const int id = index_.insert(p);
    if (id == static_cast<int>(mesh_.nodes.size())) mesh_.nodes.push_back(p);
    return id;
  }
  // Adds a triangle, flipped if needed so that its normal agrees with `outward`.
  void tri(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& outward, int tag) {
    std::array<int, 3> t{node(a), node(b), node(c)};
    if ((b - a).cross(c - a).dot(outward) < 0) std::swap(t[1], t[2]);
    mesh_.triangles.push_back(t);
    mesh_.tags.push_back(tag);
  }
  RawMesh take() { return std::move(mesh_); }

 private:
  PointIndex index_;
  RawMesh mesh_;
};

std::vector<double> uniform(double a, double b, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
  return out;
}

// Breakpoints over [a, b] honoring fixed cuts; intervals covered by any of
// `fine` use spacing h_fine, others h.
std::vector<double> graded(double a, double b, std::vector<double> cuts, const std::vector<std::pair<double, double>>& fine,
                           double h, double h_fine) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> uniq;
  for (double c : cuts)
    if (c >= a - 1e-12 && c <= b + 1e-12 && (uniq.empty() || c - uniq.back() > 1e-9)) uniq.push_back(c);
  std::vector<double> out{uniq.front()};
  for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
    const double lo = uniq[i], hi = uniq[i + 1], mid = 0.5 * (lo + hi);
    bool in_fine = false;
    for (const auto& [f0, f1] : fine) in_fine = in_fine || (mid > f0 && mid < f1);
    const auto seg = uniform(lo, hi, in_fine ? h_fine : h);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

void grid_face(MeshBuilder& mb, const std::vector<double>& xs, const std::vector<double>& ys, double z,
               const Vec3& outward, const std::function<int(double, double)>& tag_at) {
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Vec3 a(xs[i], ys[j], z), b(xs[i + 1], ys[j], z), c(xs[i + 1], ys[j + 1], z), d(xs[i], ys[j + 1], z);
      const int tag = tag_at(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
      // Alternate the diagonal for a less biased mesh.
      if ((i + j) % 2 == 0) {
        mb.tri(a, b, c, outward, tag);
        mb.tri(a, c, d, outward, tag);
      } else {
        mb.tri(a, b, d, outward, tag);
        mb.tri(b, c, d, outward, tag);
      }
    }
  }
}

// Triangulates the strip between two polylines at heights z0 < z1 that share
// their end abscissae, by merging the two sorted point sequences.
void zip(MeshBuilder& mb, const std::vector<double>& lower, double z0, const std::vector<double>& upper, double z1,
         const std::function<Vec3(double, double)>& map, const Vec3& outward, int tag) {
  std::size_t i = 0, j = 0;
  while (i + 1 < lower.size() || j + 1 < upper.size()) {
    const bool advance_lower = j + 1 >= upper.size() || (i + 1 < lower.size() && lower[i + 1] <= upper[j + 1]);
    if (advance_lower) {
      mb.tri(map(lower[i], z0), map(lower[i + 1], z0), map(upper[j], z1), outward, tag);
      ++i;
    } else {
      mb.tri(map(lower[i], z0), map(upper[j + 1], z1), map(upper[j], z1), outward, tag);
      ++j;
    }
  }
}

}  // namespace

RawMesh layered_cell_mesh(const LayeredCellParams& p) {
  if (p.thickness.empty() || p.thickness.size() > 2 || p.eps.size() != p.thickness.size())
    throw Error(ErrorKind::Config, "layered cell needs one or two layers with matching permittivities");
  if (!p.pec.empty() && p.thickness.size() != 2)
    throw Error(ErrorKind::Config, "PEC rectangles need two layers (they sit on the interface)");
  const double hx = 0.5 * p.size_x, hy = 0.5 * p.size_y;
  const bool two = p.thickness.size() == 2;
  const double zb = two ? -p.thickness[0] : -0.5 * p.thickness[0];
  const double zt = two ? p.thickness[1] : 0.5 * p.thickness[0];

  const auto xs_eq = uniform(-hx, hx, p.h_eq), ys_eq = uniform(-hy, hy, p.h_eq);
  std::vector<double> cx = p.extra_x, cy = p.extra_y;
  std::vector<std::pair<double, double>> fx, fy;
  std::vector<Rect> fine_rects = p.pec;
  fine_rects.insert(fine_rects.end(), p.refine.begin(), p.refine.end());
  for (const auto& r : fine_rects) {
    cx.insert(cx.end(), {r.x0, r.x1});
    cy.insert(cy.end(), {r.y0, r.y1});
    fx.emplace_back(r.x0, r.x1);
    fy.emplace_back(r.y0, r.y1);
  }
  const auto xs_mid = graded(-hx, hx, cx, fx, p.h_mid, p.h_pec);
  const auto ys_mid = graded(-hy, hy, cy, fy, p.h_mid, p.h_pec);

  MeshBuilder mb;
  const int top_tag = two ? kTagEqTop : kTagEqBottom;
  grid_face(mb, xs_eq, ys_eq, zb, -Vec3::UnitZ(), [](double, double) { return kTagEqBottom; });
  grid_face(mb, xs_eq, ys_eq, zt, Vec3::UnitZ(), [&](double, double) { return top_tag; });
  if (two) {
    grid_face(mb, xs_mid, ys_mid, 0.0, Vec3::UnitZ(), [&](double x, double y) {
      for (const auto& r : p.pec)
        if (x > r.x0 && x < r.x1 && y > r.y0 && y < r.y1) return static_cast<int>(kTagPec);
      return static_cast<int>(kTagInterface);
    });
  }

  // Side faces: bands between the z levels, each band subdivided to about h_eq.
  struct Band {
    double z0, z1;
    const std::vector<double>*lo_x, *hi_x, *lo_y, *hi_y;
    int tag;
  };
  std::vector<Band> bands;
  if (two) {
    bands.push_back({zb, 0.0, &xs_eq, &xs_mid, &ys_eq, &ys_mid, kTagEqBottom});
    bands.push_back({0.0, zt, &xs_mid, &xs_eq, &ys_mid, &ys_eq, kTagEqTop});
  } else {
    bands.push_back({zb, zt, &xs_eq, &xs_eq, &ys_eq, &ys_eq, kTagEqBottom});
  }
  for (const auto& b : bands) {
    const auto levels = uniform(b.z0, b.z1, p.h_eq);
    for (int face = 0; face < 4; ++face) {
      const bool x_face = face < 2;
      const double s = (face % 2 == 0) ? -1.0 : 1.0;
      const Vec3 outward = x_face ? Vec3(s, 0, 0) : Vec3(0, s, 0);
      const auto* lo = x_face ? b.lo_y : b.lo_x;
      const auto* hi = x_face ? b.hi_y : b.hi_x;
      const auto& coarse = x_face ? ys_eq : xs_eq;
      auto map = [&](double u, double z) { return x_face ? Vec3(s * hx, u, z) : Vec3(u, s * hy, z); };
      for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const auto& l0 = k == 0 ? *lo : coarse;
        const auto& l1 = k + 2 == levels.size() ? *hi : coarse;
        zip(mb, l0, levels[k], l1, levels[k + 1], map, outward, b.tag);
      }
    }
  }
  RawMesh mesh = mb.take();
  mesh.physical_names = {{kTagEqBottom, "eq_bottom"}, {kTagEqTop, "eq_top"}, {kTagInterface, "interface"}, {kTagPec, "pec"}};
  if (!two) mesh.physical_names.erase(kTagEqTop);
  return mesh;
}

CellSpec layered_cell_spec(const LayeredCellParams& p, const std::string& name) {
  CellSpec spec;
  spec.name = name;
  spec.regions.push_back({1, p.eps.at(0)});
  spec.tags.push_back({kTagEqBottom, PatchKind::Equivalent, 1, kExteriorRegion});
  if (p.thickness.size() == 2) {
    spec.regions.push_back({2, p.eps.at(1)});
    spec.tags.push_back({kTagEqTop, PatchKind::Equivalent, 2, kExteriorRegion});
    spec.tags.push_back({kTagInterface, PatchKind::Dielectric, 1, 2});
    spec.tags.push_back({kTagPec, PatchKind::Pec, 1, 2});
  }
  return spec;
}

UnitCellGeometry layered_cell(const LayeredCellParams& p, const std::string& name) {
  return build_cell(layered_cell_mesh(p), layered_cell_spec(p, name));
}

namespace {

const std::vector<Vec3>& icosahedron_vertices() {
  static const std::vector<Vec3> v = [] {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> p = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                           {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
    for (auto& q : p) q.normalize();
    return p;
  }();
  return v;
}

const std::vector<std::array<int, 3>> kIcosahedronFaces = {
    {0, 11, 5}, {0, 5, 1}, {0, 1, 7},  {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4},  {3, 4, 2}, {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5}, {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

// Unit-sphere geodesic mesh: every icosahedron face split into n^2 triangles.
std::pair<std::vector<Vec3>, std::vector<std::array<int, 3>>> geodesic(int n) {
  const auto& v = icosahedron_vertices();
  PointIndex index(1e-12);
  std::vector<std::array<int, 3>> tris;
  for (const auto& f : kIcosahedronFaces) {
    const Vec3 &a = v[static_cast<std::size_t>(f[0])], &b = v[static_cast<std::size_t>(f[1])], &c = v[static_cast<std::size_t>(f[2])];
    auto id = [&](int i, int j) { return index.insert((a + (b - a) * i / n + (c - a) * j / n).normalized()); };
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) {
        tris.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        if (i + j + 1 < n) tris.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      }
  }
  return {index.points(), tris};
}

RawMesh sphere_raw(const std::vector<Vec3>& v, std::vector<std::array<int, 3>> f, double radius, const Vec3& center) {
  RawMesh mesh;
  for (const auto& p : v) mesh.nodes.push_back(center + radius * p);
  for (auto t : f) {
    const Vec3 &a = v[static_cast<std::size_t>(t[0])], &b = v[static_cast<std::size_t>(t[1])],
               &c = v[static_cast<std::size_t>(t[2])];
    if ((b - a).cross(c - a).dot(a + b + c) < 0) std::swap(t[1], t[2]);
    mesh.triangles.push_back(t);
    mesh.tags.push_back(1);
  }
  mesh.physical_names = {{1, "surface"}};
  return mesh;
}

}  // namespace

RawMesh icosphere_mesh(double radius, int level, const Vec3& center) {
  auto [v, f] = geodesic(1 << level);
  return sphere_raw(v, f, radius, center);
}

RawMesh geodesic_sphere_mesh(double radius, double max_edge, bool equal_volume, const Vec3& center) {
  if (!(max_edge > 0.0) || !(radius > 0.0)) throw Error(ErrorKind::Config, "sphere radius and edge length must be positive");
  for (int n = 1;; ++n) {
    auto [v, f] = geodesic(n);
    double longest = 0.0, volume = 0.0;
    for (const auto& t : f) {
      const Vec3 &a = v[static_cast<std::size_t>(t[0])], &b = v[static_cast<std::size_t>(t[1])], &c = v[static_cast<std::size_t>(t[2])];
      longest = std::max({longest, (b - a).norm(), (c - b).norm(), (a - c).norm()});
      volume += std::abs(a.dot(b.cross(c))) / 6.0;
    }
    if (longest * radius > max_edge && n < 64) continue;
    // Equal volume: scale the inscribed polyhedron up to the sphere's volume.
    const double scale = equal_volume ? std::cbrt(4.0 * kPi / 3.0 / volume) : 1.0;
    return sphere_raw(v, f, radius * scale, center);
  }
}

CellSpec dielectric_body_spec(cdouble eps_r, const std::string& name) {
  CellSpec spec;
  spec.name = name;
  spec.regions.push_back({1, eps_r});
  spec.tags.push_back({1, PatchKind::Dielectric, 1, kExteriorRegion});
  return spec;
}

}  // namespace emsurf
