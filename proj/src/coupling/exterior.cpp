// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/coupling/exterior.hpp"

#include <cmath>
#include <map>

namespace emsurf {

Eigen::SparseMatrix<double> ExteriorConnectivity::matrix() const {
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < rows; ++r)
    if (col[static_cast<std::size_t>(r)] >= 0) t.emplace_back(r, col[static_cast<std::size_t>(r)], sign[static_cast<std::size_t>(r)]);
  Eigen::SparseMatrix<double> m(rows, unknowns);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

CVector ExteriorConnectivity::expand(const CVector& y) const {
  CVector x = CVector::Zero(rows);
  for (int r = 0; r < rows; ++r)
    if (col[static_cast<std::size_t>(r)] >= 0) x(r) = static_cast<double>(sign[static_cast<std::size_t>(r)]) * y(col[static_cast<std::size_t>(r)]);
  return x;
}

CVector ExteriorConnectivity::project(const CVector& x) const {
  CVector y = CVector::Zero(unknowns);
  for (int r = 0; r < rows; ++r)
    if (col[static_cast<std::size_t>(r)] >= 0) y(col[static_cast<std::size_t>(r)]) += static_cast<double>(sign[static_cast<std::size_t>(r)]) * x(r);
  return y;
}

namespace {

using Key = std::array<long long, 7>;

long long q(double v) { return std::llround(v / (10.0 * kGeomTol)); }

// Piece lookup of one entry on the side faces: (kind, edge midpoint, triangle
// centroid) relative to the box corner -> (function, piece sign).
struct PieceIndex {
  std::map<Key, std::pair<int, int>> map;
};

Vec3 edge_mid(const UnitCellGeometry& c, int e) {
  const auto& r = c.edges[static_cast<std::size_t>(e)];
  return 0.5 * (c.vertices[static_cast<std::size_t>(r.v[0])] + c.vertices[static_cast<std::size_t>(r.v[1])]);
}

Key make_key(int kind, const Vec3& mid, const Vec3& cen) {
  return {kind, q(mid.x()), q(mid.y()), q(mid.z()), q(cen.x()), q(cen.y()), q(cen.z())};
}

PieceIndex index_entry(const EntryModel& e) {
  PieceIndex idx;
  const auto& c = *e.cell;
  for (int f = 0; f < static_cast<int>(e.eq->size()); ++f) {
    const auto& fn = e.eq->functions[static_cast<std::size_t>(f)];
    for (int p = 0; p < fn.count; ++p) {
      const auto& pc = fn.pieces[static_cast<std::size_t>(p)];
      const Face face = c.triangles[static_cast<std::size_t>(pc.tri)].face;
      if (face == Face::PosZ || face == Face::NegZ || face == Face::Interior) continue;
      idx.map[make_key(static_cast<int>(fn.kind), edge_mid(c, fn.edge) - c.box.lo, c.centroid(pc.tri) - c.box.lo)] = {f, pc.sign};
    }
  }
  return idx;
}

}  // namespace

ExteriorConnectivity build_exterior_connectivity(const ArrayLayout& layout, const std::vector<EntryModel>& entries,
                                                 bool rim_merge) {
  ExteriorConnectivity u;
  const int np = static_cast<int>(layout.cells.size());
  for (int p = 0; p < np; ++p) {
    u.offsets.push_back(u.rows);
    u.rows += static_cast<int>(entries.at(static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(p)].entry)).eq->size());
  }
  ParityUnionFind uf(u.rows);
  auto unite = [&](int a, int b, int s) {
    if (!uf.unite(a, b, s)) throw Error(ErrorKind::Geometry, "inconsistent current orientation across equivalent surfaces");
  };

  // Interior ties of each placement.
  for (int p = 0; p < np; ++p) {
    const auto& em = entries[static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(p)].entry)];
    for (const auto& t : em.interior->ties) unite(u.offsets[static_cast<std::size_t>(p)] + t.rep, u.offsets[static_cast<std::size_t>(p)] + t.dof, t.sign);
  }

  std::vector<PieceIndex> index;
  for (const auto& e : entries) index.push_back(index_entry(e));

  // Seams across +x and +y faces.
  for (int p = 0; p < np; ++p) {
    const auto& pl = layout.cells[static_cast<std::size_t>(p)];
    const auto& em = entries[static_cast<std::size_t>(pl.entry)];
    const auto& c = *em.cell;
    for (Face face : {Face::PosX, Face::PosY}) {
      const int nb = layout.neighbor(p, face);
      if (nb < 0) continue;
      const int nb_entry = layout.cells[static_cast<std::size_t>(nb)].entry;
      const Vec3 shift = face == Face::PosX ? Vec3(layout.pitch_x, 0, 0) : Vec3(0, layout.pitch_y, 0);
      for (int f = 0; f < static_cast<int>(em.eq->size()); ++f) {
        const auto& fn = em.eq->functions[static_cast<std::size_t>(f)];
        for (int k = 0; k < fn.count; ++k) {
          const auto& pc = fn.pieces[static_cast<std::size_t>(k)];
          if (c.triangles[static_cast<std::size_t>(pc.tri)].face != face) continue;
          const Key key = make_key(static_cast<int>(fn.kind), edge_mid(c, fn.edge) - c.box.lo - shift,
                                   c.centroid(pc.tri) - c.box.lo - shift);
          const auto& nmap = index[static_cast<std::size_t>(nb_entry)].map;
          auto it = nmap.find(key);
          if (it == nmap.end()) throw Error(ErrorKind::Geometry, "non-congruent seam meshes between adjacent cells");
          unite(u.offsets[static_cast<std::size_t>(p)] + f, u.offsets[static_cast<std::size_t>(nb)] + it->second.first,
                link_sign(pc.sign, it->second.second));
          ++u.seam_links;
        }
      }
    }
  }

  // Traversal halves on faces without a neighbor: the trace ends there.
  if (rim_merge) {
    for (int p = 0; p < np; ++p) {
      const auto& em = entries[static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(p)].entry)];
      const auto& c = *em.cell;
      std::map<int, int> first_half;
      for (int f = 0; f < static_cast<int>(em.eq->size()); ++f) {
        const auto& fn = em.eq->functions[static_cast<std::size_t>(f)];
        if (!fn.half() || c.edges[static_cast<std::size_t>(fn.edge)].cls != EdgeClass::Traversal) continue;
        const Face face = c.triangles[static_cast<std::size_t>(fn.pieces[0].tri)].face;
        const bool side = face != Face::PosZ && face != Face::NegZ;
        if (side && layout.neighbor(p, face) >= 0) continue;
        auto [it, inserted] = first_half.try_emplace(fn.edge, f);
        if (inserted) continue;
        const auto& fa = em.eq->functions[static_cast<std::size_t>(it->second)];
        unite(u.offsets[static_cast<std::size_t>(p)] + it->second, u.offsets[static_cast<std::size_t>(p)] + f,
              link_sign(fa.pieces[0].sign, fn.pieces[0].sign));
        ++u.rim_merges;
      }
    }
  }

  // Drop classes that contain an inactive coefficient.
  std::vector<char> dead(static_cast<std::size_t>(u.rows), 0);
  for (int p = 0; p < np; ++p) {
    const auto& em = entries[static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(p)].entry)];
    for (int d = 0; d < static_cast<int>(em.eq->size()); ++d)
      if (!em.interior->eq_active[static_cast<std::size_t>(d)]) dead[static_cast<std::size_t>(uf.find(u.offsets[static_cast<std::size_t>(p)] + d).first)] = 1;
  }
  u.col.assign(static_cast<std::size_t>(u.rows), -1);
  u.sign.assign(static_cast<std::size_t>(u.rows), 0);
  std::map<int, int> column;
  for (int r = 0; r < u.rows; ++r) {
    auto [root, par] = uf.find(r);
    if (dead[static_cast<std::size_t>(root)]) {
      ++u.dropped;
      continue;
    }
    auto [it, inserted] = column.try_emplace(root, static_cast<int>(column.size()));
    (void)inserted;
    u.col[static_cast<std::size_t>(r)] = it->second;
    u.sign[static_cast<std::size_t>(r)] = par;
  }
  u.unknowns = static_cast<int>(column.size());
  return u;
}

CMatrix assemble_coupling_block(const UnitCellGeometry& test_cell, const BasisSet& test_eq, const Vec3& test_offset,
                                const UnitCellGeometry& source_cell, const BasisSet& source_eq,
                                const Vec3& source_offset, double frequency_hz, const QuadratureOptions& quad) {
  BasisView tv{&test_cell, &test_eq, test_offset, 0, static_cast<int>(test_eq.size())};
  BasisView sv{&source_cell, &source_eq, source_offset, 0, static_cast<int>(source_eq.size())};
  const RegionKernel k = region_kernel(Region{kExteriorRegion, 1.0}, frequency_hz);
  CMatrix z = CMatrix::Zero(tv.size(), sv.size());
  assemble_region(tv, sv, k, quad, DofMap::identity(tv.size()), DofMap::identity(sv.size()), z);
  return z;
}

}  // namespace emsurf
