// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/solve/reference.hpp"

#include "emsurf/macromodel/cell_system.hpp"
#include "emsurf/mesh/point_index.hpp"

#include <Eigen/LU>
#include <map>
#include <tuple>

namespace emsurf {

UnitCellGeometry merge_array(const ArrayLayout& layout, const std::vector<UnitCellGeometry>& entry_cells) {
  const int np = static_cast<int>(layout.cells.size());
  // Global region ids before merging: one per (placement, bounded region).
  std::vector<std::map<int, int>> region_node(static_cast<std::size_t>(np));
  std::vector<cdouble> node_eps;
  for (int p = 0; p < np; ++p) {
    const auto& c = entry_cells.at(static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(p)].entry));
    for (const auto& r : c.regions) {
      region_node[static_cast<std::size_t>(p)][r.id] = static_cast<int>(node_eps.size());
      node_eps.push_back(r.eps_r);
    }
  }
  ParityUnionFind uf(static_cast<int>(node_eps.size()));
  auto node_of = [&](int p, int region) {
    return region == kExteriorRegion ? -1 : region_node[static_cast<std::size_t>(p)].at(region);
  };

  // Coincident equivalent triangles across neighbors.
  PointIndex centroids(10 * kGeomTol);
  std::vector<std::pair<int, int>> owner;  // centroid id -> (placement, triangle)
  std::vector<std::vector<char>> removed(static_cast<std::size_t>(np));
  for (int p = 0; p < np; ++p) {
    const auto& pl = layout.cells[static_cast<std::size_t>(p)];
    const auto& c = entry_cells[static_cast<std::size_t>(pl.entry)];
    removed[static_cast<std::size_t>(p)].assign(c.triangles.size(), 0);
    for (int t = 0; t < static_cast<int>(c.triangles.size()); ++t) {
      if (c.kind(t) != PatchKind::Equivalent) continue;
      const int before = centroids.size();
      const int id = centroids.insert(c.centroid(t) + pl.translation);
      if (id == before) {
        owner.emplace_back(p, t);
        continue;
      }
      const auto [q, s] = owner[static_cast<std::size_t>(id)];
      const auto& cq = entry_cells[static_cast<std::size_t>(layout.cells[static_cast<std::size_t>(q)].entry)];
      const int a = node_of(p, c.region_plus(t)), b = node_of(q, cq.region_plus(s));
      if (node_eps[static_cast<std::size_t>(a)] != node_eps[static_cast<std::size_t>(b)])
        throw Error(ErrorKind::Geometry, "adjacent cells join regions of different permittivity");
      uf.unite(a, b, 1);
      removed[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] = 1;
      removed[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)] = 1;
    }
  }

  std::map<int, int> merged_id;  // union-find root -> region id
  auto merged = [&](int p, int region) {
    if (region == kExteriorRegion) return kExteriorRegion;
    const int root = uf.find(node_of(p, region)).first;
    auto [it, inserted] = merged_id.try_emplace(root, static_cast<int>(merged_id.size()) + 1);
    (void)inserted;
    return it->second;
  };

  RawMesh raw;
  CellSpec spec;
  spec.name = "merged";
  std::map<std::tuple<int, int, int>, int> tag_of;
  std::map<int, cdouble> eps_of;
  for (int p = 0; p < np; ++p) {
    const auto& pl = layout.cells[static_cast<std::size_t>(p)];
    const auto& c = entry_cells[static_cast<std::size_t>(pl.entry)];
    const int base = static_cast<int>(raw.nodes.size());
    for (const auto& v : c.vertices) raw.nodes.push_back(v + pl.translation);
    for (int t = 0; t < static_cast<int>(c.triangles.size()); ++t) {
      if (removed[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)]) continue;
      const PatchKind kind = c.kind(t) == PatchKind::Equivalent ? PatchKind::Dielectric : c.kind(t);
      const int rp = merged(p, c.region_plus(t)), rm = merged(p, c.region_minus(t));
      for (int r : {c.region_plus(t), c.region_minus(t)})
        if (r != kExteriorRegion) eps_of[merged(p, r)] = c.region(r).eps_r;
      auto [it, inserted] = tag_of.try_emplace({static_cast<int>(kind), rp, rm}, static_cast<int>(tag_of.size()) + 1);
      if (inserted) spec.tags.push_back({it->second, kind, rp, rm});
      const auto& tv = c.triangles[static_cast<std::size_t>(t)].v;
      raw.triangles.push_back({base + tv[0], base + tv[1], base + tv[2]});
      raw.tags.push_back(it->second);
    }
  }
  for (const auto& [id, eps] : eps_of) spec.regions.push_back({id, eps});
  return build_cell(raw, spec);
}

int reference_unknowns(const UnitCellGeometry& geometry) {
  const CellBasis basis = build_basis(geometry);
  return build_interior_connectivity(geometry, basis, BasisSet{}).n_int;
}

ReferenceSolution direct_reference_solve(const UnitCellGeometry& geometry, const IncidentSource& source,
                                         const ReferenceOptions& options) {
  if (geometry.has_box) throw Error(ErrorKind::Geometry, "the reference solver expects geometry without an equivalent surface");
  ReferenceSolution s;
  s.geometry = geometry;
  s.basis = build_basis(s.geometry);
  s.connectivity = build_interior_connectivity(s.geometry, s.basis, BasisSet{});
  const int n = s.connectivity.n_int;
  if (n > options.dof_limit)
    throw Error(ErrorKind::Config, "reference system has " + std::to_string(n) + " unknowns, above the dense limit " +
                                       std::to_string(options.dof_limit));
  CellSystem sys = assemble_cell_system(s.geometry, s.basis, source.frequency, options.quad);
  ReducedSystem red = reduce_system(sys, s.connectivity);
  sys.blocks.clear();

  const RegionRange& ext = s.exterior();
  BasisView view{&s.geometry, &s.basis.basis, Vec3::Zero(), ext.j_begin, ext.j_count + ext.m_count};
  const CVector v_ext = project_incident(view, source);
  CVector v = CVector::Zero(n);
  for (int i = 0; i < view.size(); ++i) {
    const int r = ext.j_begin + i;
    v(s.connectivity.col[static_cast<std::size_t>(r)]) += static_cast<double>(s.connectivity.sign[static_cast<std::size_t>(r)]) * v_ext(i);
  }
  Eigen::PartialPivLU<Eigen::Ref<CMatrix>> lu(red.z);  // factor in place
  s.rcond = lu.rcond();
  if (!(s.rcond > 1e-15)) throw Error(ErrorKind::Numerical, "reference system is singular");
  s.unknowns = lu.solve(v);
  s.x = CVector::Zero(s.connectivity.rows);
  for (int r = 0; r < s.connectivity.rows; ++r)
    s.x(r) = static_cast<double>(s.connectivity.sign[static_cast<std::size_t>(r)]) * s.unknowns(s.connectivity.col[static_cast<std::size_t>(r)]);
  return s;
}

}  // namespace emsurf
