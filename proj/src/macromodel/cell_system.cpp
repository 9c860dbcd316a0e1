// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/macromodel/cell_system.hpp"

namespace emsurf {

CMatrix CellSystem::dense() const {
  CMatrix z = CMatrix::Zero(size(), size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int o = offsets[b];
    z.block(o, o, blocks[b].rows(), blocks[b].cols()) = blocks[b];
  }
  return z;
}

CellSystem assemble_cell_system(const UnitCellGeometry& cell, const CellBasis& basis, double frequency_hz,
                                const QuadratureOptions& quad) {
  CellSystem sys;
  sys.layout = basis.layout;
  for (const auto& range : basis.layout.ranges) {
    const int n = range.j_count + range.m_count;
    if (n == 0) throw Error(ErrorKind::Geometry, "region " + std::to_string(range.region) + " has no dofs");
    if (range.m_count > 0 && range.m_begin != range.j_begin + range.j_count)
      throw Error(ErrorKind::Geometry, "region dof ranges are not contiguous");
    BasisView view{&cell, &basis.basis, Vec3::Zero(), range.j_begin, n};
    const RegionKernel kernel = region_kernel(cell.region(range.region), frequency_hz);
    CMatrix block = CMatrix::Zero(n, n);
    const DofMap id = DofMap::identity(n);
    assemble_region(view, view, kernel, quad, id, id, block);
    sys.offsets.push_back(range.j_begin);
    sys.blocks.push_back(std::move(block));
  }
  return sys;
}

namespace {

template <class Visit>
void for_each_block(const CellSystem& s, Visit&& visit) {
  for (std::size_t b = 0; b < s.blocks.size(); ++b) visit(s.offsets[b], s.blocks[b]);
}

ReducedSystem scatter(const InteriorConnectivity& u, const std::vector<std::pair<int, const CMatrix*>>& blocks) {
  ReducedSystem r;
  r.n_eq = u.n_eq;
  r.n_int = u.n_int;
  r.z = CMatrix::Zero(u.cols(), u.cols());
  for (const auto& [o, bp] : blocks) {
    const CMatrix& b = *bp;
    for (int j = 0; j < b.cols(); ++j) {
      const int cj = u.col[static_cast<std::size_t>(o + j)];
      if (cj < 0) continue;
      const double sj = u.sign[static_cast<std::size_t>(o + j)];
      for (int i = 0; i < b.rows(); ++i) {
        const int ci = u.col[static_cast<std::size_t>(o + i)];
        if (ci < 0) continue;
        r.z(ci, cj) += (sj * u.sign[static_cast<std::size_t>(o + i)]) * b(i, j);
      }
    }
  }
  return r;
}

}  // namespace

ReducedSystem reduce_system(const CellSystem& system, const InteriorConnectivity& u) {
  if (system.size() != u.rows) throw Error(ErrorKind::Numerical, "connectivity does not match the cell system");
  std::vector<std::pair<int, const CMatrix*>> blocks;
  for_each_block(system, [&](int o, const CMatrix& b) { blocks.emplace_back(o, &b); });
  return scatter(u, blocks);
}

ReducedSystem reduce_system(const CMatrix& z, const InteriorConnectivity& u) {
  if (z.rows() != u.rows || z.cols() != u.rows) throw Error(ErrorKind::Numerical, "connectivity does not match the matrix");
  return scatter(u, {{0, &z}});
}

}  // namespace emsurf
