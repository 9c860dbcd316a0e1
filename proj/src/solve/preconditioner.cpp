// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/solve/preconditioner.hpp"

#include <algorithm>
#include <map>

namespace emsurf {

BlockJacobi::BlockJacobi(const AssembledSystem& s) {
  const auto& u = s.u0;
  const int np = static_cast<int>(s.models.size());
  auto cell_of = [&](int row) {
    int p = static_cast<int>(std::upper_bound(s.offsets.begin(), s.offsets.end(), row) - s.offsets.begin()) - 1;
    return p;
  };
  std::vector<int> owner(static_cast<std::size_t>(u.unknowns), -1);
  std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(u.unknowns));
  for (int r = 0; r < u.rows; ++r) {
    const int c = u.col[static_cast<std::size_t>(r)];
    if (c < 0) continue;
    rows_of[static_cast<std::size_t>(c)].push_back(r);
    if (owner[static_cast<std::size_t>(c)] < 0) owner[static_cast<std::size_t>(c)] = cell_of(r);
  }
  std::vector<std::vector<int>> owned(static_cast<std::size_t>(np));
  for (int c = 0; c < u.unknowns; ++c) owned[static_cast<std::size_t>(owner[static_cast<std::size_t>(c)])].push_back(c);

  // Coupling between two placements, plus the macromodel on the diagonal.
  auto pair_block = [&](int p, int q) -> CMatrix {
    const int np_rows = s.models[static_cast<std::size_t>(p)]->size();
    const int nq_rows = s.models[static_cast<std::size_t>(q)]->size();
    CMatrix b = CMatrix::Zero(np_rows, nq_rows);
    if (p == q) b += s.models[static_cast<std::size_t>(p)]->z;
    if (s.path == CouplingPath::Fft) {
      const int mx = s.toeplitz->mx();
      b += s.toeplitz->block(q % mx - p % mx, q / mx - p / mx);
    } else if (s.path == CouplingPath::Dense) {
      b += s.z0_dense.block(s.offsets[static_cast<std::size_t>(p)], s.offsets[static_cast<std::size_t>(q)], np_rows, nq_rows);
    }
    return b;
  };
  for (int p = 0; p < np; ++p) {
    const auto& cols = owned[static_cast<std::size_t>(p)];
    if (cols.empty()) continue;
    std::map<int, int> local;
    for (std::size_t i = 0; i < cols.size(); ++i) local[cols[i]] = static_cast<int>(i);
    // Rows of the owned unknowns grouped by the cell they live in; seam
    // unknowns have rows in two cells and pick up their mutual coupling.
    std::map<int, std::vector<std::pair<int, int>>> by_cell;  // cell -> (local index, row)
    for (int c : cols)
      for (int r : rows_of[static_cast<std::size_t>(c)]) by_cell[cell_of(r)].push_back({local[c], r});
    CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(cols.size()));
    for (const auto& [q1, e1] : by_cell)
      for (const auto& [q2, e2] : by_cell) {
        const CMatrix b = pair_block(q1, q2);
        const int o1 = s.offsets[static_cast<std::size_t>(q1)], o2 = s.offsets[static_cast<std::size_t>(q2)];
        for (const auto& [li, ri] : e1)
          for (const auto& [lj, rj] : e2)
            a(li, lj) += static_cast<double>(u.sign[static_cast<std::size_t>(ri)] * u.sign[static_cast<std::size_t>(rj)]) * b(ri - o1, rj - o2);
      }
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > 1e-15)) throw Error(ErrorKind::Numerical, "singular preconditioner block for cell " + std::to_string(p));
    index_.push_back(cols);
    local_.push_back(std::move(a));
    lu_.push_back(std::move(lu));
  }
}

CVector BlockJacobi::apply(const CVector& x) const {
  CVector y = x;
  for (std::size_t b = 0; b < index_.size(); ++b) {
    const auto& idx = index_[b];
    CVector xl(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) xl(static_cast<Eigen::Index>(i)) = x(idx[i]);
    const CVector yl = lu_[b].solve(xl);
    for (std::size_t i = 0; i < idx.size(); ++i) y(idx[i]) = yl(static_cast<Eigen::Index>(i));
  }
  return y;
}

}  // namespace emsurf
