// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/macromodel/connectivity.hpp"

#include <algorithm>
#include <map>

namespace emsurf {

ParityUnionFind::ParityUnionFind(int n) : parent_(static_cast<std::size_t>(n)), parity_(static_cast<std::size_t>(n), 1), rank_(static_cast<std::size_t>(n), 0) {
  for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
}

int ParityUnionFind::add() {
  parent_.push_back(size());
  parity_.push_back(1);
  rank_.push_back(0);
  return size() - 1;
}

std::pair<int, int> ParityUnionFind::find(int a) {
  int p = 1, r = a;
  while (parent_[static_cast<std::size_t>(r)] != r) {
    p *= parity_[static_cast<std::size_t>(r)];
    r = parent_[static_cast<std::size_t>(r)];
  }
  // Path compression with parity bookkeeping.
  int q = 1, x = a;
  while (parent_[static_cast<std::size_t>(x)] != x) {
    const int next = parent_[static_cast<std::size_t>(x)];
    const int px = parity_[static_cast<std::size_t>(x)];
    parent_[static_cast<std::size_t>(x)] = r;
    parity_[static_cast<std::size_t>(x)] = p * q;
    q *= px;
    x = next;
  }
  return {r, p};
}

bool ParityUnionFind::unite(int a, int b, int sign) {
  auto [ra, pa] = find(a);
  auto [rb, pb] = find(b);
  // value(a) = pa v(ra), value(b) = pb v(rb), value(b) = sign value(a)
  // => v(rb) = pb * sign * pa * v(ra).
  const int rel = pb * sign * pa;
  if (ra == rb) return rel == 1;
  if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)]) {
    parent_[static_cast<std::size_t>(ra)] = rb;
    parity_[static_cast<std::size_t>(ra)] = rel;
  } else {
    parent_[static_cast<std::size_t>(rb)] = ra;
    parity_[static_cast<std::size_t>(rb)] = rel;
    if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)]) ++rank_[static_cast<std::size_t>(ra)];
  }
  return true;
}

int link_sign(int s_a, int s_b) { return -s_a * s_b; }

Eigen::SparseMatrix<double> InteriorConnectivity::matrix() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < rows; ++r)
    if (col[static_cast<std::size_t>(r)] >= 0) trip.emplace_back(r, col[static_cast<std::size_t>(r)], sign[static_cast<std::size_t>(r)]);
  Eigen::SparseMatrix<double> u(rows, cols());
  u.setFromTriplets(trip.begin(), trip.end());
  return u;
}

RMatrix InteriorConnectivity::dense() const { return RMatrix(matrix()); }

namespace {

struct Member {
  int node;
  int piece_sign;
};

}  // namespace

InteriorConnectivity build_interior_connectivity(const UnitCellGeometry& cell, const CellBasis& regions,
                                                 const BasisSet& eq, const std::vector<Face>& terminating) {
  const int nx = static_cast<int>(regions.basis.size());
  const int ne = static_cast<int>(eq.size());
  ParityUnionFind uf(nx + ne);

  // Group coefficients by (kind, triangle) through their pieces.
  std::map<std::pair<int, int>, std::vector<Member>> by_triangle;
  auto collect = [&](const RwgFunction& f, int node) {
    for (int p = 0; p < f.count; ++p) {
      const auto& pc = f.pieces[static_cast<std::size_t>(p)];
      if (cell.kind(pc.tri) == PatchKind::Pec) continue;
      // Two functions of one triangle meet only if they belong to the same edge.
      by_triangle[{static_cast<int>(f.kind), pc.tri * 3 + pc.local_edge}].push_back({node, pc.sign});
    }
  };
  for (int i = 0; i < nx; ++i) collect(regions.basis.functions[static_cast<std::size_t>(i)], i);
  for (int i = 0; i < ne; ++i) collect(eq.functions[static_cast<std::size_t>(i)], nx + i);

  for (const auto& [key, members] : by_triangle) {
    for (std::size_t m = 1; m < members.size(); ++m) {
      if (!uf.unite(members[0].node, members[m].node, link_sign(members[0].piece_sign, members[m].piece_sign)))
        throw Error(ErrorKind::Geometry, "unclassifiable junction: inconsistent current orientation around an edge");
    }
  }

  // Case 2: halves of a traversal edge on a terminating face form one full function.
  for (int i = 0; i < ne; ++i) {
    const auto& fa = eq.functions[static_cast<std::size_t>(i)];
    if (!fa.half() || cell.edges[static_cast<std::size_t>(fa.edge)].cls != EdgeClass::Traversal) continue;
    const Face face = cell.triangles[static_cast<std::size_t>(fa.pieces[0].tri)].face;
    if (std::find(terminating.begin(), terminating.end(), face) == terminating.end()) continue;
    for (int j = i + 1; j < ne; ++j) {
      const auto& fb = eq.functions[static_cast<std::size_t>(j)];
      if (fb.edge != fa.edge || !fb.half()) continue;
      if (!uf.unite(nx + i, nx + j, link_sign(fa.pieces[0].sign, fb.pieces[0].sign)))
        throw Error(ErrorKind::Geometry, "inconsistent traversal merge");
    }
  }

  // Representatives: the lowest eq member of a class, else an interior column.
  std::map<int, std::pair<int, int>> rep_eq;  // root -> (eq index, parity of eq node)
  for (int i = 0; i < ne; ++i) {
    auto [root, par] = uf.find(nx + i);
    if (!rep_eq.count(root)) rep_eq[root] = {i, par};
  }
  InteriorConnectivity u;
  u.rows = nx;
  u.n_eq = ne;
  u.col.assign(static_cast<std::size_t>(nx), -1);
  u.sign.assign(static_cast<std::size_t>(nx), 0);
  u.eq_active.assign(static_cast<std::size_t>(ne), 0);
  std::map<int, int> int_col;
  std::vector<char> root_has_rows(static_cast<std::size_t>(nx + ne), 0);
  for (int r = 0; r < nx; ++r) {
    auto [root, par] = uf.find(r);
    root_has_rows[static_cast<std::size_t>(root)] = 1;
    auto it = rep_eq.find(root);
    if (it != rep_eq.end()) {
      u.col[static_cast<std::size_t>(r)] = it->second.first;
      u.sign[static_cast<std::size_t>(r)] = par * it->second.second;
    } else {
      auto [c, inserted] = int_col.try_emplace(root, ne + static_cast<int>(int_col.size()));
      (void)inserted;
      u.col[static_cast<std::size_t>(r)] = c->second;
      u.sign[static_cast<std::size_t>(r)] = par;
    }
  }
  u.n_int = static_cast<int>(int_col.size());
  for (int i = 0; i < ne; ++i) {
    auto [root, par] = uf.find(nx + i);
    if (!root_has_rows[static_cast<std::size_t>(root)]) continue;
    u.eq_active[static_cast<std::size_t>(i)] = 1;
    const auto [rep, rep_par] = rep_eq.at(root);
    if (rep != i) u.ties.push_back({i, rep, par * rep_par});
  }
  return u;
}

}  // namespace emsurf
