// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "emsurf/basis/rwg.hpp"

#include <doctest.h>

using namespace emsurf;

namespace {

UnitCellGeometry cube() {
  return build_cell(test::box_mesh(Vec3::Zero(), Vec3::Ones()), test::single_region_spec(2.0, PatchKind::Dielectric));
}

// Unit vector in the triangle plane, normal to local edge e, pointing out.
Vec3 edge_outward(const UnitCellGeometry& cell, int t, int e) {
  const Vec3& a = cell.vertex(t, (e + 1) % 3);
  const Vec3& b = cell.vertex(t, (e + 2) % 3);
  const Vec3 along = (b - a).normalized();
  Vec3 out = along.cross(cell.normal(t)).normalized();
  if (out.dot(a - cell.vertex(t, e)) < 0) out = -out;
  return out;
}

Vec3 bary_at_edge_mid(int e) {
  Vec3 b = Vec3::Constant(0.5);
  b[e] = 0.0;
  return b;
}

}  // namespace

TEST_SUITE("basis") {
  TEST_CASE("closed cube carries 18 J and 18 M functions per side") {
    const auto cell = cube();
    const CellBasis cb = build_basis(cell);
    const auto& in = cb.layout.range(1);
    CHECK(in.j_count == 18);
    CHECK(in.m_count == 18);
    const auto& out = cb.layout.range(kExteriorRegion);
    CHECK(out.j_count == 18);
    CHECK(out.m_count == 18);
    CHECK(cb.layout.size == 72);
  }

  TEST_CASE("layout ranges are disjoint and ordered J then M per region") {
    const auto cell = layered_cell(test::strip_cell_params(true));
    const CellBasis cb = build_basis(cell);
    int next = 0, total = 0;
    int last_region = -1;
    for (const auto& r : cb.layout.ranges) {
      CHECK(r.region > last_region);
      last_region = r.region;
      CHECK(r.j_begin == next);
      CHECK(r.m_begin == r.j_begin + r.j_count);
      next = r.m_begin + r.m_count;
      total += r.j_count + r.m_count;
      for (int i = r.j_begin; i < r.m_begin; ++i) CHECK(cb.basis.functions[static_cast<std::size_t>(i)].kind == CurrentKind::Electric);
      for (int i = r.m_begin; i < next; ++i) CHECK(cb.basis.functions[static_cast<std::size_t>(i)].kind == CurrentKind::Magnetic);
    }
    CHECK(total == cb.layout.size);
    CHECK(static_cast<int>(cb.basis.size()) == cb.layout.size);
  }

  TEST_CASE("pec triangles carry no magnetic current") {
    const auto cell = layered_cell(test::strip_cell_params(true));
    const CellBasis cb = build_basis(cell);
    for (const auto& f : cb.basis.functions) {
      if (f.kind != CurrentKind::Magnetic) continue;
      for (int p = 0; p < f.count; ++p) CHECK(cell.kind(f.pieces[static_cast<std::size_t>(p)].tri) != PatchKind::Pec);
    }
  }

  TEST_CASE("traversal edges: halves on the box, full functions inside, no magnetic current inside") {
    const auto cell = layered_cell(test::strip_cell_params(true));
    const CellBasis cb = build_basis(cell);
    const BasisSet eq = build_eq_basis(cell);
    int edges = 0;
    for (int e = 0; e < static_cast<int>(cell.edges.size()); ++e) {
      if (cell.edges[static_cast<std::size_t>(e)].cls != EdgeClass::Traversal) continue;
      ++edges;
      int inside_j = 0, inside_m = 0, eq_halves = 0;
      for (const auto& f : cb.basis.functions)
        if (f.edge == e) (f.kind == CurrentKind::Electric ? inside_j : inside_m)++;
      for (const auto& f : eq.functions)
        if (f.edge == e && f.kind == CurrentKind::Electric) {
          CHECK(f.half());
          ++eq_halves;
        }
      CHECK(inside_j == 2);
      CHECK(inside_m == 0);
      CHECK(eq_halves == 2);
    }
    CHECK(edges > 0);
  }

  TEST_CASE("half orientation follows the face axis") {
    CHECK(half_sign(Face::PosX) == 1);
    CHECK(half_sign(Face::PosY) == 1);
    CHECK(half_sign(Face::PosZ) == 1);
    CHECK(half_sign(Face::NegX) == -1);
    CHECK(half_sign(Face::NegY) == -1);
    CHECK(half_sign(Face::NegZ) == -1);
  }

  TEST_CASE("eq basis is identical for congruent boxes") {
    const auto a = layered_cell(test::strip_cell_params(true));
    const auto b = translate_cell(a, Vec3(1.0, 2.0, 0.0));
    const BasisSet ea = build_eq_basis(a), eb = build_eq_basis(b);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
      CHECK(ea.functions[i].edge == eb.functions[i].edge);
      CHECK(ea.functions[i].count == eb.functions[i].count);
    }
  }

  TEST_CASE("padding splits the listed edge into two halves") {
    const auto cell = layered_cell(LayeredCellParams{});
    const BasisSet plain = build_eq_basis(cell);
    // Midpoint of some electric edge on the +x face, box-relative.
    Vec3 mid = Vec3::Zero();
    for (const auto& f : plain.functions) {
      if (f.kind != CurrentKind::Electric || f.count != 2) continue;
      const int t = f.pieces[0].tri;
      if (cell.triangles[static_cast<std::size_t>(t)].face != Face::PosX) continue;
      const auto& e = cell.edges[static_cast<std::size_t>(f.edge)];
      mid = 0.5 * (cell.vertices[static_cast<std::size_t>(e.v[0])] + cell.vertices[static_cast<std::size_t>(e.v[1])]) - cell.box.lo;
      break;
    }
    REQUIRE(mid.norm() > 0);
    const BasisSet padded = build_eq_basis(cell, {mid});
    CHECK(padded.size() == plain.size() + 1);
  }

  TEST_CASE("rwg vanishes at the free vertex and has unit normal flux at the edge") {
    const auto cell = cube();
    const CellBasis cb = build_basis(cell);
    for (const auto& f : cb.basis.functions) {
      for (int p = 0; p < f.count; ++p) {
        const auto& pc = f.pieces[static_cast<std::size_t>(p)];
        Vec3 free = Vec3::Zero();
        free[pc.local_edge] = 1.0;
        CHECK(eval_rwg(cell, f, pc.tri, free).norm() < 1e-14);
        const Vec3 v = eval_rwg(cell, f, pc.tri, bary_at_edge_mid(pc.local_edge));
        CHECK(v.dot(edge_outward(cell, pc.tri, pc.local_edge)) == doctest::Approx(pc.sign).epsilon(1e-12));
      }
      // Continuity of the normal component across the shared edge.
      if (f.count == 2) {
        const auto& a = f.pieces[0];
        const auto& b = f.pieces[1];
        const double fa = eval_rwg(cell, f, a.tri, bary_at_edge_mid(a.local_edge)).dot(edge_outward(cell, a.tri, a.local_edge));
        const double fb = eval_rwg(cell, f, b.tri, bary_at_edge_mid(b.local_edge)).dot(-edge_outward(cell, b.tri, b.local_edge));
        CHECK(std::abs(fa - fb) < 1e-12);
      }
    }
  }

  TEST_CASE("right triangle with unit edge: |f| equals the distance to the free vertex") {
    UnitCellGeometry cell;
    cell.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    cell.triangles = {Triangle{{0, 1, 2}, 0, Face::Interior}};
    const Vec3 centroid(1.0 / 3, 1.0 / 3, 0);
    for (int e = 0; e < 3; ++e) {
      const double l = edge_length(cell, 0, e);
      const Vec3 rho = centroid - cell.vertices[static_cast<std::size_t>(e)];
      CHECK(edge_function(cell, 0, e, centroid).norm() == doctest::Approx(l / (2 * 0.5) * rho.norm()).epsilon(1e-14));
    }
    CHECK(edge_length(cell, 0, 0) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("divergence is plus or minus length over area and integrates to zero") {
    const auto cell = cube();
    const CellBasis cb = build_basis(cell);
    for (const auto& f : cb.basis.functions) {
      double integral = 0.0;
      for (int p = 0; p < f.count; ++p) {
        const auto& pc = f.pieces[static_cast<std::size_t>(p)];
        const double d = div_rwg(cell, f, pc.tri);
        CHECK(d == doctest::Approx(pc.sign * edge_length(cell, pc.tri, pc.local_edge) / cell.area(pc.tri)));
        integral += d * cell.area(pc.tri);
      }
      if (f.count == 2) CHECK(std::abs(integral) < 1e-12);
    }
    // The two pieces of a full function carry opposite signs.
    for (const auto& f : cb.basis.functions)
      if (f.count == 2) CHECK(f.pieces[0].sign == -f.pieces[1].sign);
  }

  TEST_CASE("rwg is zero off its support") {
    const auto cell = cube();
    const CellBasis cb = build_basis(cell);
    const auto& f = cb.basis.functions.front();
    for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
      if (f.piece_on(t)) continue;
      CHECK(eval_rwg(cell, f, t, Vec3::Constant(1.0 / 3)).norm() == 0.0);
      CHECK(div_rwg(cell, f, t) == 0.0);
    }
  }
}
