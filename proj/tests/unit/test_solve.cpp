// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "emsurf/cli/pipeline.hpp"
#include "emsurf/solve/gmres.hpp"
#include "emsurf/solve/preconditioner.hpp"
#include "emsurf/solve/reference.hpp"

#include <doctest.h>

using namespace emsurf;

namespace {

CMatrix test_matrix(int n, unsigned seed) {
  CMatrix a = test::random_matrix(n, n, seed) / std::sqrt(static_cast<double>(n));
  a.diagonal().array() += cdouble(2.0, 0.5);
  return a;
}

LinearOperator as_operator(const CMatrix& a) {
  return [&a](const CVector& x) -> CVector { return a * x; };
}

IncidentSource dipole_above(double z) {
  IncidentSource s;
  s.frequency = 10e9;
  s.position = Vec3(0.3e-3, -0.2e-3, z);
  s.moment = CVec3(1e-3, 0.0, 0.0);
  return s;
}

// Far field of the exterior-region currents of a reference solution.
Radiator exterior_radiator(const ReferenceSolution& rs, double f) {
  const RegionRange& ext = rs.exterior();
  const int n = ext.j_count + ext.m_count;
  return Radiator({CurrentSet{&rs.geometry, &rs.basis.basis, Vec3::Zero(), ext.j_begin, rs.x.segment(ext.j_begin, n)}},
                  f);
}

}  // namespace

TEST_SUITE("solve") {
  TEST_CASE("gmres solves a well-conditioned system") {
    const CMatrix a = test_matrix(60, 3);
    const CVector b = test::random_vector(60, 4);
    GmresOptions opt;
    opt.tol = 1e-10;
    const GmresResult r = gmres(as_operator(a), b, opt);
    CHECK(r.report.converged);
    CHECK(r.report.final_residual < 1e-10);
    CHECK((r.x - a.partialPivLu().solve(b)).norm() < 1e-8 * r.x.norm());
    REQUIRE(r.report.residuals.size() == static_cast<std::size_t>(r.report.iterations + 1));
    CHECK(r.report.residuals.front() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < r.report.residuals.size(); ++i)
      CHECK(r.report.residuals[i] <= r.report.residuals[i - 1] * (1 + 1e-12));
  }

  TEST_CASE("restarted gmres still converges") {
    const CMatrix a = test_matrix(60, 5);
    const CVector b = test::random_vector(60, 6);
    GmresOptions opt;
    opt.tol = 1e-8;
    opt.restart = 5;
    const GmresResult r = gmres(as_operator(a), b, opt);
    CHECK(r.report.converged);
    CHECK((a * r.x - b).norm() < 1e-7 * b.norm());
  }

  TEST_CASE("zero right-hand side returns zero immediately") {
    const CMatrix a = test_matrix(10, 7);
    const GmresResult r = gmres(as_operator(a), CVector::Zero(10));
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 0);
    CHECK(r.x.norm() == 0.0);
  }

  TEST_CASE("exact preconditioner converges in one iteration") {
    const CMatrix a = test_matrix(40, 8);
    const Eigen::PartialPivLU<CMatrix> lu(a);
    const CVector b = test::random_vector(40, 9);
    const GmresResult r = gmres(as_operator(a), b, {}, [&](const CVector& x) -> CVector { return lu.solve(x); });
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
  }

  TEST_CASE("iteration cap reports non-convergence") {
    const CMatrix a = test::random_matrix(80, 80, 10);
    GmresOptions opt;
    opt.tol = 1e-12;
    opt.max_iterations = 5;
    const GmresResult r = gmres(as_operator(a), test::random_vector(80, 11), opt);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.iterations == 5);
    CHECK(r.report.final_residual > 1e-12);
  }

  TEST_CASE("invalid solver options are config errors") {
    GmresOptions opt;
    opt.tol = 0.0;
    CHECK_THROWS_AS(opt.validate(), Error);
    opt = {};
    opt.restart = 0;
    CHECK_THROWS_AS(opt.validate(), Error);
  }

  TEST_CASE("block-jacobi blocks are principal submatrices of the reduced system") {
    LayoutSpec spec;
    spec.mx = 2;
    const ArraySetup setup = prepare_array({test::nested_box_cell()}, spec);
    MacromodelCache cache;
    RunOptions opt;
    const MacromodelRun run = run_macromodel(setup, dipole_above(5e-3), opt, cache);
    CHECK(run.solution.report.converged);
    CHECK(run.cache_builds == 1);
    const CMatrix dense = dense_system(run.system);
    const CVector y = test::random_vector(run.system.unknowns(), 12);
    CHECK((apply_system(run.system, y) - dense * y).norm() < 1e-10 * (dense * y).norm());

    const BlockJacobi bj(run.system);
    CHECK(bj.blocks() == 2);
    CVector x = CVector::Zero(run.system.unknowns());
    for (int b = 0; b < bj.blocks(); ++b) {
      const auto& idx = bj.block_indices(b);
      CMatrix sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) sub(static_cast<int>(i), static_cast<int>(j)) = dense(idx[i], idx[j]);
      CHECK((bj.block_matrix(b) - sub).norm() < 1e-12 * sub.norm());
    }
    // Applying to a block-supported vector inverts that block.
    const auto& idx = bj.block_indices(0);
    const CVector local = test::random_vector(static_cast<int>(idx.size()), 13);
    for (std::size_t i = 0; i < idx.size(); ++i) x(idx[i]) = local(static_cast<int>(i));
    const CVector z = bj.apply(x);
    CVector zl(static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) zl(static_cast<int>(i)) = z(idx[i]);
    CHECK((bj.block_matrix(0) * zl - local).norm() < 1e-10 * local.norm());

    // The iterative solution matches a dense solve of the same system.
    const CVector direct = dense.partialPivLu().solve(run.system.v_tilde);
    CHECK((run.solution.x - direct).norm() < 1e-3 * direct.norm());
  }

  TEST_CASE("merged array removes the shared box face") {
    LayoutSpec spec;
    spec.mx = 2;
    const ArraySetup setup = prepare_array({test::nested_box_cell()}, spec);
    const UnitCellGeometry merged = merge_array(setup.layout, setup.entry_cells);
    const auto& cell = setup.entry_cells.front();
    int eq_tris = 0, shared = 0;
    for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
      if (cell.kind(t) != PatchKind::Equivalent) continue;
      ++eq_tris;
      if (cell.triangles[static_cast<std::size_t>(t)].face == Face::PosX) ++shared;
    }
    CHECK(static_cast<int>(merged.triangles.size()) == 2 * static_cast<int>(cell.triangles.size()) - 2 * shared);
    for (int t = 0; t < static_cast<int>(merged.triangles.size()); ++t) CHECK(merged.kind(t) != PatchKind::Equivalent);
    CHECK(eq_tris > 0);
    ReferenceOptions opt;
    opt.dof_limit = 10;
    try {
      direct_reference_solve(merged, dipole_above(5e-3), opt);
      FAIL("expected a dof-limit error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
    CHECK(reference_unknowns(merged) > 10);
  }

  TEST_CASE("free-space body scatters nothing") {
    RawMesh m = test::box_mesh(Vec3::Constant(-2e-3), Vec3::Constant(2e-3), 2);
    IncidentSource s = dipole_above(6e-3);
    const auto air = build_cell(m, test::single_region_spec(1.0, PatchKind::Dielectric));
    const auto glass = build_cell(m, test::single_region_spec(4.0, PatchKind::Dielectric));
    const ReferenceSolution ra = direct_reference_solve(air, s), rg = direct_reference_solve(glass, s);
    const Radiator fa = exterior_radiator(ra, s.frequency), fg = exterior_radiator(rg, s.frequency);
    for (double th : {0.3, 1.2, 2.5}) {
      const FarField a = fa.field(th, 0.4), g = fg.field(th, 0.4);
      CHECK(a.intensity() < 1e-3 * g.intensity());
    }
  }

  TEST_CASE("macromodel and oracle agree on a small array") {
    LayoutSpec spec;
    spec.mx = 2;
    const ArraySetup setup = prepare_array({test::nested_box_cell(6e-3, 4.0, 4)}, spec);
    const IncidentSource s = dipole_above(4e-3);
    RunOptions opt;
    opt.gmres.tol = 1e-8;
    MacromodelCache cache;
    const MacromodelRun mm = run_macromodel(setup, s, opt, cache);
    const OracleRun orc = run_oracle(setup, s, opt);
    const Radiator a = macromodel_radiator(setup, mm, mm.y), b = oracle_radiator(setup, orc);
    std::vector<double> theta;
    for (int t = -90; t <= 90; t += 5) theta.push_back(t);
    const auto fa = [&](double t, double p) { return a.field(t, p); };
    const auto fb = [&](double t, double p) { return b.field(t, p); };
    for (double phi : {0.0, 90.0}) CHECK(relative_l2(radiate_cut(fa, phi, theta), radiate_cut(fb, phi, theta)) < 0.05);
  }

  TEST_CASE("preconditioning and the coupling path leave the solution unchanged") {
    LayoutSpec spec;
    spec.mx = 2;
    spec.my = 2;
    const ArraySetup setup = prepare_array({layered_cell(test::strip_cell_params(true))}, spec);
    REQUIRE(setup.toeplitz.toeplitz);
    const IncidentSource s = dipole_above(6e-3);
    RunOptions opt;
    opt.gmres.tol = 1e-12;
    MacromodelCache cache;
    const MacromodelRun fft = run_macromodel(setup, s, opt, cache);
    REQUIRE(fft.system.path == CouplingPath::Fft);
    RunOptions dense_opt = opt;
    dense_opt.force_dense = true;
    const MacromodelRun dense = run_macromodel(setup, s, dense_opt, cache);
    REQUIRE(dense.system.path == CouplingPath::Dense);
    CHECK((fft.solution.x - dense.solution.x).norm() < 1e-10 * dense.solution.x.norm());

    RunOptions loose = opt;
    loose.gmres.tol = 1e-6;
    const MacromodelRun pre = run_macromodel(setup, s, loose, cache);
    loose.preconditioner = false;
    const MacromodelRun plain = run_macromodel(setup, s, loose, cache);
    CHECK(pre.solution.report.converged);
    CHECK(plain.solution.report.converged);
    // Measured in the residual norm GMRES controls; the forward difference
    // also carries the condition number.
    const CVector diff = pre.solution.x - plain.solution.x;
    CHECK(apply_system(pre.system, diff).norm() < 10 * loose.gmres.tol * pre.system.v_tilde.norm());
  }
}
