// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks, one per criterion. Prints a single PASS/FAIL line and
// exits nonzero on failure.

#include "../unit/fixtures.hpp"

#include "emsurf/cli/commands.hpp"
#include "emsurf/cli/pipeline.hpp"
#include "emsurf/cli/report.hpp"
#include "emsurf/kernels/greens.hpp"
#include "emsurf/macromodel/cell_system.hpp"
#include "emsurf/macromodel/schur.hpp"
#include "emsurf/mesh/msh.hpp"
#include "emsurf/postproc/mie.hpp"
#include "emsurf/postproc/polarization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace emsurf;
namespace fs = std::filesystem;

namespace {

// Tolerances, one place.
constexpr double kGreensTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kQuadratureSymmetryTol = 1e-3;
constexpr double kMieTol = 0.05;
constexpr double kAlgebraTol = 1e-10;
constexpr double kOracleTol = 0.05;
constexpr double kToeplitzTol = 1e-12;
constexpr double kCpTol = 1e-12;
constexpr double kSphereTol = 0.005;
constexpr double kDipoleDbTol = 0.05;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
  template <class T>
  void note(const std::string& key, const T& v) {
    detail << key << "=" << v << " ";
  }
};

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }
double rel(const CVector& a, const CVector& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

// ---------------------------------------------------------------- 1

void kernels(Outcome& o) {
  double worst = 0;
  for (double lambda : {0.3, 0.031, 1e-3}) {
    const double k = 2 * kPi / lambda;
    for (const Vec3& dir : std::vector<Vec3>{Vec3(1, 0, 0), Vec3(0.6, -0.8, 0), Vec3(1, 2, 2) / 3.0}) {
      const Vec3 r0(0.1, -0.2, 0.05);
      for (int cycles = 1; cycles <= 3; ++cycles) {
        const double R = cycles * lambda;
        const double stat = 1.0 / (4 * kPi * R);
        // Whole cycles: the phase factor is exactly one.
        worst = std::max(worst, std::abs(greens(k, r0, r0 + R * dir) - stat) / stat);
        // Half cycle: the sign flips.
        const double Rh = (cycles - 0.5) * lambda, sh = 1.0 / (4 * kPi * Rh);
        worst = std::max(worst, std::abs(greens(k, r0, r0 + Rh * dir) + sh) / sh);
        // Static limit.
        worst = std::max(worst, std::abs(greens(1e-14, r0, r0 + R * dir) - stat) / stat);
      }
    }
  }
  o.note("greens_worst", worst);
  o.check(worst < kGreensTol, "greens identities");

  // The assembled block is the one the solver uses. A second assembly against
  // a copied basis evaluates each (i, j) and (j, i) independently; their
  // mismatch is quadrature error and shrinks under refinement.
  double sym = 0, independent = 0;
  const std::vector<std::pair<UnitCellGeometry, double>> fixtures = {
      {test::nested_box_cell(6e-3, cdouble(3.0, -0.4), 2), 20e9},
      {layered_cell(test::strip_cell_params(true)), 10e9},
      {build_cell(test::box_mesh(Vec3::Zero(), Vec3(4e-3, 3e-3, 5e-3), 2), test::single_region_spec(cdouble(4.0, -1.0), PatchKind::Dielectric)), 15e9},
  };
  for (const auto& [cell, f] : fixtures) {
    const CellBasis cb = build_basis(cell);
    const BasisSet copy = cb.basis;
    const BasisView view{&cell, &cb.basis, Vec3::Zero(), 0, -1}, other{&cell, &copy, Vec3::Zero(), 0, -1};
    for (const auto& region : cell.regions) {
      const RegionKernel kernel = region_kernel(region, f);
      const CMatrix L = assemble_raw(OperatorKind::L, view, view, kernel);
      sym = std::max(sym, (L - L.transpose()).norm() / L.norm());
      const CMatrix Li = assemble_raw(OperatorKind::L, view, other, kernel);
      independent = std::max(independent, (Li - Li.transpose()).norm() / Li.norm());
    }
  }
  o.note("L_asymmetry", sym);
  o.note("L_asymmetry_independent_pairs", independent);
  o.check(sym < kSymmetryTol, "L symmetry");
  o.check(independent < kQuadratureSymmetryTol, "independent pair evaluation within quadrature accuracy");
}

// ---------------------------------------------------------------- 2

void mie(Outcome& o) {
  const double f = 1e9, lambda = kC0 / f, a = 0.2 * lambda;
  const cdouble eps = 2.2;
  const auto body = build_cell(geodesic_sphere_mesh(a, lambda / 10, true), dielectric_body_spec(eps));
  IncidentSource s;
  s.kind = SourceKind::PlaneWave;
  s.frequency = f;
  s.direction = Vec3(0, 0, 1);
  s.polarization = CVec3(1, 0, 0);
  const ReferenceSolution rs = direct_reference_solve(body, s);
  const RegionRange& ext = rs.exterior();
  const int n = ext.j_count + ext.m_count;
  const Radiator rad({CurrentSet{&rs.geometry, &rs.basis.basis, Vec3::Zero(), ext.j_begin, rs.x.segment(ext.j_begin, n)}}, f);
  const MieSphere sphere(a, eps, f);
  double worst = 0, worst_t = 0, worst_p = 0;
  for (double phi : {0.0, 90.0})
    for (int t = 0; t <= 180; t += 5) {
      const double th = t * kPi / 180, ph = phi * kPi / 180;
      const FarField e = rad.field(th, ph);
      const double rcs = 4 * kPi * (std::norm(e.e_theta) + std::norm(e.e_phi)) / (s.amplitude * s.amplitude);
      const double ref = sphere.bistatic_rcs(th, ph);
      const double err = std::abs(rcs - ref) / ref;
      if (err > worst) {
        worst = err;
        worst_t = t;
        worst_p = phi;
      }
    }
  o.note("unknowns", rs.unknowns.size());
  o.note("worst_rel_rcs_error", worst);
  o.note("at_theta_deg", worst_t);
  o.note("at_phi_deg", worst_p);
  o.check(worst <= kMieTol, "bistatic RCS vs Mie series");
}

// ---------------------------------------------------------------- 3

// Single-box air cell around a dielectric block, coarse enough for <= 200 dofs.
UnitCellGeometry small_nested_cell() {
  RawMesh m = test::box_mesh(Vec3(-3e-3, -3e-3, 0), Vec3(3e-3, 3e-3, 2e-3), 1, 1);
  const RawMesh inner = test::box_mesh(Vec3(-1e-3, -0.75e-3, 0.5e-3), Vec3(1.5e-3, 0.75e-3, 1.5e-3), 1, 2);
  const int off = static_cast<int>(m.nodes.size());
  m.nodes.insert(m.nodes.end(), inner.nodes.begin(), inner.nodes.end());
  for (auto t : inner.triangles) m.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  m.tags.insert(m.tags.end(), inner.tags.begin(), inner.tags.end());
  CellSpec s;
  s.regions = {{1, 1.0}, {2, cdouble(3.0, -0.2)}};
  s.tags = {{1, PatchKind::Equivalent, 1, kExteriorRegion}, {2, PatchKind::Dielectric, 2, 1}};
  return build_cell(m, s);
}

void algebra(Outcome& o) {
  const auto cell = small_nested_cell();
  const CellBasis cb = build_basis(cell);
  const BasisSet eq = build_eq_basis(cell);
  const InteriorConnectivity u = build_interior_connectivity(cell, cb, eq);
  o.note("dofs", u.rows);
  o.check(u.rows <= 200, "fixture within 200 dofs");
  const CMatrix U = u.dense().cast<cdouble>();

  CMatrix zr = test::random_matrix(u.rows, u.rows, 77);
  zr.diagonal().array() += cdouble(3.0 * u.rows, 0.0);
  const CMatrix zreal = assemble_cell_system(cell, cb, 30e9).dense();

  double worst_reduce = 0, worst_schur = 0;
  for (const CMatrix* z : std::vector<const CMatrix*>{&zr, &zreal}) {
    const ReducedSystem red = reduce_system(*z, u);
    worst_reduce = std::max(worst_reduce, rel(red.z, U.transpose() * *z * U));

    // Partitioned solve of [Zee Zei; Zie Zii] [x; w] = [b; 0].
    const Macromodel mm = schur_complement(red);
    const CVector b = test::random_vector(red.n_eq, 78);
    CVector rhs = CVector::Zero(red.n_eq + red.n_int);
    rhs.head(red.n_eq) = b;
    const CVector full = red.z.partialPivLu().solve(rhs);
    const CVector x_eq = mm.z.partialPivLu().solve(b);
    worst_schur = std::max(worst_schur, rel(x_eq, CVector(full.head(red.n_eq))));
    worst_schur = std::max(worst_schur, rel(back_substitute(mm, x_eq), CVector(full.tail(red.n_int))));
    const CMatrix explicit_schur = red.ee() - red.ei() * red.ii().partialPivLu().solve(CMatrix(red.ie()));
    worst_schur = std::max(worst_schur, rel(mm.z, explicit_schur));
  }
  o.note("reduce_error", worst_reduce);
  o.note("schur_error", worst_schur);
  o.check(worst_reduce < kAlgebraTol, "U^T Z U");
  o.check(worst_schur < kAlgebraTol, "schur complement");
}

// ---------------------------------------------------------------- 4

// Electric eq halves on traversal edges of one placement, keyed by edge.
std::map<int, std::vector<int>> traversal_halves(const UnitCellGeometry& c, const BasisSet& eq, Face face) {
  std::map<int, std::vector<int>> out;
  for (int f = 0; f < static_cast<int>(eq.size()); ++f) {
    const auto& fn = eq.functions[static_cast<std::size_t>(f)];
    if (!fn.half() || fn.kind != CurrentKind::Electric) continue;
    if (c.edges[static_cast<std::size_t>(fn.edge)].cls != EdgeClass::Traversal) continue;
    if (c.triangles[static_cast<std::size_t>(fn.pieces[0].tri)].face != face) continue;
    out[fn.edge].push_back(f);
  }
  return out;
}

void traversal(Outcome& o) {
  LayoutSpec spec;
  spec.mx = 2;
  const IncidentSource src = [] {
    IncidentSource s;
    s.frequency = 10e9;
    s.position = Vec3(0.4e-3, 0.3e-3, 8e-3);
    s.moment = CVec3(1e-3, 0.2e-3, 0.0);
    return s;
  }();
  RunOptions opt;
  opt.gmres.tol = 1e-10;

  // (a) Case-1 prescription: each interior traversal function maps to the eq
  // half on its own triangle with the link sign through that triangle.
  const ArraySetup through = prepare_array({layered_cell(test::strip_cell_params(true))}, spec);
  MacromodelCache cache;
  const MacromodelRun run = run_macromodel(through, src, opt, cache);
  o.check(run.solution.report.converged, "through-strip solve converged");
  const UnitCellGeometry& cell = through.entry_cells[0];
  const CellBasis cb = build_basis(cell);
  const InteriorConnectivity& u = run.interior[0];
  const BasisSet& eq = run.eq[0];
  int case1 = 0, case1_bad = 0;
  for (int r = 0; r < u.rows; ++r) {
    const auto& f = cb.basis.functions[static_cast<std::size_t>(r)];
    if (f.kind != CurrentKind::Electric || cell.edges[static_cast<std::size_t>(f.edge)].cls != EdgeClass::Traversal) continue;
    // The non-PEC piece lies on the equivalent surface.
    const RwgPiece* on_eq = nullptr;
    for (int k = 0; k < f.count; ++k)
      if (cell.kind(f.pieces[static_cast<std::size_t>(k)].tri) == PatchKind::Equivalent) on_eq = &f.pieces[static_cast<std::size_t>(k)];
    if (!on_eq) continue;
    int expect_col = -1, expect_sign = 0;
    for (int c = 0; c < u.n_eq; ++c) {
      const auto& e = eq.functions[static_cast<std::size_t>(c)];
      if (e.kind != CurrentKind::Electric || e.edge != f.edge || !e.half() || e.pieces[0].tri != on_eq->tri) continue;
      expect_col = c;
      expect_sign = link_sign(on_eq->sign, e.pieces[0].sign);
    }
    ++case1;
    if (u.col[static_cast<std::size_t>(r)] != expect_col || u.sign[static_cast<std::size_t>(r)] != expect_sign) ++case1_bad;
  }
  o.note("case1_rows", case1);
  o.check(case1 > 0 && case1_bad == 0, "case-1 U entries");

  // (b) Expanded solution: every seam pairing of traversal halves holds
  // exactly, and the interior trace equals its eq half.
  const ExteriorConnectivity& u0 = run.system.u0;
  const auto left = traversal_halves(cell, eq, Face::PosX);
  const auto right = traversal_halves(cell, eq, Face::NegX);
  const double px = through.layout.pitch_x;
  int pairs = 0, pair_bad = 0, distinct_seam = 0;
  auto key = [&](int tri, double shift) {
    const Vec3 c = cell.centroid(tri) - cell.box.lo - Vec3(shift, 0, 0);
    return std::array<long long, 3>{std::llround(c.x() * 1e9), std::llround(c.y() * 1e9), std::llround(c.z() * 1e9)};
  };
  std::map<std::array<long long, 3>, int> right_by_tri;
  for (const auto& [edge, fs_] : right)
    for (int f : fs_) right_by_tri[key(eq.functions[static_cast<std::size_t>(f)].pieces[0].tri, 0.0)] = f;
  const int off0 = u0.offsets[0], off1 = u0.offsets[1];
  for (const auto& [edge, fs_] : left) {
    std::set<int> cols;
    for (int f : fs_) {
      const auto it = right_by_tri.find(key(eq.functions[static_cast<std::size_t>(f)].pieces[0].tri, px));
      if (it == right_by_tri.end()) {
        ++pair_bad;
        continue;
      }
      const cdouble a = run.y(off0 + f), b = run.y(off1 + it->second);
      const int s = link_sign(eq.functions[static_cast<std::size_t>(f)].pieces[0].sign,
                              eq.functions[static_cast<std::size_t>(it->second)].pieces[0].sign);
      if (b != static_cast<double>(s) * a || a == 0.0) ++pair_bad;
      ++pairs;
      cols.insert(u0.col[static_cast<std::size_t>(off0 + f)]);
    }
    if (cols.size() == fs_.size()) ++distinct_seam;
  }
  o.note("seam_pairs", pairs);
  o.check(pairs > 0 && pair_bad == 0, "seam pairing equality");

  int traces = 0, trace_bad = 0;
  for (int p = 0; p < 2; ++p) {
    const int off = u0.offsets[static_cast<std::size_t>(p)];
    const CVector y_eq = run.y.segment(off, u.n_eq);
    const CVector x_int = back_substitute(*run.entry_models[static_cast<std::size_t>(through.layout.cells[static_cast<std::size_t>(p)].entry)], y_eq);
    CVector xi(u.cols());
    xi << y_eq, x_int;
    const CVector x = u.dense().cast<cdouble>() * xi;
    for (int r = 0; r < u.rows; ++r) {
      const int c = u.col[static_cast<std::size_t>(r)];
      if (c < 0 || c >= u.n_eq) continue;
      const auto& e = eq.functions[static_cast<std::size_t>(c)];
      if (!e.half() || cell.edges[static_cast<std::size_t>(e.edge)].cls != EdgeClass::Traversal) continue;
      ++traces;
      if (x(r) != static_cast<double>(u.sign[static_cast<std::size_t>(r)]) * y_eq(c)) ++trace_bad;
    }
  }
  o.note("interior_traces", traces);
  o.check(traces > 0 && trace_bad == 0, "interior trace equals eq half");

  // (c) Through strip: seam halves stay independent. Stub ending inside the
  // cell: the halves on its open face share one unknown (case 2).
  o.note("through_seam_edges_independent", distinct_seam);
  o.check(distinct_seam == static_cast<int>(left.size()) && !left.empty(), "through case keeps halves distinct");

  const auto stub_cell = layered_cell(test::strip_cell_params(false));
  const ArraySetup stub = prepare_array({stub_cell}, spec);
  MacromodelCache stub_cache;
  const MacromodelRun sr = run_macromodel(stub, src, opt, stub_cache);
  o.check(sr.solution.report.converged, "stub solve converged");
  int merged = 0, unmerged = 0;
  for (int p = 0; p < 2; ++p) {
    const int off = sr.system.u0.offsets[static_cast<std::size_t>(p)];
    for (Face face : {Face::NegX, Face::PosX})
      for (const auto& [edge, fs_] : traversal_halves(stub.entry_cells[0], sr.eq[0], face)) {
        if (fs_.size() != 2) {
          ++unmerged;
          continue;
        }
        const int ca = sr.system.u0.col[static_cast<std::size_t>(off + fs_[0])];
        const int cb_ = sr.system.u0.col[static_cast<std::size_t>(off + fs_[1])];
        if (ca >= 0 && ca == cb_) {
          ++merged;
          const cdouble a = sr.y(off + fs_[0]), b = sr.y(off + fs_[1]);
          if (std::abs(a) != std::abs(b)) ++unmerged;
        } else {
          ++unmerged;
        }
      }
  }
  o.note("stub_merged_edges", merged);
  o.check(merged > 0 && unmerged == 0, "stub halves merged into one dof");

  // The interior-connectivity form of case 2 ties the halves directly.
  const CellBasis scb = build_basis(stub_cell);
  const BasisSet seq = build_eq_basis(stub_cell);
  const auto open = build_interior_connectivity(stub_cell, scb, seq);
  const auto closed = build_interior_connectivity(stub_cell, scb, seq, {Face::NegX});
  const auto ends = traversal_positions(stub_cell)[static_cast<int>(Face::NegX)].midpoints.size();
  o.check(closed.ties.size() == open.ties.size() + ends && ends > 0, "terminating face ties");
}

// ---------------------------------------------------------------- 5

UnitCellGeometry half_patch_cell(bool right) {
  LayeredCellParams p;
  const Rect a{3.375e-3, 6.75e-3, -1.35e-3, 1.35e-3}, b{-6.75e-3, -3.375e-3, -1.35e-3, 1.35e-3};
  p.pec = {right ? a : b};
  p.refine = {right ? b : a};
  return layered_cell(p, right ? "A" : "B");
}

void oracle(Outcome& o) {
  LayoutSpec spec;
  spec.mx = 2;
  spec.my = 2;
  spec.cell_map = {0, 1, 0, 1};
  const ArraySetup setup = prepare_array({half_patch_cell(true), half_patch_cell(false)}, spec);
  IncidentSource s;
  s.frequency = 9.6e9;
  s.position = Vec3(0, 0, 0.625);
  s.moment = CVec3(1, 0, 0);
  RunOptions opt;
  opt.gmres.tol = 1e-6;
  MacromodelCache cache;
  const auto t0 = std::chrono::steady_clock::now();
  const MacromodelRun mm = run_macromodel(setup, s, opt, cache);
  RunOptions plain = opt;
  plain.preconditioner = false;
  MacromodelCache cache2;
  const MacromodelRun mm_plain = run_macromodel(setup, s, plain, cache2);
  const OracleRun orc = run_oracle(setup, s, opt);
  const Radiator a = macromodel_radiator(setup, mm, mm.y), b = oracle_radiator(setup, orc);
  std::vector<double> theta;
  for (int t = -90; t <= 90; ++t) theta.push_back(t);
  const FieldFunction fa = [&](double t, double p) { return a.field(t, p); };
  const FieldFunction fb = [&](double t, double p) { return b.field(t, p); };
  const double err = relative_l2(radiate_cut(fa, 0.0, theta), radiate_cut(fb, 0.0, theta));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.note("scenario", setup.toeplitz.scenario);
  o.note("rel_l2_phi0", err);
  o.note("gmres_it", mm.solution.report.iterations);
  o.note("gmres_it_unpreconditioned", mm_plain.solution.report.iterations);
  o.note("oracle_unknowns", orc.solution.unknowns.size());
  o.note("seconds", secs);
  o.check(mm.solution.report.converged && mm_plain.solution.report.converged, "gmres converged");
  o.check(mm.solution.report.iterations <= mm_plain.solution.report.iterations, "preconditioner does not add iterations");
  o.check(err <= kOracleTol, "macromodel vs oracle phi=0 cut");
}

// ---------------------------------------------------------------- 6

LayoutSpec grid(int mx, int my, std::vector<int> map = {}) {
  LayoutSpec s;
  s.mx = mx;
  s.my = my;
  s.cell_map = std::move(map);
  return s;
}

void toeplitz(Outcome& o) {
  const auto cell = layered_cell(test::strip_cell_params(true));
  const BasisSet eq = build_eq_basis(cell);
  const double px = cell.box.size().x(), py = cell.box.size().y(), f = 20e9;
  auto at = [&](int i, int j) { return Vec3(i * px, j * py, 0); };

  double equal = 0;
  for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{-2, 1}, std::pair{3, -3}}) {
    const CMatrix ref = assemble_coupling_block(cell, eq, at(0, 0), cell, eq, at(di, dj), f);
    for (auto [i, j] : {std::pair{2, 3}, std::pair{-1, 4}, std::pair{5, 0}})
      equal = std::max(equal, rel(assemble_coupling_block(cell, eq, at(i, j), cell, eq, at(i + di, j + dj), f), ref));
  }
  o.note("block_offset_error", equal);
  o.check(equal < kToeplitzTol, "equal offsets give equal blocks");

  double fft = 0;
  for (int m : {3, 4}) {
    const BlockToeplitzOperator op(m, m, static_cast<int>(eq.size()), [&](int di, int dj) {
      return assemble_coupling_block(cell, eq, at(0, 0), cell, eq, at(di, dj), f);
    });
    const CVector x = test::random_vector(op.size(), 90 + m);
    const CVector d = op.dense() * x;
    fft = std::max({fft, rel(op.apply(x), d), rel(op.apply_dense(x), d)});
  }
  o.note("fft_vs_dense", fft);
  o.check(fft < kToeplitzTol, "fft matvec");

  auto scenario = [](std::vector<UnitCellGeometry> cells, const LayoutSpec& spec) {
    const ArrayLayout layout = replicate(cells, spec);
    std::vector<UnitCellGeometry> entries;
    for (const auto& e : layout.entries) entries.push_back(cells[static_cast<std::size_t>(e.cell)]);
    return check_toeplitz_conditions(layout, entries);
  };
  const auto same = scenario({layered_cell(test::strip_cell_params(true))}, grid(3, 3));
  const auto some = scenario({layered_cell(test::offset_strip_params(-0.5e-3, 0.5e-3)), layered_cell(test::offset_strip_params(0, 0))},
                             grid(2, 2, {0, 1, 1, 0}));
  const auto moved = scenario({layered_cell(test::offset_strip_params(-0.5e-3, 0.5e-3)), layered_cell(test::offset_strip_params(0.5e-3, 1.5e-3))},
                              grid(2, 1, {0, 1}));
  o.note("scenarios", std::to_string(same.scenario) + "/" + std::to_string(some.scenario) + "/" + std::to_string(moved.scenario));
  o.check(same.scenario == 1 && same.toeplitz && same.padding.empty(), "identical traversal is scenario 1");
  o.check(some.scenario == 2 && some.toeplitz && !some.padding.empty(), "partial traversal is scenario 2");
  o.check(moved.scenario == 3 && !moved.toeplitz, "misaligned traversal is scenario 3");
}

// ---------------------------------------------------------------- 7

void postproc(Outcome& o) {
  const CVector v = test::random_vector(400, 31);
  double unit = 0;
  for (int i = 0; i < 400; i += 2) {
    const CpField c = cp_decompose(v(i), v(i + 1));
    const double in = std::norm(v(i)) + std::norm(v(i + 1));
    unit = std::max(unit, std::abs(std::norm(c.rhcp) + std::norm(c.lhcp) - in) / in);
  }
  o.note("cp_power_error", unit);
  o.check(unit < kCpTol, "cp unitarity");

  // Directivity of an arbitrary smooth pattern integrates to 4 pi.
  const FieldFunction pattern = [](double t, double p) {
    return FarField{cdouble(std::cos(t / 2) * (1 + 0.3 * std::cos(p)), 0.2), cdouble(0.5 * std::sin(t), std::sin(p) * 0.1)};
  };
  const double prad = radiated_power(pattern);
  const int nt = 360, np = 720;
  double sphere = 0;
  for (int i = 0; i < nt; ++i) {
    const double t = (i + 0.5) * kPi / nt;
    for (int j = 0; j < np; ++j) sphere += directivity(pattern(t, (j + 0.5) * 2 * kPi / np), prad) * std::sin(t);
  }
  sphere *= (kPi / nt) * (2 * kPi / np);
  o.note("D_integral_over_4pi", sphere / (4 * kPi));
  o.check(std::abs(sphere / (4 * kPi) - 1) < kSphereTol, "directivity integral");

  const FieldFunction dipole = [](double t, double) { return FarField{cdouble(std::sin(t), 0.0), 0.0}; };
  const double peak = to_dbi(directivity(dipole(kPi / 2, 0), radiated_power(dipole)));
  o.note("dipole_peak_dBi", peak);
  o.check(std::abs(peak - 10 * std::log10(1.5)) < kDipoleDbTol, "dipole peak");

  const double k0 = free_space_wavenumber(30e9);
  bool exact = true;
  for (double F : {0.1, 0.25, 1.0})
    for (double a0 : {0.0, 0.5672})
      exact = exact && rotation_angle(0, 0, F, a0, k0) == k0 * F / 2;
  o.check(exact, "rotation angle at the origin");
}

// ---------------------------------------------------------------- 8

const char* kind_name(PatchKind k) {
  switch (k) {
    case PatchKind::Pec: return "pec";
    case PatchKind::Dielectric: return "dielectric";
    case PatchKind::Equivalent: return "equivalent";
  }
  return "?";
}

void scaling(Outcome& o) {
  using nlohmann::json;
  const fs::path dir = fs::temp_directory_path() / "emsurf_acceptance_scaling";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const LayeredCellParams p = test::strip_cell_params(true);
  save_msh(dir / "cell.msh", layered_cell_mesh(p));
  const CellSpec spec = layered_cell_spec(p, "strip");
  json cell = {{"name", "strip"}, {"mesh", "cell.msh"}, {"regions", json::array()}, {"tags", json::array()}};
  for (const auto& r : spec.regions) cell["regions"].push_back({{"id", r.id}, {"eps_r", r.eps_r.real()}});
  for (const auto& t : spec.tags) {
    json tag = {{"tag", t.tag}, {"kind", kind_name(t.kind)}, {"plus", t.region_plus}};
    if (t.region_minus != kExteriorRegion) tag["minus"] = t.region_minus;
    cell["tags"].push_back(tag);
  }
  const int M = 6;
  const json scene = {{"frequency", 10e9},
                      {"mode", "macromodel"},
                      {"cells", json::array({cell})},
                      {"layout", {{"mx", M}, {"my", M}}},
                      {"excitation", {{"type", "dipole"}, {"position", {0.0, 0.0, 0.05}}, {"moment", {1.0, 0.0, 0.0}}}},
                      {"solver", {{"tolerance", 1e-4}}},
                      {"output", {{"directory", "out"}, {"cuts_deg", {0.0}}, {"theta_deg", {-90, 90, 5}}}}};
  std::ofstream(dir / "scene.json") << scene.dump(2);
  const std::string cfg = (dir / "scene.json").string();
  const char* argv[] = {"emsurf", "solve", "--config", cfg.c_str()};
  std::ostringstream out, err;
  const int code = run_cli(4, argv, out, err);
  o.note("exit", code);
  o.check(code == 0, "solve exit code");
  if (code != 0) {
    o.detail << err.str();
    return;
  }
  std::ifstream in(dir / "out" / "solve_report.json");
  const json r = json::parse(in);
  const int blocks = r["periodicity"]["toeplitz_blocks"].get<int>();
  const double n_eq = r["dofs"]["entry0_eq"].get<double>();
  const double bound = std::pow(M * M * n_eq, 2) * 16.0;
  const double peak = r["peak_memory_bytes"].get<double>();
  o.note("toeplitz_blocks", blocks);
  o.note("coupling_path", r["periodicity"]["coupling_path"].get<std::string>());
  o.note("peak_memory_bytes", peak);
  o.note("dense_bound_bytes", bound);
  o.note("gmres_it", r["gmres"]["iterations"].get<int>());
  o.check(blocks == (2 * M - 1) * (2 * M - 1), "block count (2M-1)^2");
  o.check(r["periodicity"]["coupling_path"] == "fft", "fft coupling path");
  o.check(r["converged"].get<bool>(), "converged");
  o.check(peak < bound, "peak memory under the dense bound");
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emsurf acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (criterion) {
      case 1: kernels(o); break;
      case 2: mie(o); break;
      case 3: algebra(o); break;
      case 4: traversal(o); break;
      case 5: oracle(o); break;
      case 6: toeplitz(o); break;
      case 7: postproc(o); break;
      case 8: scaling(o); break;
    }
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  o.note("runtime_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  std::cout << "criterion " << criterion << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail.str() << std::endl;
  return o.pass ? 0 : 1;
}
