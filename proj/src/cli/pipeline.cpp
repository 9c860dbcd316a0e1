// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/cli/pipeline.hpp"

#include "emsurf/coupling/exterior.hpp"
#include "emsurf/macromodel/cell_system.hpp"
#include "emsurf/macromodel/schur.hpp"
#include "emsurf/solve/preconditioner.hpp"

#include <chrono>

namespace emsurf {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
}

template <class T>
void mix(std::uint64_t& h, const T& v) {
  mix(h, &v, sizeof(T));
}

IncidentSource to_layout_frame(IncidentSource s, const Vec3& center) {
  s.position += center;
  return s;
}

}  // namespace

std::uint64_t macromodel_key(const UnitCellGeometry& cell, const BasisSet& eq, double frequency,
                             const QuadratureOptions& quad) {
  std::uint64_t h = 1469598103934665603ULL;
  mix(h, cell.hash);
  mix(h, frequency);
  mix(h, quad.far_points);
  mix(h, quad.near_outer_points);
  mix(h, quad.near_outer_levels);
  mix(h, quad.near_inner_points);
  mix(h, quad.near_factor);
  for (const auto& f : eq.functions) {
    mix(h, f.edge);
    mix(h, f.count);
    mix(h, f.kind);
    for (int p = 0; p < f.count; ++p) mix(h, f.pieces[static_cast<std::size_t>(p)].tri);
  }
  return h;
}

ArraySetup prepare_array(std::vector<UnitCellGeometry> unique_cells, const LayoutSpec& spec) {
  ArraySetup s;
  s.unique_cells = std::move(unique_cells);
  s.layout = replicate(s.unique_cells, spec);
  for (const auto& e : s.layout.entries) {
    const auto& base = s.unique_cells[static_cast<std::size_t>(e.cell)];
    s.entry_cells.push_back(e.rotation_deg == 0.0 ? base : rotate_interior(base, e.rotation_deg));
  }
  s.toeplitz = check_toeplitz_conditions(s.layout, s.entry_cells);
  s.center = Vec3(0.5 * (s.layout.mx - 1) * s.layout.pitch_x, 0.5 * (s.layout.my - 1) * s.layout.pitch_y, 0.0);
  return s;
}

MacromodelRun run_macromodel(const ArraySetup& setup, const IncidentSource& source, const RunOptions& options,
                             MacromodelCache& cache) {
  source.validate();
  options.gmres.validate();
  MacromodelRun run;
  run.frequency = source.frequency;
  const double f = source.frequency;
  const IncidentSource src = to_layout_frame(source, setup.center);
  const ArrayLayout& layout = setup.layout;
  const std::size_t n_entries = setup.entry_cells.size();
  Stopwatch clock;

  // Per-entry bases, interior connectivity and macromodels.
  const int hits0 = cache.hits(), builds0 = cache.builds();
  double build_peak = 0.0;
  run.eq.resize(n_entries);
  run.interior.resize(n_entries);
  run.interior_unknowns.resize(n_entries);
  for (std::size_t e = 0; e < n_entries; ++e) {
    const UnitCellGeometry& cell = setup.entry_cells[e];
    run.eq[e] = build_eq_basis(cell, setup.toeplitz.padding);
    const CellBasis basis = build_basis(cell);
    run.interior[e] = build_interior_connectivity(cell, basis, run.eq[e]);
    run.interior_unknowns[e] = run.interior[e].n_int;
    const std::uint64_t key = macromodel_key(cell, run.eq[e], f, options.quad);
    const Macromodel& m = cache.get(key, f, [&] {
      CellSystem sys = assemble_cell_system(cell, basis, f, options.quad);
      const double n = sys.size();
      build_peak = std::max(build_peak, 16.0 * n * n);
      ReducedSystem red = reduce_system(sys, run.interior[e]);
      sys.blocks.clear();
      Macromodel model = schur_complement(red);
      model.id = key;
      model.frequency = f;
      return model;
    });
    run.entry_models.push_back(&m);
  }
  run.cache_hits = cache.hits() - hits0;
  run.cache_builds = cache.builds() - builds0;
  run.timings["macromodel"] = clock.lap();

  // Exterior connectivity and coupling.
  std::vector<EntryModel> entries;
  for (std::size_t e = 0; e < n_entries; ++e) entries.push_back({&setup.entry_cells[e], &run.eq[e], &run.interior[e]});
  AssembledSystem& sys = run.system;
  sys.u0 = build_exterior_connectivity(layout, entries, options.rim_merge);
  sys.offsets = sys.u0.offsets;
  for (const auto& p : layout.cells) sys.models.push_back(run.entry_models[static_cast<std::size_t>(p.entry)]);

  const bool fft = setup.toeplitz.toeplitz && !options.force_dense;
  if (fft) {
    const auto& cell0 = setup.entry_cells.front();
    const auto& eq0 = run.eq.front();
    for (const auto& b : run.eq)
      if (b.size() != eq0.size()) throw Error(ErrorKind::Geometry, "equivalent bases differ in size under Toeplitz storage");
    const Vec3 px(layout.pitch_x, 0, 0), py(0, layout.pitch_y, 0);
    sys.toeplitz.emplace(layout.mx, layout.my, static_cast<int>(eq0.size()), [&](int di, int dj) {
      return assemble_coupling_block(cell0, eq0, Vec3::Zero(), cell0, eq0, di * px + dj * py, f, options.quad);
    });
    sys.path = CouplingPath::Fft;
  } else {
    const int n = sys.u0.rows;
    sys.z0_dense = CMatrix::Zero(n, n);
    for (std::size_t p = 0; p < layout.cells.size(); ++p) {
      const auto& pp = layout.cells[p];
      for (std::size_t q = 0; q < layout.cells.size(); ++q) {
        const auto& pq = layout.cells[q];
        const auto ep = static_cast<std::size_t>(pp.entry), eq = static_cast<std::size_t>(pq.entry);
        const CMatrix b = assemble_coupling_block(setup.entry_cells[ep], run.eq[ep], pp.translation,
                                                  setup.entry_cells[eq], run.eq[eq], pq.translation, f, options.quad);
        sys.z0_dense.block(sys.offsets[p], sys.offsets[q], b.rows(), b.cols()) = b;
      }
    }
    sys.path = CouplingPath::Dense;
  }
  run.timings["coupling"] = clock.lap();

  // Excitation.
  sys.v = CVector::Zero(sys.u0.rows);
  for (std::size_t p = 0; p < layout.cells.size(); ++p) {
    const auto& pl = layout.cells[p];
    const auto e = static_cast<std::size_t>(pl.entry);
    BasisView view{&setup.entry_cells[e], &run.eq[e], pl.translation, 0, static_cast<int>(run.eq[e].size())};
    sys.v.segment(sys.offsets[p], view.size()) = project_incident(view, src);
  }
  sys.v_tilde = sys.u0.project(sys.v);
  run.timings["excitation"] = clock.lap();

  // Iterative solve.
  LinearOperator a = [&sys](const CVector& y) { return apply_system(sys, y); };
  std::unique_ptr<BlockJacobi> jacobi;
  LinearOperator m;
  if (options.preconditioner) {
    jacobi = std::make_unique<BlockJacobi>(sys);
    m = [&jacobi](const CVector& x) { return jacobi->apply(x); };
  }
  run.timings["preconditioner"] = clock.lap();
  run.solution = gmres(a, sys.v_tilde, options.gmres, m);
  run.y = sys.u0.expand(run.solution.x);
  run.timings["gmres"] = clock.lap();

  // Peak working-set estimate: stored operators plus the Krylov basis.
  double bytes = 0.0;
  for (const Macromodel* mm : run.entry_models) bytes += 16.0 * static_cast<double>(mm->z.size() + mm->z_ie.size());
  bytes += sys.toeplitz ? static_cast<double>(sys.toeplitz->memory_bytes()) : 16.0 * static_cast<double>(sys.z0_dense.size());
  bytes += 16.0 * (options.gmres.restart + 1.0) * sys.u0.unknowns + 16.0 * 4.0 * sys.u0.rows;
  if (jacobi)
    for (int b = 0; b < jacobi->blocks(); ++b) bytes += 32.0 * static_cast<double>(jacobi->block_matrix(b).size());
  run.peak_memory_bytes = std::max(bytes, build_peak);
  run.solution.report.peak_memory_bytes = run.peak_memory_bytes;
  for (const auto& [k, v] : run.timings) run.solution.report.phase_seconds[k] = v;
  return run;
}

MacromodelRun macromodel_layout(const ArraySetup& setup, double frequency) {
  MacromodelRun run;
  run.frequency = frequency;
  for (const auto& cell : setup.entry_cells) run.eq.push_back(build_eq_basis(cell, setup.toeplitz.padding));
  int rows = 0;
  for (const auto& p : setup.layout.cells) {
    run.system.offsets.push_back(rows);
    rows += static_cast<int>(run.eq[static_cast<std::size_t>(p.entry)].size());
  }
  run.system.u0.rows = rows;
  return run;
}

Radiator macromodel_radiator(const ArraySetup& setup, const MacromodelRun& run, const CVector& y) {
  std::vector<CurrentSet> sets;
  const auto& sys = run.system;
  for (std::size_t p = 0; p < setup.layout.cells.size(); ++p) {
    const auto& pl = setup.layout.cells[p];
    const auto e = static_cast<std::size_t>(pl.entry);
    const int n = static_cast<int>(run.eq[e].size());
    sets.push_back({&setup.entry_cells[e], &run.eq[e], pl.translation - setup.center, 0, y.segment(sys.offsets[p], n)});
  }
  return Radiator(sets, run.frequency, 6);
}

OracleRun run_oracle(const ArraySetup& setup, const IncidentSource& source, const RunOptions& options) {
  Stopwatch clock;
  OracleRun run;
  run.frequency = source.frequency;
  const UnitCellGeometry merged = merge_array(setup.layout, setup.entry_cells);
  run.timings["merge"] = clock.lap();
  run.solution = direct_reference_solve(merged, to_layout_frame(source, setup.center), options.reference);
  run.timings["direct_solve"] = clock.lap();
  return run;
}

Radiator oracle_radiator(const ArraySetup& setup, const OracleRun& run) {
  const auto& s = run.solution;
  const RegionRange& ext = s.exterior();
  CurrentSet set{&s.geometry, &s.basis.basis, -setup.center, ext.j_begin, s.x.segment(ext.j_begin, ext.j_count + ext.m_count)};
  return Radiator({set}, run.frequency, 6);
}

CVector oracle_exterior(const OracleRun& run) {
  const RegionRange& ext = run.solution.exterior();
  return run.solution.x.segment(ext.j_begin, ext.j_count + ext.m_count);
}

OracleRun oracle_from_exterior(const ArraySetup& setup, double frequency, const CVector& exterior) {
  OracleRun run;
  run.frequency = frequency;
  run.solution.geometry = merge_array(setup.layout, setup.entry_cells);
  run.solution.basis = build_basis(run.solution.geometry);
  const RegionRange& ext = run.solution.exterior();
  if (exterior.size() != ext.j_count + ext.m_count)
    throw Error(ErrorKind::Io, "stored oracle solution does not match the exterior basis size");
  run.solution.x = CVector::Zero(run.solution.basis.layout.size);
  run.solution.x.segment(ext.j_begin, exterior.size()) = exterior;
  return run;
}

std::uint64_t layout_hash(const ArraySetup& setup) {
  std::uint64_t h = 1469598103934665603ULL;
  mix(h, setup.layout.mx);
  mix(h, setup.layout.my);
  for (const auto& c : setup.entry_cells) mix(h, c.hash);
  for (const auto& p : setup.layout.cells) mix(h, p.entry);
  mix(h, setup.toeplitz.padding.size());
  return h;
}

}  // namespace emsurf
