// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/cli/commands.hpp"

#include "emsurf/cli/pipeline.hpp"
#include "emsurf/postproc/mie.hpp"
#include "emsurf/postproc/polarization.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace emsurf {

namespace {

std::string cut_name(const std::string& prefix, double phi) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_phi%g", prefix.c_str(), phi);
  std::string stem = buf;
  for (auto& c : stem)
    if (c == '.') c = 'p';
  return stem + ".csv";
}

bool is_body_scene(const std::vector<UnitCellGeometry>& cells) { return cells.size() == 1 && !cells.front().has_box; }

std::vector<FarFieldCut> compute_cuts(const SceneConfig& cfg, const FieldFunction& f, double* p_rad) {
  std::vector<FarFieldCut> cuts;
  const auto theta = cfg.output.theta_samples();
  for (double phi : cfg.output.cuts_deg) cuts.push_back(radiate_cut(f, phi, theta));
  if (cfg.output.directivity) {
    const double p = radiated_power(f);
    if (!(p > 0.0)) throw Error(ErrorKind::Numerical, "radiated power is zero; directivity is undefined");
    for (auto& c : cuts) normalize_cut(c, p);
    if (p_rad) *p_rad = p;
  }
  return cuts;
}

void write_cuts(const std::filesystem::path& dir, const std::string& prefix, const std::vector<FarFieldCut>& cuts,
                RunReport& report) {
  for (const auto& c : cuts) {
    std::ostringstream os;
    write_cut_csv(os, c);
    const auto path = dir / cut_name(prefix, c.phi_deg);
    write_text(path, os.str());
    report.add_file(path);
  }
}

// Bistatic RCS comparison against the Mie series for a plane wave along +z
// polarized along x.
double mie_worst_error(const SceneConfig& cfg, const FieldFunction& f, std::ostream& out) {
  const auto& s = cfg.excitation;
  if (s.kind != SourceKind::PlaneWave || (s.direction - Vec3(0, 0, 1)).norm() > 1e-9 ||
      std::abs(s.polarization.x()) == 0.0 || std::abs(s.polarization.y()) + std::abs(s.polarization.z()) > 0.0)
    throw Error(ErrorKind::Config, "config /mie: needs a plane wave along +z polarized along x");
  const MieSphere mie(cfg.mie->radius, cfg.mie->eps_r, cfg.frequency);
  const double e0 = std::norm(s.amplitude * s.polarization.x());
  double worst = 0.0;
  for (double phi : {0.0, 90.0})
    for (int t = 0; t <= 180; t += 5) {
      const double th = t * kPi / 180.0, ph = phi * kPi / 180.0;
      const FarField e = f(th, ph);
      const double rcs = 4.0 * kPi * (std::norm(e.e_theta) + std::norm(e.e_phi)) / e0;
      const double ref = mie.bistatic_rcs(th, ph);
      worst = std::max(worst, std::abs(rcs / ref - 1.0));
    }
  out << "mie comparison: worst bistatic RCS relative error " << worst << "\n";
  return worst;
}

void fill_periodicity(const ArraySetup& setup, RunReport& r) {
  const auto& t = setup.toeplitz;
  r.scenario = t.scenario;
  r.toeplitz = t.toeplitz;
  r.periodicity_message = t.message;
  r.traversal_edges = t.traversal_edges;
  r.padding_points = static_cast<int>(t.padding.size());
  r.unique_entries = static_cast<int>(setup.layout.entries.size());
  for (std::size_t e = 0; e < setup.entry_cells.size(); ++e) {
    const auto faces = traversal_positions(setup.entry_cells[e]);
    std::ostringstream os;
    os << "entry " << e << " (cell " << setup.layout.entries[e].cell << ", rotation " << setup.layout.entries[e].rotation_deg
       << " deg):";
    int total = 0;
    for (const auto& f : faces) {
      if (f.midpoints.empty()) continue;
      os << " " << to_string(f.face) << "=" << f.midpoints.size();
      total += static_cast<int>(f.midpoints.size());
    }
    if (total == 0) os << " no traversal";
    r.traversal_map.push_back(os.str());
  }
}

void fill_edge_classes(const SceneConfig& cfg, const std::vector<UnitCellGeometry>& cells, RunReport& r) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto counts = edge_class_counts(cells[c]);
    std::ostringstream os;
    os << cfg.cells[c].name << ":";
    for (int k = 0; k < 5; ++k) os << " " << to_string(static_cast<EdgeClass>(k)) << "=" << counts[static_cast<std::size_t>(k)];
    r.edge_classes.push_back(os.str());
  }
}

void print_summary(const RunReport& r, std::ostream& out) {
  for (const auto& s : r.edge_classes) out << "edges " << s << "\n";
  for (const auto& s : r.traversal_map) out << "traversal " << s << "\n";
  if (r.scenario > 0) {
    out << "scenario " << r.scenario << ", " << (r.toeplitz ? "toeplitz" : "dense coupling") << "\n";
    if (!r.toeplitz) out << "warning: Toeplitz conditions fail (" << r.periodicity_message << "); falling back to dense coupling\n";
  }
}

RunMode effective_mode(const SceneConfig& cfg, const CommandOptions& opt) { return opt.mode ? *opt.mode : cfg.mode; }

}  // namespace

int configure_threads(std::optional<int> threads) {
  int n = 0;
  if (threads) {
    n = *threads;
  } else if (const char* env = std::getenv("EMSURF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw Error(ErrorKind::Config, "EMSURF_THREADS must be a positive integer");
    n = static_cast<int>(v);
  }
  if (n < 0 || (threads && n < 1)) throw Error(ErrorKind::Config, "--threads must be a positive integer");
  if (n > 0) omp_set_num_threads(n);
  return n > 0 ? n : omp_get_max_threads();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Geometry: return 2;
    case ErrorKind::Numerical: return 3;
    case ErrorKind::Io: return 4;
  }
  return 1;
}

RunReport cmd_check(const SceneConfig& cfg, std::ostream& out) {
  RunReport r;
  r.command = "check";
  r.mode = to_string(cfg.mode);
  r.config_hash = hex64(cfg.hash);
  const auto cells = load_cells(cfg);
  fill_edge_classes(cfg, cells, r);
  if (is_body_scene(cells)) {
    r.coupling_path = "none";
    r.dofs["oracle_unknowns"] = reference_unknowns(cells.front());
    r.notes.push_back("single body without an equivalent surface; only the oracle solver applies");
  } else {
    const ArraySetup setup = prepare_array(cells, resolve_layout(cfg, cells));
    fill_periodicity(setup, r);
    r.coupling_path = setup.toeplitz.toeplitz ? "fft" : "dense";
    r.dofs["placements"] = static_cast<long long>(setup.layout.cells.size());
  }
  print_summary(r, out);
  r.write(cfg.output.directory / "check_report.json");
  return r;
}

RunReport cmd_solve(const SceneConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  RunReport r;
  r.command = "solve";
  const RunMode mode = effective_mode(cfg, opt);
  r.mode = to_string(mode);
  r.config_hash = hex64(cfg.hash);
  const auto& dir = cfg.output.directory;
  const auto cells = load_cells(cfg);
  fill_edge_classes(cfg, cells, r);

  if (is_body_scene(cells)) {
    if (mode != RunMode::Oracle)
      throw Error(ErrorKind::Config, "the scene has no equivalent surface; use mode oracle");
    const UnitCellGeometry& body = cells.front();
    const int n = reference_unknowns(body);
    r.dofs["oracle_unknowns"] = n;
    if (n > cfg.options.reference.dof_limit)
      throw Error(ErrorKind::Config, "oracle needs " + std::to_string(n) + " unknowns, above solver/dof_limit");
    const ReferenceSolution sol = direct_reference_solve(body, cfg.excitation, cfg.options.reference);
    const RegionRange& ext = sol.exterior();
    const Radiator rad({CurrentSet{&sol.geometry, &sol.basis.basis, Vec3::Zero(), ext.j_begin,
                                   sol.x.segment(ext.j_begin, ext.j_count + ext.m_count)}},
                       cfg.frequency);
    const FieldFunction f = [&rad](double t, double p) { return rad.field(t, p); };
    r.coupling_path = "none";
    r.metrics["oracle_rcond"] = sol.rcond;
    if (cfg.mie) r.metrics["mie_max_rel_rcs_error"] = mie_worst_error(cfg, f, out);
    write_cuts(dir, "oracle", compute_cuts(cfg, f, nullptr), r);
    const auto sp = dir / "solution_oracle.emsol";
    write_solution(sp, {SolutionKind::Oracle, cfg.frequency, body.hash, sol.x.segment(ext.j_begin, ext.j_count + ext.m_count)});
    r.add_file(sp);
    print_summary(r, out);
    r.write(dir / "solve_report.json");
    return r;
  }

  const ArraySetup setup = prepare_array(cells, resolve_layout(cfg, cells));
  fill_periodicity(setup, r);
  const std::uint64_t lh = layout_hash(setup);
  std::vector<FarFieldCut> macro_cuts, oracle_cuts;

  if (mode != RunMode::Macromodel) {
    const int n = reference_unknowns(merge_array(setup.layout, setup.entry_cells));
    r.dofs["oracle_unknowns"] = n;
    if (n > cfg.options.reference.dof_limit)
      throw Error(ErrorKind::Config, "oracle needs " + std::to_string(n) + " unknowns, above solver/dof_limit " +
                                         std::to_string(cfg.options.reference.dof_limit));
  }

  if (mode != RunMode::Oracle) {
    MacromodelCache cache(opt.cache_dir);
    const MacromodelRun run = run_macromodel(setup, cfg.excitation, cfg.options, cache);
    r.coupling_path = run.system.path == CouplingPath::Fft ? "fft" : "dense";
    if (run.system.toeplitz) r.toeplitz_blocks = run.system.toeplitz->block_count();
    r.cache_hits = run.cache_hits;
    r.cache_builds = run.cache_builds;
    r.dofs["expanded_eq"] = run.system.expanded_size();
    r.dofs["unknowns"] = run.system.unknowns();
    for (std::size_t e = 0; e < run.eq.size(); ++e) {
      r.dofs["entry" + std::to_string(e) + "_eq"] = static_cast<long long>(run.eq[e].size());
      r.dofs["entry" + std::to_string(e) + "_interior"] = run.interior_unknowns[e];
    }
    for (const auto& [k, v] : run.timings) r.timings["macromodel." + k] = v;
    r.peak_memory_bytes = run.peak_memory_bytes;
    r.gmres = run.solution.report;
    r.converged = run.solution.report.converged;
    out << "gmres: " << run.solution.report.iterations << " iterations, residual " << run.solution.report.final_residual
        << (r.converged ? "" : " (not converged)") << "\n";
    if (!r.converged) {
      r.notes.push_back("GMRES did not converge; cuts and solution files withheld");
      print_summary(r, out);
      r.write(dir / "solve_report.json");
      throw Error(ErrorKind::Numerical, "GMRES did not reach the tolerance within the iteration limit");
    }
    const Radiator rad = macromodel_radiator(setup, run, run.y);
    const FieldFunction f = [&rad](double t, double p) { return rad.field(t, p); };
    macro_cuts = compute_cuts(cfg, f, nullptr);
    write_cuts(dir, "macromodel", macro_cuts, r);
    const auto sp = dir / "solution_macromodel.emsol";
    write_solution(sp, {SolutionKind::Macromodel, cfg.frequency, lh, run.y});
    r.add_file(sp);
  }

  if (mode != RunMode::Macromodel) {
    const OracleRun orc = run_oracle(setup, cfg.excitation, cfg.options);
    for (const auto& [k, v] : orc.timings) r.timings["oracle." + k] = v;
    r.metrics["oracle_rcond"] = orc.solution.rcond;
    const Radiator rad = oracle_radiator(setup, orc);
    const FieldFunction f = [&rad](double t, double p) { return rad.field(t, p); };
    oracle_cuts = compute_cuts(cfg, f, nullptr);
    write_cuts(dir, "oracle", oracle_cuts, r);
    const auto sp = dir / "solution_oracle.emsol";
    write_solution(sp, {SolutionKind::Oracle, cfg.frequency, lh, oracle_exterior(orc)});
    r.add_file(sp);
    if (r.coupling_path.empty()) r.coupling_path = "none";
  }

  if (mode == RunMode::Both) {
    for (std::size_t c = 0; c < macro_cuts.size(); ++c) {
      char key[64];
      std::snprintf(key, sizeof(key), "rel_l2_phi%g", macro_cuts[c].phi_deg);
      r.metrics[key] = relative_l2(macro_cuts[c], oracle_cuts[c]);
      out << "macromodel vs oracle, phi " << macro_cuts[c].phi_deg << " deg: relative L2 " << r.metrics[key] << "\n";
    }
  }
  print_summary(r, out);
  r.write(dir / "solve_report.json");
  return r;
}

RunReport cmd_farfield(const SceneConfig& cfg, std::ostream& out) {
  RunReport r;
  r.command = "farfield";
  r.mode = to_string(cfg.mode);
  r.config_hash = hex64(cfg.hash);
  const auto& sols = cfg.output.solutions;
  if (sols.empty()) throw Error(ErrorKind::Config, "config /output/solutions: no solution file given");
  if (cfg.output.cp == CpMode::Dual && sols.size() < 2)
    throw Error(ErrorKind::Config,
                "config /output/solutions: dual-run CP needs the x-polarized and the y-polarized solution");
  const auto cells = load_cells(cfg);
  const bool body = is_body_scene(cells);
  std::optional<ArraySetup> setup;
  if (!body) setup = prepare_array(cells, resolve_layout(cfg, cells));
  const std::uint64_t lh = body ? cells.front().hash : layout_hash(*setup);

  // Radiators keep their own copies of the weighted currents.
  std::vector<Radiator> rads;
  for (std::size_t s = 0; s < std::min<std::size_t>(sols.size(), cfg.output.cp == CpMode::Dual ? 2 : 1); ++s) {
    const SolutionFile file = read_solution(sols[s]);
    if (file.layout_hash != lh) throw Error(ErrorKind::Config, sols[s].string() + " belongs to a different geometry");
    if (file.kind == SolutionKind::Macromodel) {
      if (body) throw Error(ErrorKind::Config, sols[s].string() + " is a macromodel solution but the scene is a single body");
      const MacromodelRun run = macromodel_layout(*setup, file.frequency);
      if (file.coeff.size() != run.system.expanded_size())
        throw Error(ErrorKind::Io, sols[s].string() + ": coefficient count does not match the layout");
      rads.push_back(macromodel_radiator(*setup, run, file.coeff));
    } else if (body) {
      const CellBasis basis = build_basis(cells.front());
      const RegionRange& ext = basis.layout.range(kExteriorRegion);
      if (file.coeff.size() != ext.j_count + ext.m_count)
        throw Error(ErrorKind::Io, sols[s].string() + ": coefficient count does not match the body basis");
      rads.emplace_back(std::vector<CurrentSet>{CurrentSet{&cells.front(), &basis.basis, Vec3::Zero(), ext.j_begin, file.coeff}},
                        file.frequency);
    } else {
      const OracleRun orc = oracle_from_exterior(*setup, file.frequency, file.coeff);
      rads.push_back(oracle_radiator(*setup, orc));
    }
  }

  const auto& dir = cfg.output.directory;
  const auto theta = cfg.output.theta_samples();
  const FieldFunction fx = [&rads](double t, double p) { return rads[0].field(t, p); };
  double p_rad = 0.0;
  const auto cuts = compute_cuts(cfg, fx, &p_rad);
  write_cuts(dir, "farfield", cuts, r);

  if (cfg.output.cp != CpMode::None) {
    const bool dual = cfg.output.cp == CpMode::Dual;
    // CP directivities are normalized by the total radiated power.
    FieldFunction total = fx;
    if (dual) {
      total = [&rads](double t, double p) {
        const FarField a = rads[0].field(t, p), b = rads[1].field(t, p);
        const cdouble j(0.0, 1.0);
        return FarField{(a.e_theta + j * b.e_theta) / std::sqrt(2.0), (a.e_phi + j * b.e_phi) / std::sqrt(2.0)};
      };
    }
    const double p = radiated_power(total);
    if (!(p > 0.0)) throw Error(ErrorKind::Numerical, "radiated power is zero; directivity is undefined");
    for (double phi : cfg.output.cuts_deg) {
      const FarFieldCut cx = radiate_cut(fx, phi, theta);
      std::vector<CpField> cp;
      if (dual) {
        const FieldFunction fy = [&rads](double t, double q) { return rads[1].field(t, q); };
        cp = cp_dual(cx, radiate_cut(fy, phi, theta));
      } else {
        for (const auto& e : cx.field) cp.push_back(cp_decompose(e.e_theta, e.e_phi));
      }
      std::ostringstream os;
      write_cp_csv(os, cx, cp, p);
      const auto path = dir / cut_name("cp", phi);
      write_text(path, os.str());
      r.add_file(path);
    }
    r.metrics["cp_total_power_w"] = p;
    r.notes.push_back("CP directivities are normalized by the total radiated power");
  }
  if (p_rad > 0.0) r.metrics["radiated_power_w"] = p_rad;
  out << "wrote " << r.files.size() << " files to " << dir.string() << "\n";
  r.write(dir / "farfield_report.json");
  return r;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"emsurf: macromodel solver for periodic arrays of dielectric and PEC unit cells"};
  app.require_subcommand(1);
  std::filesystem::path config;
  std::optional<int> threads;
  std::optional<std::string> cache_dir, mode;
  std::vector<CLI::App*> subs;
  for (const char* name : {"check", "solve", "farfield"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) == "check"     ? "classify geometry and periodicity"
                                             : std::string(name) == "solve" ? "run the solver pipeline"
                                                                            : "far-field cuts from stored solutions");
    sub->add_option("--config", config, "scene file (JSON)")->required();
    sub->add_option("--threads", threads, "worker threads (default: EMSURF_THREADS or all cores)");
    sub->add_option("--cache-dir", cache_dir, "directory for cached macromodels");
    sub->add_option("--mode", mode, "macromodel, oracle or both (overrides the config)");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? 0 : 2;
  }
  try {
    configure_threads(threads);
    CommandOptions opt;
    opt.threads = threads;
    if (cache_dir) opt.cache_dir = std::filesystem::path(*cache_dir);
    if (mode) opt.mode = parse_mode(*mode);
    const SceneConfig cfg = load_config(config);
    if (subs[0]->parsed()) cmd_check(cfg, out);
    else if (subs[1]->parsed()) cmd_solve(cfg, opt, out);
    else cmd_farfield(cfg, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 3;
  }
}

}  // namespace emsurf
