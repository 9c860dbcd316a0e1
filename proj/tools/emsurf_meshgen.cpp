// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

// Writes fixture meshes: layered unit cells with rectangular PEC patches and
// geodesic spheres.

#include "emsurf/fixtures/meshgen.hpp"
#include "emsurf/mesh/msh.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace emsurf;

namespace {

Rect parse_rect(const std::vector<double>& v) {
  if (v.size() != 4) throw Error(ErrorKind::Config, "a rectangle needs x0 x1 y0 y1");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emsurf-meshgen: fixture meshes in Gmsh 2.2 ASCII (coordinates in meters)"};
  app.require_subcommand(1);

  LayeredCellParams cell;
  std::vector<std::vector<double>> patches, refine;
  std::vector<double> eps_re{2.2, 3.0};
  std::string out;
  auto* layered = app.add_subcommand("layered", "box cell of one or two dielectric layers with PEC patches at the interface");
  layered->add_option("--out", out, "output .msh")->required();
  layered->add_option("--size-x", cell.size_x, "cell size along x");
  layered->add_option("--size-y", cell.size_y, "cell size along y");
  layered->add_option("--thickness", cell.thickness, "layer thicknesses, bottom first")->expected(1, 2);
  layered->add_option("--eps", eps_re, "layer permittivities (real), bottom first")->expected(1, 2);
  layered->add_option("--h-eq", cell.h_eq, "edge length on the box");
  layered->add_option("--h-mid", cell.h_mid, "edge length on the interface");
  layered->add_option("--h-pec", cell.h_pec, "edge length on patches");
  layered->add_option("--patch", patches, "PEC rectangle x0 x1 y0 y1 (repeatable)")->expected(4)->allow_extra_args(false);
  layered->add_option("--refine", refine, "interface area meshed like a patch, x0 x1 y0 y1 (repeatable)")->expected(4);

  double radius = 0.0, edge = 0.0;
  bool inscribed = false;
  auto* sphere = app.add_subcommand("sphere", "geodesic sphere, tag 1");
  sphere->add_option("--out", out, "output .msh")->required();
  sphere->add_option("--radius", radius, "radius")->required();
  sphere->add_option("--edge", edge, "longest edge")->required();
  sphere->add_flag("--inscribed", inscribed, "keep vertices on the sphere instead of matching its volume");

  CLI11_PARSE(app, argc, argv);
  try {
    RawMesh mesh;
    if (layered->parsed()) {
      cell.eps.assign(eps_re.begin(), eps_re.end());
      if (cell.eps.size() != cell.thickness.size()) throw Error(ErrorKind::Config, "--eps and --thickness need the same count");
      for (const auto& p : patches) cell.pec.push_back(parse_rect(p));
      for (const auto& p : refine) cell.refine.push_back(parse_rect(p));
      mesh = layered_cell_mesh(cell);
    } else {
      mesh = geodesic_sphere_mesh(radius, edge, !inscribed);
    }
    save_msh(out, mesh);
    std::cout << "wrote " << out << ": " << mesh.nodes.size() << " nodes, " << mesh.triangles.size() << " triangles\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? 4 : 2;
  }
}
