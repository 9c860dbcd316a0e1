// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/types.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace emsurf {

/// Triangle soup as read from a Gmsh file. Each triangle keeps the integer
/// physical-group tag of its element (0 when the element carries no tags).
struct RawMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tags;
  std::map<int, std::string> physical_names;
};

/// Parses Gmsh MSH 2.2 ASCII. Coordinates are multiplied by `scale` so that the
/// result is in meters. Points, lines and volume elements are skipped; any
/// surface element other than the 3-node triangle is rejected.
RawMesh parse_msh(std::istream& in, double scale = 1.0, const std::string& source_name = "<stream>");
RawMesh load_msh(const std::filesystem::path& path, double scale = 1.0);

/// Writes MSH 2.2 ASCII with one physical tag per triangle. Coordinates are
/// divided by `scale` before writing.
void write_msh(std::ostream& out, const RawMesh& mesh, double scale = 1.0);
void save_msh(const std::filesystem::path& path, const RawMesh& mesh, double scale = 1.0);

}  // namespace emsurf
