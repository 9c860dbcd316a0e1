// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/mesh/msh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace emsurf {

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Io, name_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string name_;
  int line_no_ = 0;
};

// Number of nodes for the element types we may encounter, keyed by Gmsh type id.
int element_node_count(int type) {
  switch (type) {
    case 1: return 2;
    case 2: return 3;
    case 3: return 4;
    case 4: return 4;
    case 5: return 8;
    case 6: return 6;
    case 7: return 5;
    case 8: return 3;
    case 9: return 6;
    case 10: return 9;
    case 11: return 10;
    case 15: return 1;
    case 16: return 8;
    default: return -1;
  }
}

bool is_surface_type(int type) { return type == 2 || type == 3 || type == 9 || type == 10 || type == 16; }

void expect_end(LineReader& r, const char* tag) {
  const std::string line = r.require(tag);
  if (line.rfind(tag, 0) != 0) r.fail(std::string("expected ") + tag + ", got '" + line + "'");
}

}  // namespace

RawMesh parse_msh(std::istream& in, double scale, const std::string& source_name) {
  LineReader r(in, source_name);
  RawMesh mesh;
  std::unordered_map<long, int> node_index;
  bool have_format = false, have_nodes = false, have_elements = false;

  std::string line;
  while (r.next(line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::istringstream ss(r.require("format line"));
      double version = 0;
      int file_type = -1, data_size = 0;
      if (!(ss >> version >> file_type >> data_size)) r.fail("malformed $MeshFormat");
      if (version < 2.0 || version >= 3.0) r.fail("unsupported MSH version " + std::to_string(version));
      if (file_type != 0) r.fail("binary MSH is not supported");
      expect_end(r, "$EndMeshFormat");
      have_format = true;
    } else if (line.rfind("$PhysicalNames", 0) == 0) {
      const int n = std::stoi(r.require("physical name count"));
      for (int i = 0; i < n; ++i) {
        std::istringstream ss(r.require("physical name"));
        int dim = 0, tag = 0;
        std::string name;
        if (!(ss >> dim >> tag)) r.fail("malformed physical name");
        std::getline(ss >> std::ws, name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        mesh.physical_names[tag] = name;
      }
      expect_end(r, "$EndPhysicalNames");
    } else if (line.rfind("$Nodes", 0) == 0) {
      long n = 0;
      {
        std::istringstream ss(r.require("node count"));
        if (!(ss >> n) || n < 0) r.fail("malformed node count");
      }
      mesh.nodes.reserve(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(r.require("node"));
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(ss >> id >> x >> y >> z)) r.fail("malformed node record");
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) r.fail("non-finite node coordinate");
        if (!node_index.emplace(id, static_cast<int>(mesh.nodes.size())).second)
          r.fail("duplicate node id " + std::to_string(id));
        mesh.nodes.emplace_back(x * scale, y * scale, z * scale);
      }
      expect_end(r, "$EndNodes");
      have_nodes = true;
    } else if (line.rfind("$Elements", 0) == 0) {
      if (!have_nodes) r.fail("$Elements before $Nodes");
      long n = 0;
      {
        std::istringstream ss(r.require("element count"));
        if (!(ss >> n) || n < 0) r.fail("malformed element count");
      }
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(r.require("element"));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(ss >> id >> type >> ntags) || ntags < 0) r.fail("malformed element record");
        std::vector<int> tags(static_cast<std::size_t>(ntags));
        for (auto& t : tags)
          if (!(ss >> t)) r.fail("malformed element tags");
        const int nn = element_node_count(type);
        if (nn < 0) r.fail("unsupported element type " + std::to_string(type));
        if (is_surface_type(type) && type != 2) r.fail("unsupported element type " + std::to_string(type));
        std::vector<long> ids(static_cast<std::size_t>(nn));
        for (auto& v : ids)
          if (!(ss >> v)) r.fail("malformed element node list");
        if (type != 2) continue;
        std::array<int, 3> tri{};
        for (int k = 0; k < 3; ++k) {
          auto it = node_index.find(ids[static_cast<std::size_t>(k)]);
          if (it == node_index.end()) r.fail("element references unknown node " + std::to_string(ids[k]));
          tri[static_cast<std::size_t>(k)] = it->second;
        }
        mesh.triangles.push_back(tri);
        mesh.tags.push_back(tags.empty() ? 0 : tags.front());
      }
      expect_end(r, "$EndElements");
      have_elements = true;
    } else if (line.front() == '$' && line.rfind("$End", 0) != 0) {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + line.substr(1);
      std::string body;
      while (true) {
        body = r.require(end.c_str());
        if (body.rfind(end, 0) == 0) break;
      }
    }
  }
  if (!have_format) r.fail("missing $MeshFormat");
  if (!have_nodes || !have_elements) r.fail("missing $Nodes or $Elements");
  return mesh;
}

RawMesh load_msh(const std::filesystem::path& path, double scale) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open mesh file " + path.string());
  return parse_msh(in, scale, path.string());
}

void write_msh(std::ostream& out, const RawMesh& mesh, double scale) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  if (!mesh.physical_names.empty()) {
    out << "$PhysicalNames\n" << mesh.physical_names.size() << "\n";
    for (const auto& [tag, name] : mesh.physical_names) out << "2 " << tag << " \"" << name << "\"\n";
    out << "$EndPhysicalNames\n";
  }
  out << "$Nodes\n" << mesh.nodes.size() << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec3 p = mesh.nodes[i] / scale;
    out << i + 1 << ' ' << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  out << "$EndNodes\n$Elements\n" << mesh.triangles.size() << "\n";
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const int tag = mesh.tags.empty() ? 0 : mesh.tags[i];
    out << i + 1 << " 2 2 " << tag << ' ' << tag << ' ' << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  out << "$EndElements\n";
}

void save_msh(const std::filesystem::path& path, const RawMesh& mesh, double scale) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write mesh file " + path.string());
  write_msh(out, mesh, scale);
}

}  // namespace emsurf
