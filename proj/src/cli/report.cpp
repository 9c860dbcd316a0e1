// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/cli/report.hpp"

#include <json.hpp>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace emsurf {

static_assert(std::endian::native == std::endian::little, "binary containers assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'S', 'O', 'L', 'N', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::Io, path.string() + ": truncated solution header");
  return v;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_hash(const std::filesystem::path& path) { return "fnv1a64:" + hex64(fnv1a64(read_file(path))); }

void write_solution(const std::filesystem::path& path, const SolutionFile& s) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  os.write(kMagic, sizeof(kMagic));
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(s.kind));
  put(os, s.frequency);
  put(os, s.layout_hash);
  put(os, static_cast<std::uint64_t>(s.coeff.size()));
  os.write(reinterpret_cast<const char*>(s.coeff.data()), static_cast<std::streamsize>(sizeof(cdouble) * static_cast<std::size_t>(s.coeff.size())));
  if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

SolutionFile read_solution(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open solution file " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::Io, path.string() + ": not a solution file");
  if (get<std::uint32_t>(is, path) != kVersion) throw Error(ErrorKind::Io, path.string() + ": unsupported version");
  SolutionFile s;
  const auto kind = get<std::uint32_t>(is, path);
  if (kind > 1) throw Error(ErrorKind::Io, path.string() + ": unknown solution kind");
  s.kind = static_cast<SolutionKind>(kind);
  s.frequency = get<double>(is, path);
  s.layout_hash = get<std::uint64_t>(is, path);
  const auto n = get<std::uint64_t>(is, path);
  if (n > (1ull << 28)) throw Error(ErrorKind::Io, path.string() + ": bad coefficient count");
  s.coeff.resize(static_cast<Eigen::Index>(n));
  if (!is.read(reinterpret_cast<char*>(s.coeff.data()), static_cast<std::streamsize>(sizeof(cdouble) * n)))
    throw Error(ErrorKind::Io, path.string() + ": truncated coefficients");
  return s;
}

void RunReport::add_file(const std::filesystem::path& path) { files[path.filename().string()] = file_hash(path); }

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["mode"] = mode;
  j["config_hash"] = config_hash;
  j["periodicity"] = {{"scenario", scenario},
                      {"toeplitz", toeplitz},
                      {"coupling_path", coupling_path},
                      {"message", periodicity_message},
                      {"traversal_edges", traversal_edges},
                      {"padding_points", padding_points},
                      {"toeplitz_blocks", toeplitz_blocks},
                      {"traversal_map", traversal_map},
                      {"edge_classes", edge_classes}};
  j["dofs"] = dofs;
  j["macromodels"] = {{"unique_entries", unique_entries}, {"cache_hits", cache_hits}, {"cache_builds", cache_builds}};
  j["timings_s"] = timings;
  j["peak_memory_bytes"] = peak_memory_bytes;
  j["converged"] = converged;
  if (gmres) {
    j["gmres"] = {{"iterations", gmres->iterations},
                  {"converged", gmres->converged},
                  {"final_residual", gmres->final_residual},
                  {"residuals", gmres->residuals}};
  }
  j["metrics"] = metrics;
  j["notes"] = notes;
  j["files"] = files;
  return j.dump(2) + "\n";
}

void RunReport::write(const std::filesystem::path& path) const { write_text(path, to_json()); }

void write_cp_csv(std::ostream& os, const FarFieldCut& cut, const std::vector<CpField>& cp, double p_rad) {
  os << "theta_deg,phi_deg,re_Erhcp,im_Erhcp,re_Elhcp,im_Elhcp,D_rhcp_dBi,D_lhcp_dBi\n";
  char line[256];
  for (std::size_t i = 0; i < cp.size(); ++i) {
    const auto& c = cp[i];
    const double dr = to_dbi(directivity(FarField{c.rhcp, 0.0}, p_rad));
    const double dl = to_dbi(directivity(FarField{c.lhcp, 0.0}, p_rad));
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.12e,%.12e,%.12e,%.12e,%.6f,%.6f\n", cut.theta_deg[i], cut.phi_deg,
                  c.rhcp.real(), c.rhcp.imag(), c.lhcp.real(), c.lhcp.imag(), dr, dl);
    os << line;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace emsurf
