// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/postproc/farfield.hpp"
#include "emsurf/postproc/polarization.hpp"
#include "emsurf/solve/gmres.hpp"
#include "emsurf/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emsurf {

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed = kFnvOffset);
std::string hex64(std::uint64_t v);
std::string read_file(const std::filesystem::path& path);
/// Content hash of a file as "fnv1a64:<16 hex digits>".
std::string file_hash(const std::filesystem::path& path);

enum class SolutionKind : std::uint32_t { Macromodel = 0, Oracle = 1 };

/// Binary solution container: header with format version, frequency and
/// layout hash, followed by the complex coefficients, little-endian.
struct SolutionFile {
  SolutionKind kind = SolutionKind::Macromodel;
  double frequency = 0.0;
  std::uint64_t layout_hash = 0;
  CVector coeff;
};

void write_solution(const std::filesystem::path& path, const SolutionFile& s);
SolutionFile read_solution(const std::filesystem::path& path);

struct RunReport {
  std::string command;
  std::string mode;
  std::string config_hash;
  // Periodicity and Toeplitz decision.
  int scenario = 0;
  bool toeplitz = false;
  std::string coupling_path;
  std::string periodicity_message;
  int traversal_edges = 0;
  int padding_points = 0;
  int toeplitz_blocks = 0;
  std::vector<std::string> traversal_map;
  std::vector<std::string> edge_classes;
  // Sizes.
  std::map<std::string, long long> dofs;
  int unique_entries = 0;
  int cache_hits = 0;
  int cache_builds = 0;
  // Solve.
  std::map<std::string, double> timings;
  double peak_memory_bytes = 0.0;
  std::optional<SolveReport> gmres;
  bool converged = true;
  // Comparisons, keyed by a short label.
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::map<std::string, std::string> files;

  void add_file(const std::filesystem::path& path);
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// Cut CSV with RHCP/LHCP columns. Directivities use `p_rad`, the total
/// radiated power.
void write_cp_csv(std::ostream& os, const FarFieldCut& cut, const std::vector<CpField>& cp, double p_rad);

/// Writes `text` to `path`, creating parent directories. Raises I/O errors.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace emsurf
