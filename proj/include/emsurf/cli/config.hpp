// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/cli/pipeline.hpp"
#include "emsurf/kernels/sources.hpp"
#include "emsurf/mesh/cell.hpp"
#include "emsurf/mesh/layout.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emsurf {

enum class RunMode { Macromodel, Oracle, Both };
enum class CpMode { None, Single, Dual };

const char* to_string(RunMode mode);
RunMode parse_mode(const std::string& text);

struct CellInput {
  std::string name;
  std::filesystem::path mesh;
  double scale = 1.0;
  CellSpec spec;
};

/// Transmitarray rotation rule: each element is turned by the phase that
/// steers a beam fed from a focal point, rounded to `step_deg`.
struct RotationRule {
  double focal_length = 0.0;
  double beam_deg = 0.0;
  double step_deg = 5.0;
};

struct MieCheck {
  double radius = 0.0;
  cdouble eps_r{1.0, 0.0};
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  std::vector<double> cuts_deg{0.0};
  double theta_start = -90.0;
  double theta_stop = 90.0;
  double theta_step = 1.0;
  bool directivity = true;
  CpMode cp = CpMode::None;
  /// Solution files read by the farfield command; the second is the
  /// y-polarized partner for the dual-run CP decomposition.
  std::vector<std::filesystem::path> solutions;

  std::vector<double> theta_samples() const;
};

struct SceneConfig {
  std::filesystem::path source_file;
  double frequency = 0.0;
  RunMode mode = RunMode::Macromodel;
  std::vector<CellInput> cells;
  LayoutSpec layout;
  std::optional<RotationRule> rotation_rule;
  IncidentSource excitation;
  RunOptions options;
  OutputSpec output;
  std::optional<MieCheck> mie;
  std::uint64_t hash = 0;
};

/// Parses and validates a JSON scene file. Errors carry the JSON path of the
/// offending field. Relative mesh and output paths resolve against the
/// directory of the config file.
SceneConfig load_config(const std::filesystem::path& path);
SceneConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Loads the meshes and builds the unique-cell geometry.
std::vector<UnitCellGeometry> load_cells(const SceneConfig& config);

/// Rotation in degrees of every placement under the rule, row-major, with the
/// array centered on the origin.
std::vector<double> rule_rotations(const RotationRule& rule, int mx, int my, double pitch_x, double pitch_y,
                                   double frequency);

/// Layout after expanding the rotation rule against the loaded cells.
LayoutSpec resolve_layout(const SceneConfig& config, const std::vector<UnitCellGeometry>& cells);

}  // namespace emsurf
