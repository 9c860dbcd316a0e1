// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/cli/config.hpp"
#include "emsurf/cli/report.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace emsurf {

struct CommandOptions {
  std::optional<int> threads;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<RunMode> mode;
};

/// Applies --threads, falling back to EMSURF_THREADS. Returns the thread count in effect.
int configure_threads(std::optional<int> threads);

/// Process exit code for an error kind: 2 config or geometry, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind);

/// Geometry and periodicity only. Writes check_report.json.
RunReport cmd_check(const SceneConfig& config, std::ostream& out);

/// Full pipeline. Writes cuts, solutions and solve_report.json into the
/// output directory. Throws a numerical error after writing the report when
/// GMRES does not converge; cuts and solutions are then withheld.
RunReport cmd_solve(const SceneConfig& config, const CommandOptions& options, std::ostream& out);

/// Cuts from stored solutions, with optional CP columns.
RunReport cmd_farfield(const SceneConfig& config, std::ostream& out);

/// Entry point shared by the emsurf executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emsurf
