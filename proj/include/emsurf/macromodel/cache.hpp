// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/macromodel/schur.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

namespace emsurf {

/// Little-endian container: magic "EMSMACRO", u32 version, f64 frequency,
/// u64 geometry hash, u64 rows, u64 cols, then rows*cols complex pairs in
/// column-major order.
void write_macromodel(const std::filesystem::path& path, const Macromodel& model);
Macromodel read_macromodel(const std::filesystem::path& path);

/// One macromodel per unique key, optionally persisted in a directory and
/// reused when frequency and hash agree.
class MacromodelCache {
 public:
  explicit MacromodelCache(std::optional<std::filesystem::path> dir = std::nullopt);

  /// Returns the macromodel for `key`, calling `build` at most once per key.
  /// `need_factors` forces a rebuild when only a stored matrix is available.
  const Macromodel& get(std::uint64_t key, double frequency, const std::function<Macromodel()>& build,
                        bool need_factors = false);

  int hits() const { return hits_; }
  int builds() const { return builds_; }
  std::size_t size() const { return models_.size(); }

 private:
  std::optional<std::filesystem::path> dir_;
  std::map<std::uint64_t, Macromodel> models_;
  int hits_ = 0;
  int builds_ = 0;
};

}  // namespace emsurf
