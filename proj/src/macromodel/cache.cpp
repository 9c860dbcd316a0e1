// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/macromodel/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace emsurf {

static_assert(std::endian::native == std::endian::little, "binary containers assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'M', 'A', 'C', 'R', 'O'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& what) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::Io, "truncated macromodel file: " + what);
  return v;
}

std::filesystem::path file_for(const std::filesystem::path& dir, std::uint64_t key) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << key << ".emm";
  return dir / os.str();
}

}  // namespace

void write_macromodel(const std::filesystem::path& path, const Macromodel& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  os.write(kMagic, sizeof(kMagic));
  put(os, kVersion);
  put(os, m.frequency);
  put(os, m.id);
  put(os, static_cast<std::uint64_t>(m.z.rows()));
  put(os, static_cast<std::uint64_t>(m.z.cols()));
  os.write(reinterpret_cast<const char*>(m.z.data()), static_cast<std::streamsize>(sizeof(cdouble) * static_cast<std::size_t>(m.z.size())));
  if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

Macromodel read_macromodel(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::Io, path.string() + ": not a macromodel file");
  if (get<std::uint32_t>(is, "version") != kVersion) throw Error(ErrorKind::Io, path.string() + ": unsupported version");
  Macromodel m;
  m.frequency = get<double>(is, "frequency");
  m.id = get<std::uint64_t>(is, "hash");
  const auto rows = get<std::uint64_t>(is, "rows"), cols = get<std::uint64_t>(is, "cols");
  if (rows != cols || rows > (1u << 20)) throw Error(ErrorKind::Io, path.string() + ": bad dimensions");
  m.z.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (!is.read(reinterpret_cast<char*>(m.z.data()), static_cast<std::streamsize>(sizeof(cdouble) * rows * cols)))
    throw Error(ErrorKind::Io, path.string() + ": truncated matrix");
  return m;
}

MacromodelCache::MacromodelCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create cache directory " + dir_->string());
  }
}

const Macromodel& MacromodelCache::get(std::uint64_t key, double frequency, const std::function<Macromodel()>& build,
                                       bool need_factors) {
  auto it = models_.find(key);
  if (it != models_.end() && (!need_factors || it->second.has_factors())) {
    ++hits_;
    return it->second;
  }
  if (dir_ && !need_factors) {
    const auto path = file_for(*dir_, key);
    if (std::filesystem::exists(path)) {
      Macromodel m = read_macromodel(path);
      if (m.id == key && m.frequency == frequency) {
        ++hits_;
        m.n_int = -1;  // interior size unknown for stored matrices
        return models_[key] = std::move(m);
      }
    }
  }
  Macromodel m = build();
  m.id = key;
  m.frequency = frequency;
  ++builds_;
  if (dir_) write_macromodel(file_for(*dir_, key), m);
  return models_[key] = std::move(m);
}

}  // namespace emsurf
