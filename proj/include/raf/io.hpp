#pragma once

// File formats: atomic writes, little-endian float64 point dumps, and the
// JSON sidecars that travel with them.

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "raf/raster.hpp"

namespace raf::io {

using json = nlohmann::ordered_json;

/// Writes `data` to `path` through a sibling temp file and a rename.
inline void atomic_write(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void atomic_write_json(const std::filesystem::path& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

/// Points as consecutive (re, im) pairs of little-endian IEEE-754 doubles.
inline std::string encode_points(std::span<const std::complex<double>> points) {
  std::string out(points.size() * 16, '\0');
  char* dst = out.data();
  for (const auto& z : points) {
    for (const double v : {z.real(), z.imag()}) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) *dst++ = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
  return out;
}

inline std::vector<std::complex<double>> decode_points(std::string_view bytes) {
  if (bytes.size() % 16 != 0) throw std::runtime_error("point file length is not a multiple of 16 bytes");
  std::vector<std::complex<double>> out(bytes.size() / 16);
  const auto* src = reinterpret_cast<const unsigned char*>(bytes.data());
  auto next = [&] {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{*src++} << (8 * b);
    return std::bit_cast<double>(bits);
  };
  for (auto& z : out) {
    const double re = next();
    const double im = next();
    z = {re, im};
  }
  return out;
}

inline json window_json(const Window& w) {
  return json{{"xmin", w.xmin}, {"xmax", w.xmax}, {"ymin", w.ymin}, {"ymax", w.ymax}};
}

/// Writes <stem>.pgm and <stem>.json (window, size, normalization).
template <class T>
void write_raster(const std::filesystem::path& dir, const std::string& stem, const RasterGrid<T>& grid,
                  PgmScaling scaling, json extra = json::object()) {
  atomic_write(dir / (stem + ".pgm"), grid.to_pgm(scaling));
  json side = {{"format", "PGM P5 16-bit big-endian"},
               {"width", grid.width()},
               {"height", grid.height()},
               {"window", window_json(grid.window())},
               {"normalization", scaling == PgmScaling::Log ? "log1p(value)/log1p(max)" : "value/max"},
               {"max_value", static_cast<double>(grid.max_value())},
               {"total", grid.total()}};
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  atomic_write_json(dir / (stem + ".json"), side);
}

}  // namespace raf::io
