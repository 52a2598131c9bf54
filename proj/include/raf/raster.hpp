#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace raf {

/// Axis-aligned window [xmin, xmax] x [ymin, ymax] of the complex plane.
struct Window {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  [[nodiscard]] bool valid() const noexcept { return xmax > xmin && ymax > ymin; }
  [[nodiscard]] static Window centered(std::complex<double> c, double half) {
    return {c.real() - half, c.real() + half, c.imag() - half, c.imag() + half};
  }
};

inline constexpr std::size_t kMaxRasterSide = std::size_t{1} << 14;

enum class PgmScaling { Log, Linear };

/// Windowed grid of per-pixel accumulators; row 0 is the top edge (ymax).
/// Pixel indices are computed from the offset to the window center, so a
/// window symmetric under conjugation gives an exactly mirror-symmetric binning.
template <class T>
class RasterGrid {
 public:
  RasterGrid() = default;
  RasterGrid(Window window, std::size_t width, std::size_t height)
      : window_(window), width_(width), height_(height), cells_(width * height, T{}) {
    if (!window.valid()) throw std::invalid_argument("raster window must have positive extent");
    if (width == 0 || height == 0 || width > kMaxRasterSide || height > kMaxRasterSide)
      throw std::invalid_argument("raster side must be in [1, 2^14]");
  }

  [[nodiscard]] const Window& window() const noexcept { return window_; }
  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::span<const T> cells() const noexcept { return cells_; }
  [[nodiscard]] T& at(std::size_t col, std::size_t row) { return cells_[row * width_ + col]; }
  [[nodiscard]] const T& at(std::size_t col, std::size_t row) const { return cells_[row * width_ + col]; }

  /// (col, row) of the pixel holding z, or nullopt outside the window.
  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> pixel_of(std::complex<double> z) const noexcept {
    const auto col = axis_index(z.real() - 0.5 * (window_.xmin + window_.xmax), 0.5 * (window_.xmax - window_.xmin),
                                width_, false);
    const auto row = axis_index(z.imag() - 0.5 * (window_.ymin + window_.ymax), 0.5 * (window_.ymax - window_.ymin),
                                height_, true);
    if (!col || !row) return std::nullopt;
    return std::pair{*col, *row};
  }

  /// Adds `weight` to the pixel under z; returns false if z is outside the window.
  bool add(std::complex<double> z, T weight = T{1}) {
    const auto px = pixel_of(z);
    if (!px) return false;
    at(px->first, px->second) += weight;
    return true;
  }

  RasterGrid& operator+=(const RasterGrid& other) {
    if (other.width_ != width_ || other.height_ != height_) throw std::invalid_argument("raster shapes differ");
    for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] += other.cells_[k];
    return *this;
  }

  /// Mirror image across the horizontal center line (the conjugation of the window).
  [[nodiscard]] RasterGrid flipped_vertically() const {
    RasterGrid out(window_, width_, height_);
    for (std::size_t r = 0; r < height_; ++r)
      for (std::size_t c = 0; c < width_; ++c) out.at(c, height_ - 1 - r) = at(c, r);
    return out;
  }

  [[nodiscard]] T max_value() const {
    T m{};
    for (const auto& v : cells_) m = std::max(m, v);
    return m;
  }

  [[nodiscard]] double total() const {
    double s = 0.0;
    for (const auto& v : cells_) s += static_cast<double>(v);
    return s;
  }

  friend bool operator==(const RasterGrid& a, const RasterGrid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
  }

  /// Binary PGM (P5), 16-bit big-endian samples scaled to [0, 65535].
  [[nodiscard]] std::string to_pgm(PgmScaling scaling = PgmScaling::Log) const {
    std::string out = "P5\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n65535\n";
    out.reserve(out.size() + 2 * cells_.size());
    const double top = static_cast<double>(max_value());
    const double denom = scaling == PgmScaling::Log ? std::log1p(top) : top;
    for (const auto& v : cells_) {
      const double x = static_cast<double>(v);
      double level = 0.0;
      if (denom > 0.0) level = (scaling == PgmScaling::Log ? std::log1p(std::max(x, 0.0)) : x) / denom;
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(level, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(q >> 8));
      out.push_back(static_cast<char>(q & 0xff));
    }
    return out;
  }

 private:
  /// Index along one axis from the signed offset to the window center.
  static std::optional<std::size_t> axis_index(double offset, double half, std::size_t n, bool flip) {
    const double u = std::abs(offset) / half * (0.5 * static_cast<double>(n));
    if (!(u < 0.5 * static_cast<double>(n))) return std::nullopt;
    const bool positive = offset >= 0.0;
    std::size_t idx;
    if (n % 2 == 0) {
      const auto k = static_cast<std::size_t>(std::floor(u));
      idx = positive ? n / 2 + k : n / 2 - 1 - k;
    } else {
      const auto k = static_cast<std::size_t>(std::floor(u + 0.5));
      const std::size_t c = (n - 1) / 2;
      if (k > c) return std::nullopt;
      idx = positive ? c + k : c - k;
    }
    return flip ? n - 1 - idx : idx;
  }

  Window window_{};
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> cells_;
};

/// Per-pixel hit counts of a point list.
inline RasterGrid<std::uint64_t> raster_accumulate(std::span<const std::complex<double>> points, const Window& window,
                                                   std::size_t width, std::size_t height) {
  RasterGrid<std::uint64_t> grid(window, width, height);
  for (const auto& z : points) grid.add(z);
  return grid;
}

}  // namespace raf
