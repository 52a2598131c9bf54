#pragma once

// Value sets C_n(z) (alphabet +-1) and B_n(z) (alphabet +-1 +-i) of the
// recurrence S_n = U_{a in A} {a + z w : w in S_{n-1}}, S_0 = A, together with
// box-counting dimension estimates and distances to reference rectangles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "raf/error.hpp"
#include "raf/kernel.hpp"
#include "raf/littlewood.hpp"
#include "raf/parallel.hpp"

namespace raf {

struct ValueSet {
  cplx z;
  Alphabet alphabet = Alphabet::PlusMinusOne;
  std::size_t n = 0;
  /// |A|^(n+1) points; index digit k (base |A|, little-endian) selects the coefficient of z^k.
  std::vector<cplx> points;
  /// max|a| * sum_{k>n} |z|^k: every point of the limit set is this close to some point.
  double tail_radius = 0.0;
};

inline double value_set_tail_radius(cplx z, Alphabet alphabet, std::size_t n) {
  const double r = std::abs(z);
  if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
  double amax = 0.0;
  for (const auto& a : alphabet_atoms(alphabet)) amax = std::max(amax, std::abs(a));
  return amax * std::pow(r, static_cast<double>(n + 1)) / (1.0 - r);
}

/// All |A|^(n+1) points of the depth-n value set. Each point is produced by the
/// recurrence w <- a + z w applied from the deepest letter outward.
inline ValueSet iterate_value_set(cplx z, Alphabet alphabet, std::size_t n, unsigned workers = 1,
                                  std::uint64_t budget = 10'000'000) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("value set parameter must be finite");
  const auto atoms = alphabet_atoms(alphabet);
  const std::uint64_t count = sequence_count(n, alphabet);
  if (count > budget)
    throw BudgetExceeded("value set of depth " + std::to_string(n) + " has more than " + std::to_string(budget) +
                         " points");
  ValueSet vs{z, alphabet, n, std::vector<cplx>(count), value_set_tail_radius(z, alphabet, n)};
  const std::uint64_t base = atoms.size();
  std::uint64_t top = 1;
  for (std::size_t k = 0; k < n; ++k) top *= base;
  parallel_for(count, workers, [&](std::size_t idx) {
    std::uint64_t div = top;
    cplx w = atoms[(idx / div) % base];
    for (std::size_t k = n; k-- > 0;) {
      div /= base;
      w = atoms[(idx / div) % base] + z * w;
    }
    vs.points[idx] = w;
  });
  return vs;
}

struct BoxDimension {
  double estimate = 0.0;
  double r_squared = 0.0;
  /// Fewer than 3 scales or r^2 < 0.9.
  bool degenerate = false;
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
};

namespace detail {

/// Number of occupied half-open boxes of side delta anchored at origin.
inline std::uint64_t box_count(std::span<const cplx> points, cplx origin, double delta) {
  std::vector<std::uint64_t> keys(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto ix = static_cast<std::uint64_t>(std::floor((points[k].real() - origin.real()) / delta));
    const auto iy = static_cast<std::uint64_t>(std::floor((points[k].imag() - origin.imag()) / delta));
    keys[k] = (ix << 32) | (iy & 0xffffffffULL);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

struct Bounds {
  double xmin, xmax, ymin, ymax;
  [[nodiscard]] double diameter() const { return std::hypot(xmax - xmin, ymax - ymin); }
};

inline Bounds bounds_of(std::span<const cplx> points) {
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& z : points) {
    b.xmin = std::min(b.xmin, z.real());
    b.xmax = std::max(b.xmax, z.real());
    b.ymin = std::min(b.ymin, z.imag());
    b.ymax = std::max(b.ymax, z.imag());
  }
  return b;
}

inline BoxDimension fit_box_counts(std::span<const cplx> points, std::vector<double> scales, unsigned workers) {
  BoxDimension out;
  out.scales = std::move(scales);
  out.counts.assign(out.scales.size(), 0);
  const Bounds b = bounds_of(points);
  const cplx origin{b.xmin, b.ymin};
  for (const double d : out.scales)
    if ((std::max(b.xmax - b.xmin, b.ymax - b.ymin) / d) >= 4294967295.0)
      throw DomainError("box scale too small for the point cloud extent");
  parallel_for(out.scales.size(), workers,
               [&](std::size_t k) { out.counts[k] = box_count(points, origin, out.scales[k]); });

  const auto m = static_cast<double>(out.scales.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < out.scales.size(); ++k) {
    const double x = std::log(1.0 / out.scales[k]);
    const double y = std::log(static_cast<double>(out.counts[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  out.estimate = vx > 0 ? cxy / vx : 0.0;
  out.r_squared = (vx > 0 && vy > 0) ? cxy * cxy / (vx * vy) : (vy == 0 && vx > 0 ? 1.0 : 0.0);
  out.degenerate = out.scales.size() < 3 || out.r_squared < 0.9;
  return out;
}

}  // namespace detail

/// Least-squares slope of log N(delta) against log(1/delta) at num_scales
/// geometrically spaced scales in [delta_min, delta_max].
inline BoxDimension box_dimension(std::span<const cplx> points, double delta_min, double delta_max,
                                  std::size_t num_scales, unsigned workers = 1) {
  if (points.empty()) throw DomainError("box_dimension needs a non-empty point cloud");
  if (!(delta_min > 0.0) || !(delta_max >= delta_min) || num_scales == 0)
    throw DomainError("box_dimension needs 0 < delta_min <= delta_max and at least one scale");
  std::vector<double> scales(num_scales);
  for (std::size_t k = 0; k < num_scales; ++k) {
    const double t = num_scales == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(num_scales - 1);
    scales[k] = delta_max * std::pow(delta_min / delta_max, t);
  }
  return detail::fit_box_counts(points, std::move(scales), workers);
}

/// Automatic range: delta_max = diameter / 4 halved down to no less than
/// 4 * tail_radius (and no less than diameter / 2^30, the box index range).
inline BoxDimension box_dimension(const ValueSet& vs, unsigned workers = 1) {
  if (!std::isfinite(vs.tail_radius)) throw DomainError("automatic box range needs |z| < 1");
  const double diameter = detail::bounds_of(vs.points).diameter();
  const double delta_min = std::max(4.0 * vs.tail_radius, std::ldexp(diameter, -30));
  const double delta_max = diameter / 4.0;
  std::vector<double> scales;
  for (double d = delta_max; d >= delta_min && scales.size() < 64; d *= 0.5) scales.push_back(d);
  if (scales.empty()) scales.push_back(delta_max);
  return detail::fit_box_counts(vs.points, std::move(scales), workers);
}

/// Upper bound on the dimension of the limit set: log 2 / log(1/|z|) for the
/// +-1 alphabet, twice that for the quaternary one, capped at 2.
inline double dimension_bound(cplx z, Alphabet alphabet) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw DomainError("dimension bound needs |z| < 1");
  if (r == 0.0) return 0.0;
  const double factor = alphabet == Alphabet::Quaternary ? 2.0 : 1.0;
  return std::min(2.0, factor * std::numbers::ln2 / std::log(1.0 / r));
}

/// The conjectured exact dimension; reported only, never enforced.
inline double conjectured_dimension(cplx z, Alphabet alphabet) {
  const double b = dimension_bound(z, alphabet);
  if (alphabet == Alphabet::PlusMinusOne && z.imag() == 0.0) return std::min(1.0, b);
  return b;
}

inline bool bound_check(cplx z, Alphabet alphabet, double estimate, double slack = 0.1) {
  return estimate <= dimension_bound(z, alphabet) + slack;
}

struct Rect {
  double xmin, xmax, ymin, ymax;
};

/// Bucketed nearest-neighbour lookup over a fixed point set.
class PointIndex {
 public:
  PointIndex(std::span<const cplx> points, detail::Bounds extent) : extent_(extent) {
    const double w = std::max(extent.xmax - extent.xmin, 1e-300);
    const double h = std::max(extent.ymax - extent.ymin, 1e-300);
    const double target = std::max(4.0, static_cast<double>(points.size()) / 2.0);
    cell_ = std::max(std::sqrt(w * h / target), std::max(w, h) / 4096.0);
    nx_ = static_cast<std::size_t>(w / cell_) + 1;
    ny_ = static_cast<std::size_t>(h / cell_) + 1;
    std::vector<std::uint32_t> counts(nx_ * ny_ + 1, 0);
    for (const auto& z : points) ++counts[slot(z) + 1];
    for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
    offsets_ = counts;
    pts_.resize(points.size());
    for (const auto& z : points) pts_[counts[slot(z)]++] = z;
  }

  [[nodiscard]] double nearest_distance(cplx q) const {
    const auto [cx, cy] = cell_of(q);
    double best = std::numeric_limits<double>::infinity();
    const auto reach = static_cast<std::ptrdiff_t>(std::max(nx_, ny_));
    for (std::ptrdiff_t k = 0; k <= reach; ++k) {
      if (k > 0 && static_cast<double>(k - 1) * cell_ > best) break;
      for (std::ptrdiff_t dx = -k; dx <= k; ++dx) {
        for (std::ptrdiff_t dy = -k; dy <= k; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != k) continue;
          const std::ptrdiff_t x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(nx_) || y >= static_cast<std::ptrdiff_t>(ny_)) continue;
          const std::size_t s = static_cast<std::size_t>(y) * nx_ + static_cast<std::size_t>(x);
          for (std::uint32_t i = offsets_[s]; i < offsets_[s + 1]; ++i) best = std::min(best, std::abs(pts_[i] - q));
        }
      }
    }
    return best;
  }

 private:
  [[nodiscard]] std::pair<std::ptrdiff_t, std::ptrdiff_t> cell_of(cplx z) const {
    auto clampi = [](double v, std::size_t n) {
      return static_cast<std::ptrdiff_t>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
    };
    return {clampi((z.real() - extent_.xmin) / cell_, nx_), clampi((z.imag() - extent_.ymin) / cell_, ny_)};
  }
  [[nodiscard]] std::size_t slot(cplx z) const {
    const auto [x, y] = cell_of(z);
    return static_cast<std::size_t>(y) * nx_ + static_cast<std::size_t>(x);
  }

  detail::Bounds extent_;
  double cell_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::uint32_t> offsets_;
  std::vector<cplx> pts_;
};

/// Symmetric Hausdorff distance between a point set and a filled rectangle. The
/// rectangle side is sampled on a grid of the given spacing (endpoints included).
inline double hausdorff_distance_to_rect(std::span<const cplx> points, const Rect& rect, double spacing,
                                         unsigned workers = 1) {
  if (points.empty()) throw DomainError("hausdorff_distance_to_rect needs a non-empty point set");
  if (!(rect.xmax >= rect.xmin) || !(rect.ymax >= rect.ymin)) throw DomainError("invalid rectangle");
  if (!(spacing > 0.0)) throw DomainError("grid spacing must be positive");

  double outward = 0.0;
  for (const auto& z : points) {
    const double dx = std::max({rect.xmin - z.real(), 0.0, z.real() - rect.xmax});
    const double dy = std::max({rect.ymin - z.imag(), 0.0, z.imag() - rect.ymax});
    outward = std::max(outward, std::hypot(dx, dy));
  }

  detail::Bounds ext = detail::bounds_of(points);
  ext = {std::min(ext.xmin, rect.xmin), std::max(ext.xmax, rect.xmax), std::min(ext.ymin, rect.ymin),
         std::max(ext.ymax, rect.ymax)};
  const PointIndex index(points, ext);
  const auto nx = static_cast<std::size_t>(std::ceil((rect.xmax - rect.xmin) / spacing)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil((rect.ymax - rect.ymin) / spacing)) + 1;
  auto coord = [](double lo, double hi, std::size_t k, std::size_t n) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  std::vector<double> row_max(ny, 0.0);
  parallel_for(ny, workers, [&](std::size_t j) {
    const double y = coord(rect.ymin, rect.ymax, j, ny);
    double m = 0.0;
    for (std::size_t i = 0; i < nx; ++i) m = std::max(m, index.nearest_distance({coord(rect.xmin, rect.xmax, i, nx), y}));
    row_max[j] = m;
  });
  return std::max(outward, *std::max_element(row_max.begin(), row_max.end()));
}

/// Grid spacing of a quarter of the value set's tail radius.
inline double hausdorff_distance_to_rect(const ValueSet& vs, const Rect& rect, unsigned workers = 1) {
  return hausdorff_distance_to_rect(vs.points, rect, vs.tail_radius / 4.0, workers);
}

namespace io {

inline nlohmann::ordered_json dimension_report(const ValueSet& vs, const BoxDimension& bd) {
  return {{"z", {vs.z.real(), vs.z.imag()}},
          {"alphabet", alphabet_name(vs.alphabet)},
          {"depth", vs.n},
          {"points", vs.points.size()},
          {"tail_radius", vs.tail_radius},
          {"scales", bd.scales},
          {"counts", bd.counts},
          {"estimate", bd.estimate},
          {"r_squared", bd.r_squared},
          {"degenerate_fit", bd.degenerate},
          {"bound", dimension_bound(vs.z, vs.alphabet)},
          {"within_bound", bound_check(vs.z, vs.alphabet, bd.estimate)},
          {"conjectured", conjectured_dimension(vs.z, vs.alphabet)}};
}

}  // namespace io

}  // namespace raf
