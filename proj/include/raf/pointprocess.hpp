#pragma once

// Linear statistics of zero sets seen through the frame map Phi_kappa^u,
// Monte Carlo experiments over seeded coefficient draws, and two-sample
// Kolmogorov-Smirnov comparison.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "raf/error.hpp"
#include "raf/kernel.hpp"
#include "raf/parallel.hpp"
#include "raf/raster.hpp"
#include "raf/rng.hpp"
#include "raf/sampler.hpp"
#include "raf/zerofinder.hpp"

namespace raf {

enum class TestFunctionKind { Bump, SmoothedIndicator };

/// Continuous radial test function supported in |w| < support_radius.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Bump;
  double support_radius = 0.5;
  double amplitude = 1.0;

  static TestFunction bump(double r, double amplitude = 1.0) { return {TestFunctionKind::Bump, r, amplitude}; }

  [[nodiscard]] double operator()(cplx w) const noexcept {
    const double s = std::abs(w) / support_radius;
    if (s >= 1.0) return 0.0;
    if (kind == TestFunctionKind::Bump) return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
    // 1 on |w| <= r/2, cosine taper to 0 at r.
    if (s <= 0.5) return amplitude;
    return amplitude * 0.5 * (1.0 + std::cos(std::numbers::pi * (2.0 * s - 1.0)));
  }

  [[nodiscard]] std::string name() const { return kind == TestFunctionKind::Bump ? "bump" : "smoothed-indicator"; }
};

struct Disk {
  cplx center;
  double radius;
};

/// Phi_kappa^{-u}({|w| <= r}), itself a Euclidean disk.
inline Disk preimage_disk(const DiskPoint& u, double r) {
  const Curvature kappa = u.kappa();
  if (!(r > 0.0) || !(r < kappa.radius())) throw DomainError("test function support must lie inside the disk");
  if (u.z() == cplx{} || kappa.is_flat()) return {u.z(), r};
  // The circle |w| = r is symmetric about the line through 0 and u, so the images of
  // its two points on that line are the ends of a diameter of the image circle.
  const cplx dir = u.z() / std::abs(u.z());
  const cplx a = mobius_inverse(r * dir, u);
  const cplx b = mobius_inverse(-r * dir, u);
  return {0.5 * (a + b), 0.5 * std::abs(a - b)};
}

/// Zero search disk: the pre-image of supp phi with its radius padded by 2%.
inline Disk search_disk(const DiskPoint& u, const TestFunction& phi, double padding = 0.02) {
  Disk d = preimage_disk(u, phi.support_radius);
  d.radius *= 1.0 + padding;
  return d;
}

/// N_phi = sum over zeros xi (with multiplicity) of phi(Phi_kappa^u(xi)).
inline double linear_statistic(const ZeroSet& zs, const DiskPoint& u, const TestFunction& phi) {
  if (!zs.zeros.empty() || zs.certify_count != 0 || zs.radius > 0.0) {
    const Disk need = preimage_disk(u, phi.support_radius);
    if (std::abs(need.center - zs.center) + need.radius > zs.radius * (1.0 + 1e-12))
      throw CoverageError("zero search disk does not contain the pre-image of the test function support");
  }
  double acc = 0.0;
  for (const auto& z : zs.zeros) acc += z.multiplicity * phi(mobius(z.location, u));
  return acc;
}

struct ExperimentConfig {
  Ensemble ensemble = Ensemble::complex_gaussian();
  Curvature kappa{-1.0};
  cplx u{0.0, 0.0};
  TestFunction phi{};
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;
  /// Standard deviation allowed for the discarded series tail on the search disk.
  double truncation_eps = 1e-6;
  unsigned workers = 1;
  /// Keep Phi^u-mapped zero locations per sample (needed for intensity rasters).
  bool retain_zeros = false;
  int max_attempts = 4;
};

struct SampleMetadata {
  std::string ensemble;
  double kappa = 0.0;
  cplx u{};
  std::string phi_kind;
  double phi_radius = 0.0;
  double phi_amplitude = 0.0;
  std::size_t degree = 0;
  double r_max = 0.0;
  Disk search{};
  std::uint64_t master_seed = 0;
  std::size_t n_samples = 0;
  std::size_t rejections = 0;
};

struct EmpiricalSample {
  std::vector<double> values;
  SampleMetadata meta;
  /// Mapped zeros Phi^u(xi) per sample, repeated by multiplicity (only with retain_zeros).
  std::vector<std::vector<cplx>> mapped_zeros;

  [[nodiscard]] double rejection_rate() const noexcept {
    const double attempts = static_cast<double>(meta.n_samples + meta.rejections);
    return attempts > 0 ? static_cast<double>(meta.rejections) / attempts : 0.0;
  }
};

/// Per sample: draw a truncated RAF, localize its zeros on the padded pre-image
/// disk, evaluate the linear statistic. Sample i uses seeds derived from
/// (master_seed, i) only, so the output does not depend on the worker count.
/// A draw whose zeros cannot be certified is rejected and redrawn from the next
/// derived seed; rejections are counted in the metadata.
inline EmpiricalSample run_experiment(const ExperimentConfig& cfg) {
  const DiskPoint u(cfg.u, cfg.kappa);
  const Disk disk = search_disk(u, cfg.phi);
  const double r_max = std::abs(disk.center) + disk.radius;
  if (!(r_max < cfg.kappa.radius())) throw DomainError("search disk leaves the domain of convergence");
  const std::size_t degree = truncation_degree(cfg.kappa, r_max, cfg.truncation_eps);

  EmpiricalSample out;
  out.meta = {cfg.ensemble.name(), cfg.kappa.value(), cfg.u, cfg.phi.name(), cfg.phi.support_radius,
              cfg.phi.amplitude, degree, r_max, disk, cfg.master_seed, cfg.n_samples, 0};
  out.values.assign(cfg.n_samples, 0.0);
  if (cfg.retain_zeros) out.mapped_zeros.assign(cfg.n_samples, {});
  std::vector<std::size_t> rejected(cfg.n_samples, 0);

  parallel_for(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    const std::uint64_t base = derive_seed(cfg.master_seed, i);
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
      const std::uint64_t seed = attempt == 0 ? base : derive_seed(base, static_cast<std::uint64_t>(attempt));
      const TruncatedSeries series = sample_raf(cfg.ensemble, cfg.kappa, degree, seed);
      ZeroSet zs;
      try {
        zs = localize_zeros(series.poly, disk.center, disk.radius);
      } catch (const BoundaryZero&) {
        ++rejected[i];
        continue;
      } catch (const NonConvergence&) {
        ++rejected[i];
        continue;
      }
      if (!zs.resolved()) {
        ++rejected[i];
        continue;
      }
      out.values[i] = linear_statistic(zs, u, cfg.phi);
      if (cfg.retain_zeros) {
        auto& mz = out.mapped_zeros[i];
        for (const auto& z : zs.flatten()) mz.push_back(mobius(z, u));
      }
      return;
    }
    throw NonConvergence("sample " + std::to_string(i) + " failed certification on every attempt");
  });
  for (const auto r : rejected) out.meta.rejections += r;
  return out;
}

/// sup_x |F_a(x) - F_b(x)| for the empirical CDFs, by a sorted-merge sweep.
inline double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

inline double ks_distance(const EmpiricalSample& a, const EmpiricalSample& b) { return ks_distance(a.values, b.values); }

/// Asymptotic two-sample KS critical value c(alpha) sqrt((n + m) / (n m)).
inline double ks_threshold(std::size_t n, std::size_t m, double alpha = 0.05) {
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return c * std::sqrt((nd + md) / (nd * md));
}

/// Mean number of mapped zeros per pixel across the samples.
inline RasterGrid<double> intensity_raster(const EmpiricalSample& sample, const Window& window, std::size_t width,
                                           std::size_t height) {
  RasterGrid<double> grid(window, width, height);
  if (sample.mapped_zeros.empty()) return grid;
  const double w = 1.0 / static_cast<double>(sample.mapped_zeros.size());
  for (const auto& zs : sample.mapped_zeros)
    for (const auto& z : zs) grid.add(z, w);
  return grid;
}

namespace io {

inline nlohmann::ordered_json metadata_json(const SampleMetadata& m) {
  return {{"ensemble", m.ensemble},
          {"kappa", m.kappa},
          {"u", {m.u.real(), m.u.imag()}},
          {"phi", {{"kind", m.phi_kind}, {"support_radius", m.phi_radius}, {"amplitude", m.phi_amplitude}}},
          {"degree", m.degree},
          {"r_max", m.r_max},
          {"search_disk", {{"center", {m.search.center.real(), m.search.center.imag()}}, {"radius", m.search.radius}}},
          {"master_seed", m.master_seed},
          {"n_samples", m.n_samples},
          {"rejections", m.rejections}};
}

/// One value per line, metadata as leading '#' comments.
inline std::string sample_csv(const EmpiricalSample& s) {
  std::ostringstream os;
  os.precision(17);
  const auto meta = metadata_json(s.meta);
  for (auto it = meta.begin(); it != meta.end(); ++it) os << "# " << it.key() << ": " << it.value().dump() << "\n";
  os << "value\n";
  for (const double v : s.values) os << v << "\n";
  return os.str();
}

inline nlohmann::ordered_json sample_json(const EmpiricalSample& s) {
  return {{"metadata", metadata_json(s.meta)}, {"values", s.values}};
}

}  // namespace io

}  // namespace raf
