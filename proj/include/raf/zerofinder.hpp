#pragma once

// Zero counting and localization for polynomials and truncated series:
// argument-principle winding counts on circles and rectangles, recursive
// subdivision with Newton polishing, and Aberth-Ehrlich simultaneous iteration.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "raf/error.hpp"
#include "raf/polynomial.hpp"

namespace raf {

using cplx = std::complex<double>;

struct Zero {
  cplx location;
  int multiplicity = 1;
};

/// A region that still holds `count` zeros when subdivision hit its depth limit.
struct ZeroCluster {
  cplx center;
  double radius;
  int count;
};

struct ZeroSet {
  std::vector<Zero> zeros;
  std::vector<ZeroCluster> clusters;
  cplx center{};
  double radius = 0.0;
  double residual_tol = 0.0;
  /// Winding count of f around the boundary circle.
  int certify_count = 0;
  /// Subdivision diagnostics: accepted splits, and splits whose child counts did not add up.
  std::size_t subdivisions = 0;
  std::size_t conservation_failures = 0;

  [[nodiscard]] int total_multiplicity() const noexcept {
    int m = 0;
    for (const auto& z : zeros) m += z.multiplicity;
    return m;
  }
  [[nodiscard]] bool resolved() const noexcept { return clusters.empty(); }

  /// Locations repeated by multiplicity.
  [[nodiscard]] std::vector<cplx> flatten() const {
    std::vector<cplx> out;
    for (const auto& z : zeros)
      for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.location);
    return out;
  }

  [[nodiscard]] int count_inside(cplx c, double r) const noexcept {
    int m = 0;
    for (const auto& z : zeros)
      if (std::abs(z.location - c) < r) m += z.multiplicity;
    return m;
  }
};

struct WindingOptions {
  std::size_t min_samples = 64;
  /// Finest allowed segment as a fraction of the contour (2^-20).
  double min_fraction = 1.0 / 1048576.0;
  /// Largest accepted argument increment between consecutive samples.
  double max_increment = std::numbers::pi / 2.0;
  /// |f| at or below this on the contour is treated as a zero on the contour.
  double floor = 0.0;
};

namespace detail {

inline bool lex_less(cplx a, cplx b) noexcept {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

/// Winding number of t -> f(path(t)), t in [0, 1). Segments whose argument
/// increment reaches max_increment are bisected until it does not. When f
/// also provides value_and_derivative, a segment must in addition be shorter
/// than half of |f/f'| at both ends, which keeps a nearby zero from turning
/// the argument a full revolution between two samples unnoticed.
template <class F, class Path>
int contour_winding(const F& f, const Path& path, const WindingOptions& opt) {
  constexpr bool kHasDerivative = requires(const F& g, cplx z) { g.value_and_derivative(z); };
  struct Node {
    double t;
    cplx z;
    cplx v;
    double reach;
  };
  auto sample = [&](double t) {
    const cplx z = path(t);
    cplx v;
    double reach = std::numeric_limits<double>::infinity();
    if constexpr (kHasDerivative) {
      const auto [fv, dfv] = f.value_and_derivative(z);
      v = fv;
      if (dfv != cplx{}) reach = std::abs(fv) / std::abs(dfv);
    } else {
      v = f(z);
    }
    if (!(std::abs(v) > opt.floor) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw BoundaryZero("|f| on the contour fell below the noise floor");
    return Node{t, z, v, reach};
  };

  const std::size_t n0 = std::max<std::size_t>(opt.min_samples, 4);
  const double h0 = 1.0 / static_cast<double>(n0);
  const Node first = sample(0.0);
  double total = 0.0;
  std::vector<Node> stack;
  Node left = first;
  for (std::size_t k = 0; k < n0; ++k) {
    const double t1 = static_cast<double>(k + 1) * h0;
    Node right_end = (k + 1 == n0) ? first : sample(t1);
    right_end.t = t1;
    // Right endpoints still to reach, nearest on top.
    stack.clear();
    stack.push_back(right_end);
    while (!stack.empty()) {
      const Node right = stack.back();
      const double inc = std::arg(right.v * std::conj(left.v));
      const bool short_enough = std::abs(right.z - left.z) <= 0.5 * std::min(left.reach, right.reach);
      if (std::abs(inc) < opt.max_increment && short_enough) {
        total += inc;
        left = right;
        stack.pop_back();
        continue;
      }
      const double width = right.t - left.t;
      if (width <= opt.min_fraction) throw BoundaryZero("argument refinement reached the sampling cap");
      stack.push_back(sample(left.t + 0.5 * width));
    }
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) throw BoundaryZero("winding sum is not an integer");
  return static_cast<int>(rounded);
}

/// Axis-aligned rectangle boundary, counter-clockwise.
struct RectPath {
  double x0, y0, w, h;
  cplx operator()(double t) const noexcept {
    double s = t * 2.0 * (w + h);
    if (s < w) return {x0 + s, y0};
    s -= w;
    if (s < h) return {x0 + w, y0 + s};
    s -= h;
    if (s < w) return {x0 + w - s, y0 + h};
    s -= w;
    return {x0, y0 + h - s};
  }
};

/// Polar cell around `origin`: the full disk r < r1 when `full`, otherwise the
/// annular sector r0 <= r <= r1, t0 <= theta <= t1 (r0 > 0).
struct PolarCell {
  cplx origin;
  double r0, r1, t0, t1;
  bool full;

  [[nodiscard]] cplx center() const noexcept {
    return full ? origin : origin + std::polar(0.5 * (r0 + r1), 0.5 * (t0 + t1));
  }
  [[nodiscard]] double size() const noexcept { return full ? 2.0 * r1 : std::max(r1 - r0, r1 * (t1 - t0)); }
  [[nodiscard]] bool contains(cplx z, double slack = 0.0) const noexcept {
    const cplx d = z - origin;
    const double r = std::abs(d);
    if (full) return r <= r1 + slack;
    if (r < r0 - slack || r > r1 + slack) return false;
    // Angle measured from the start of the sector, folded into [0, 2 pi).
    double a = std::arg(d) - t0;
    a -= 2.0 * std::numbers::pi * std::floor(a / (2.0 * std::numbers::pi));
    const double ang_slack = r > 0.0 ? slack / r : 2.0 * std::numbers::pi;
    return a <= (t1 - t0) + ang_slack || a >= 2.0 * std::numbers::pi - ang_slack;
  }
};

/// Counter-clockwise boundary of a PolarCell, parametrized by arc length.
struct PolarPath {
  PolarCell c;
  cplx operator()(double t) const noexcept {
    if (c.full) return c.origin + std::polar(c.r1, 2.0 * std::numbers::pi * t + c.t0);
    const double dr = c.r1 - c.r0;
    const double dt = c.t1 - c.t0;
    const double outer = c.r1 * dt;
    const double inner = c.r0 * dt;
    double s = t * (2.0 * dr + outer + inner);
    if (s < dr) return c.origin + std::polar(c.r0 + s, c.t0);
    s -= dr;
    if (s < outer) return c.origin + std::polar(c.r1, c.t0 + s / c.r1);
    s -= outer;
    if (s < dr) return c.origin + std::polar(c.r1 - s, c.t1);
    s -= dr;
    return c.origin + std::polar(c.r0, c.t1 - s / c.r0);
  }
};

struct CirclePath {
  cplx center;
  double radius;
  cplx operator()(double t) const noexcept { return center + std::polar(radius, 2.0 * std::numbers::pi * t); }
};

/// Horner rounding bound for |z| <= r: 2 (n+1) eps sum |c_k| r^k.
inline double horner_floor(const Polynomial& p, double r) {
  return 2.0 * static_cast<double>(p.size() + 1) * DBL_EPSILON * p.magnitude(r);
}

}  // namespace detail

/// Number of zeros of f inside |z - center| = radius, with multiplicity.
/// Throws BoundaryZero when f (numerically) vanishes on the circle.
template <class F>
int winding_count(const F& f, cplx center, double radius, WindingOptions opt = {}) {
  return detail::contour_winding(f, detail::CirclePath{center, radius}, opt);
}

/// Polynomial overload: the noise floor is the Horner rounding bound on the circle.
inline int winding_count(const Polynomial& p, cplx center, double radius, std::size_t min_samples = 64) {
  WindingOptions opt;
  opt.min_samples = min_samples;
  opt.floor = detail::horner_floor(p, std::abs(center) + radius);
  return detail::contour_winding(p, detail::CirclePath{center, radius}, opt);
}

/// Zeros of p inside the rectangle [x0, x0 + w] x [y0, y0 + h].
inline int winding_count_rect(const Polynomial& p, double x0, double y0, double w, double h,
                              std::size_t min_samples = 64) {
  WindingOptions opt;
  opt.min_samples = min_samples;
  opt.floor = detail::horner_floor(p, std::abs(cplx{x0, y0}) + w + h);
  return detail::contour_winding(p, detail::RectPath{x0, y0, w, h}, opt);
}

struct LocalizeOptions {
  /// Cells smaller than this fraction of the disk radius stop subdividing.
  double min_cell = 1e-10;
  int max_depth = 48;
  /// Certification circle radius as a fraction of the disk radius.
  double certify_radius = 1e-7;
  /// Accepted |f(zero)| relative to sum |c_k| |zero|^k.
  double residual_tol = 1e-9;
  int newton_iterations = 60;
  std::size_t min_samples = 64;
};

namespace detail {

/// Deterministic relative perturbations tried when a contour runs into a zero.
inline constexpr std::array<double, 9> kJitter = {0.0, 1e-3, -1e-3, 3e-3, -3e-3, 1e-2, -1e-2, 3e-2, -3e-2};

class Localizer {
 public:
  Localizer(const Polynomial& p, cplx origin, double radius, const LocalizeOptions& opt)
      : p_(p), origin_(origin), radius_(radius), opt_(opt) {}

  [[nodiscard]] int cell_count(const PolarCell& c) const {
    return contour_winding(p_, PolarPath{c}, winding_options(std::abs(c.origin) + c.r1));
  }

  [[nodiscard]] std::optional<int> circle_count(cplx c, double r) const {
    try {
      return contour_winding(p_, CirclePath{c, r}, winding_options(std::abs(c) + r));
    } catch (const BoundaryZero&) {
      return std::nullopt;
    }
  }

  /// z <- z - m f/f' from `start`; nullopt when it leaves the leash or stalls.
  [[nodiscard]] std::optional<cplx> newton(cplx start, int m, double leash) const {
    cplx z = start;
    const double tiny = 4.0 * DBL_EPSILON * (std::abs(origin_) + radius_);
    for (int it = 0; it < opt_.newton_iterations; ++it) {
      const auto [f, df] = p_.value_and_derivative(z);
      if (f == cplx{}) return z;
      if (df == cplx{}) return std::nullopt;
      const cplx step = static_cast<double>(m) * f / df;
      z -= step;
      if (std::abs(z - start) > leash) return std::nullopt;
      if (std::abs(step) <= tiny) return z;
    }
    if (residual_ok(z)) return z;
    return std::nullopt;
  }

  [[nodiscard]] bool residual_ok(cplx z) const {
    return std::abs(p_(z)) <= opt_.residual_tol * p_.magnitude(std::abs(z));
  }

  void process(const PolarCell& cell, int count, int depth) {
    if (count == 0) return;
    const double eps_cert = opt_.certify_radius * radius_;
    const double size = cell.size();

    if (count == 1) {
      if (auto z = newton(cell.center(), 1, 2.0 * size)) {
        if (cell.contains(*z) && residual_ok(*z) && circle_count(*z, std::min(eps_cert, 0.25 * size)) == 1) {
          zeros_.push_back({*z, 1});
          return;
        }
      }
    }

    if (count > 1) {
      // A multiple zero stalls bisection: the contours near it sit in rounding noise.
      if (auto z = newton(cell.center(), count, 2.0 * size); z && cell.contains(*z) && residual_ok(*z)) {
        for (double r = eps_cert; r <= 0.1 * size; r *= 10.0) {
          if (circle_count(*z, r) == count) {
            zeros_.push_back({*z, count});
            return;
          }
        }
      }
    }

    if (size < opt_.min_cell * radius_ || depth >= opt_.max_depth) {
      // A multiple zero, or a cluster we cannot split: one point carrying the whole count.
      const double cert = std::max(eps_cert, size);
      if (auto z = newton(cell.center(), count, 2.0 * size)) {
        if (cell.contains(*z, size) && circle_count(*z, cert) == count) {
          zeros_.push_back({*z, count});
          return;
        }
      }
      clusters_.push_back({cell.center(), 0.5 * size, count});
      return;
    }

    for (const double j : kJitter) {
      const auto kids = split(cell, j);
      std::vector<int> counts(kids.size());
      int sum = 0;
      bool ok = true;
      for (std::size_t k = 0; k < kids.size() && ok; ++k) {
        try {
          counts[k] = cell_count(kids[k]);
          sum += counts[k];
        } catch (const BoundaryZero&) {
          ok = false;
        }
      }
      if (!ok) continue;
      // The children partition the parent, so their counts must add up.
      if (sum != count) {
        ++conservation_failures_;
        continue;
      }
      ++subdivisions_;
      for (std::size_t k = 0; k < kids.size(); ++k) process(kids[k], counts[k], depth + 1);
      return;
    }
    clusters_.push_back({cell.center(), 0.5 * size, count});
  }

  /// A full disk splits into an inner disk plus four annular sectors; a sector splits 2 x 2.
  [[nodiscard]] static std::vector<PolarCell> split(const PolarCell& c, double j) {
    constexpr double kQuarter = 0.5 * std::numbers::pi;
    std::vector<PolarCell> kids;
    if (c.full) {
      const double rm = (0.5 + j) * c.r1;
      const double t = c.t0 + 0.61 * j;
      kids.push_back({c.origin, 0.0, rm, t, t + 2.0 * std::numbers::pi, true});
      for (int q = 0; q < 4; ++q)
        kids.push_back({c.origin, rm, c.r1, t + q * kQuarter, t + (q + 1) * kQuarter, false});
      return kids;
    }
    const double rm = c.r0 + (0.5 + j) * (c.r1 - c.r0);
    const double tm = c.t0 + (0.5 - 0.7 * j) * (c.t1 - c.t0);
    kids.push_back({c.origin, c.r0, rm, c.t0, tm, false});
    kids.push_back({c.origin, c.r0, rm, tm, c.t1, false});
    kids.push_back({c.origin, rm, c.r1, c.t0, tm, false});
    kids.push_back({c.origin, rm, c.r1, tm, c.t1, false});
    return kids;
  }

  std::vector<Zero> zeros_;
  std::vector<ZeroCluster> clusters_;
  std::size_t subdivisions_ = 0;
  std::size_t conservation_failures_ = 0;

 private:
  [[nodiscard]] WindingOptions winding_options(double max_modulus) const {
    WindingOptions w;
    w.min_samples = opt_.min_samples;
    w.floor = horner_floor(p_, max_modulus);
    return w;
  }

  const Polynomial& p_;
  cplx origin_;
  double radius_;
  LocalizeOptions opt_;
};

/// Angle offset of the first split, chosen to keep cell edges off the coordinate axes.
inline constexpr double kSplitAngle = 0.1234;

}  // namespace detail

/// All zeros of p in the open disk |z - center| < radius, each certified by a
/// winding count on a small circle; multiplicities add up to `certify_count`,
/// the winding count on the boundary. The disk is subdivided into an inner
/// disk and annular sectors, so no contour leaves it. When the boundary
/// circle meets a zero the radius is enlarged by the next jitter and the disk
/// actually used is reported. Unresolved clusters come back in `clusters`.
inline ZeroSet localize_zeros(const Polynomial& p, cplx center, double radius, const LocalizeOptions& opt = {}) {
  ZeroSet out;
  out.center = center;
  out.residual_tol = opt.residual_tol;

  std::optional<int> top;
  for (const double j : detail::kJitter) {
    const double r = radius * (1.0 + std::abs(j) + (j < 0 ? 0.5e-3 : 0.0));
    if ((top = detail::Localizer(p, center, r, opt).circle_count(center, r))) {
      out.radius = r;
      break;
    }
  }
  if (!top) throw BoundaryZero("every jittered boundary circle passes through a zero");
  out.certify_count = *top;
  if (*top == 0) return out;

  detail::Localizer loc(p, center, out.radius, opt);
  const double t0 = detail::kSplitAngle;
  loc.process({center, 0.0, out.radius, t0, t0 + 2.0 * std::numbers::pi, true}, *top, 0);
  out.zeros = std::move(loc.zeros_);
  out.clusters = std::move(loc.clusters_);
  out.subdivisions = loc.subdivisions_;
  out.conservation_failures = loc.conservation_failures_;
  std::sort(out.zeros.begin(), out.zeros.end(),
            [](const Zero& a, const Zero& b) { return detail::lex_less(a.location, b.location); });

  if (out.resolved() && out.total_multiplicity() != out.certify_count) {
    std::ostringstream os;
    os << "localized " << out.total_multiplicity() << " zeros but the boundary winding is " << out.certify_count;
    throw NonConvergence(os.str());
  }
  return out;
}

namespace detail {

/// Pairs the roots of a real polynomial into exact conjugates and makes near-real roots real.
inline void symmetrize_conjugates(std::vector<cplx>& roots) {
  std::vector<std::size_t> upper, lower;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double tol = 1e-12 * std::max(1.0, std::abs(roots[k]));
    if (std::abs(roots[k].imag()) <= tol)
      roots[k].imag(0.0);
    else
      (roots[k].imag() > 0 ? upper : lower).push_back(k);
  }
  if (upper.size() != lower.size()) return;
  std::vector<bool> used(lower.size(), false);
  for (const std::size_t i : upper) {
    std::size_t best = lower.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[lower[j]] - std::conj(roots[i]));
      if (best == lower.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    used[best] = true;
    const cplx a = roots[i];
    const cplx b = roots[lower[best]];
    const cplx mean{0.5 * (a.real() + b.real()), 0.5 * (a.imag() - b.imag())};
    roots[i] = mean;
    roots[lower[best]] = std::conj(mean);
  }
}

/// Snaps clusters of nearly equal roots onto one multiple root when p^{(m-1)}
/// has a zero there and p, ..., p^{(m-2)} vanish to rounding.
inline void refine_multiple_roots(const Polynomial& p, std::vector<cplx>& roots) {
  const std::size_t n = roots.size();
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    done[i] = true;
    const double radius = 1e-4 * std::max(1.0, std::abs(roots[i]));
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < n; ++j)
      if (!done[j] && std::abs(roots[j] - roots[i]) < radius) group.push_back(j);
    if (group.size() < 2) continue;

    cplx c{};
    for (const auto k : group) c += roots[k];
    c /= static_cast<double>(group.size());
    const std::size_t m = group.size();
    std::vector<Polynomial> derivs{p};
    for (std::size_t d = 1; d < m; ++d) derivs.push_back(derivs.back().derivative());

    cplx z = c;
    const Polynomial& q = derivs.back();
    for (int it = 0; it < 50; ++it) {
      const auto [f, df] = q.value_and_derivative(z);
      if (df == cplx{}) break;
      const cplx step = f / df;
      z -= step;
      if (std::abs(step) <= 4.0 * DBL_EPSILON * std::max(1.0, std::abs(z))) break;
    }
    bool multiple = std::abs(z - c) < radius;
    for (std::size_t d = 0; d + 1 < m && multiple; ++d)
      multiple = std::abs(derivs[d](z)) <= 1e-11 * derivs[d].magnitude(std::max(1.0, std::abs(z)));
    if (!multiple) continue;
    for (const auto k : group) {
      roots[k] = z;
      done[k] = true;
    }
  }
}

}  // namespace detail

struct AberthOptions {
  int max_iterations = 500;
  /// Accepted |p(root)| relative to sum |c_k| max(1, |root|)^k.
  double residual_tol = 1e-8;
};

/// All deg(p) roots of p, repeated by multiplicity, by Aberth-Ehrlich
/// iteration from a rotated circle. Roots of real polynomials come out as
/// exact conjugate pairs. Falls back to localize_zeros on the Cauchy disk when
/// the iteration does not settle or a residual check fails.
inline std::vector<cplx> aberth_root_list(const Polynomial& p, const AberthOptions& opt = {}) {
  const std::size_t n = p.degree();
  if (p.size() == 0 || p[n] == cplx{}) throw DomainError("aberth_roots: leading coefficient must be nonzero");
  if (n == 0) return {};

  std::vector<cplx> b(n + 1);
  for (std::size_t k = 0; k <= n; ++k) b[k] = p[k] / p[n];
  const Polynomial monic(b);
  bool real = true;
  for (const auto& c : p.coeffs()) real = real && c.imag() == 0.0;

  double cauchy = 0.0;
  for (std::size_t k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(b[k]));
  cauchy += 1.0;

  const double r0 =
      b[0] == cplx{} ? 0.5 : std::min(cauchy, std::pow(std::abs(b[0]), 1.0 / static_cast<double>(n)));
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(r0, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n) + 0.4);

  std::vector<bool> settled(n, false);
  bool converged = false;
  for (int it = 0; it < opt.max_iterations && !converged; ++it) {
    converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (settled[k]) continue;
      const auto [f, df] = monic.value_and_derivative(z[k]);
      // At the rounding floor further steps only move the iterate around in noise.
      if (std::abs(f) <= 8.0 * static_cast<double>(n + 1) * DBL_EPSILON * monic.magnitude(std::abs(z[k]))) {
        settled[k] = true;
        continue;
      }
      const cplx ratio = f / df;
      cplx sum{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx w = ratio / (1.0 - ratio * sum);
      z[k] -= w;
      if (std::abs(w) <= 4.0 * DBL_EPSILON * std::max(1.0, std::abs(z[k])))
        settled[k] = true;
      else
        converged = false;
    }
  }

  auto residual_ok = [&](cplx r) {
    return std::abs(p(r)) <= opt.residual_tol * p.magnitude(std::max(1.0, std::abs(r)));
  };

  bool ok = converged;
  if (ok) {
    for (auto& r : z) {
      const auto [f, df] = p.value_and_derivative(r);
      if (df != cplx{}) {
        const cplx next = r - f / df;
        if (std::abs(p(next)) < std::abs(f)) r = next;
      }
    }
    detail::refine_multiple_roots(p, z);
    if (real) detail::symmetrize_conjugates(z);
    for (const auto& r : z) ok = ok && std::isfinite(r.real()) && std::isfinite(r.imag()) && residual_ok(r);
  }
  if (!ok) {
    const ZeroSet zs = localize_zeros(p, cplx{}, cauchy * 1.01);
    if (!zs.resolved() || zs.total_multiplicity() != static_cast<int>(n))
      throw NonConvergence("aberth_roots: iteration and subdivision fallback both failed");
    return zs.flatten();
  }
  return z;
}

/// Roots of p as a ZeroSet on the Cauchy disk; equal roots are merged into one entry.
inline ZeroSet aberth_roots(const Polynomial& p, const AberthOptions& opt = {}) {
  auto roots = aberth_root_list(p, opt);
  std::sort(roots.begin(), roots.end(), detail::lex_less);
  ZeroSet out;
  out.residual_tol = opt.residual_tol;
  const std::size_t n = p.degree();
  double cauchy = 0.0;
  for (std::size_t k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(p[k] / p[n]));
  out.radius = cauchy + 1.0;
  out.certify_count = static_cast<int>(n);
  for (const auto& r : roots) {
    if (!out.zeros.empty() && out.zeros.back().location == r)
      ++out.zeros.back().multiplicity;
    else
      out.zeros.push_back({r, 1});
  }
  return out;
}

}  // namespace raf
