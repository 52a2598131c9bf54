#pragma once

// Seeded coefficient ensembles, truncation-degree selection and evaluation of
// truncated random analytic functions f(z) = sum_n a_{n,kappa} X_n z^n.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "raf/error.hpp"
#include "raf/kernel.hpp"
#include "raf/polynomial.hpp"
#include "raf/rng.hpp"

namespace raf {

enum class EnsembleKind { ComplexGaussian, RealGaussian, RademacherReal, QuaternaryComplex, CustomDiscrete };

/// Distribution of the i.i.d. coefficients X_n.
class Ensemble {
 public:
  static Ensemble complex_gaussian() { return Ensemble(EnsembleKind::ComplexGaussian, true); }
  static Ensemble real_gaussian() { return Ensemble(EnsembleKind::RealGaussian, true); }
  static Ensemble rademacher() { return Ensemble(EnsembleKind::RademacherReal, true); }

  /// Uniform on {1+i, 1-i, -1+i, -1-i}; scaled by 2^{-1/2} when normalized.
  static Ensemble quaternary(bool normalize = true) {
    Ensemble e(EnsembleKind::QuaternaryComplex, normalize);
    const double s = normalize ? 1.0 / std::sqrt(2.0) : 1.0;
    e.atoms_ = {cplx{s, s}, cplx{s, -s}, cplx{-s, s}, cplx{-s, -s}};
    e.cdf_ = {0.25, 0.5, 0.75, 1.0};
    return e;
  }

  /// Finite distribution on bounded atoms. With normalization the atoms are
  /// rescaled to E|X|^2 = 1 after checking E X = 0 and, for non-real atoms,
  /// E(Re X)^2 = E(Im X)^2 and E Re X Im X = 0.
  static Ensemble custom(std::vector<cplx> atoms, std::vector<double> probabilities, bool normalize = true) {
    if (atoms.empty() || atoms.size() != probabilities.size())
      throw DomainError("custom ensemble needs one probability per atom");
    double total = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (!(probabilities[k] >= 0.0) || !std::isfinite(std::abs(atoms[k])))
        throw DomainError("custom ensemble atoms must be finite with non-negative probabilities");
      total += probabilities[k];
    }
    if (!(total > 0.0)) throw DomainError("custom ensemble probabilities sum to zero");
    for (auto& p : probabilities) p /= total;

    Ensemble e(EnsembleKind::CustomDiscrete, normalize);
    if (normalize) {
      cplx mean{};
      double re2 = 0.0, im2 = 0.0, reim = 0.0;
      bool real = true;
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        mean += probabilities[k] * atoms[k];
        re2 += probabilities[k] * atoms[k].real() * atoms[k].real();
        im2 += probabilities[k] * atoms[k].imag() * atoms[k].imag();
        reim += probabilities[k] * atoms[k].real() * atoms[k].imag();
        real = real && atoms[k].imag() == 0.0;
      }
      const double var = re2 + im2;
      constexpr double tol = 1e-12;
      if (!(var > 0.0)) throw DomainError("custom ensemble is degenerate (zero variance)");
      if (std::abs(mean) > tol * std::sqrt(var)) throw DomainError("custom ensemble must have mean zero");
      if (!real && (std::abs(re2 - im2) > tol * var || std::abs(reim) > tol * var))
        throw DomainError("custom ensemble violates E(Re X)^2 = E(Im X)^2, E Re X Im X = 0");
      const double s = 1.0 / std::sqrt(var);
      for (auto& a : atoms) a *= s;
    }
    e.atoms_ = std::move(atoms);
    e.cdf_.resize(probabilities.size());
    std::partial_sum(probabilities.begin(), probabilities.end(), e.cdf_.begin());
    e.cdf_.back() = 1.0;
    return e;
  }

  /// Parses "gaussian" | "complex-gaussian" | "real-gaussian" | "rademacher" | "pm1" | "quaternary".
  static Ensemble from_name(std::string_view name) {
    if (name == "gaussian" || name == "complex-gaussian" || name == "gaf") return complex_gaussian();
    if (name == "real-gaussian") return real_gaussian();
    if (name == "rademacher" || name == "pm1") return rademacher();
    if (name == "quaternary") return quaternary(true);
    throw DomainError("unknown ensemble '" + std::string(name) + "'");
  }

  [[nodiscard]] EnsembleKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool normalized() const noexcept { return normalize_; }
  [[nodiscard]] std::span<const cplx> atoms() const noexcept { return atoms_; }

  /// True when every draw is real (Gaussian-real, Rademacher, real custom atoms).
  [[nodiscard]] bool is_real() const noexcept {
    switch (kind_) {
      case EnsembleKind::RealGaussian:
      case EnsembleKind::RademacherReal: return true;
      case EnsembleKind::CustomDiscrete:
        for (const auto& a : atoms_)
          if (a.imag() != 0.0) return false;
        return true;
      default: return false;
    }
  }

  [[nodiscard]] std::string name() const {
    switch (kind_) {
      case EnsembleKind::ComplexGaussian: return "complex-gaussian";
      case EnsembleKind::RealGaussian: return "real-gaussian";
      case EnsembleKind::RademacherReal: return "rademacher";
      case EnsembleKind::QuaternaryComplex: return normalize_ ? "quaternary" : "quaternary-unnormalized";
      case EnsembleKind::CustomDiscrete: return "custom";
    }
    return "unknown";
  }

  /// One draw. Gaussian variants: complex has independent N(0, 1/2) parts, real is N(0, 1).
  cplx draw(Engine& eng) const {
    switch (kind_) {
      case EnsembleKind::ComplexGaussian: {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        const double re = normal(eng);
        const double im = normal(eng);
        return {re, im};
      }
      case EnsembleKind::RealGaussian: {
        std::normal_distribution<double> normal(0.0, 1.0);
        return {normal(eng), 0.0};
      }
      case EnsembleKind::RademacherReal: return {(eng() >> 63) != 0 ? 1.0 : -1.0, 0.0};
      case EnsembleKind::QuaternaryComplex: return atoms_[eng() >> 62];
      case EnsembleKind::CustomDiscrete: {
        const double uniform = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        std::size_t k = 0;
        while (k + 1 < cdf_.size() && uniform >= cdf_[k]) ++k;
        return atoms_[k];
      }
    }
    return {};
  }

 private:
  Ensemble(EnsembleKind kind, bool normalize) : kind_(kind), normalize_(normalize) {}

  EnsembleKind kind_;
  bool normalize_;
  std::vector<cplx> atoms_;
  std::vector<double> cdf_;
};

/// `count` i.i.d. draws; a pure function of (ensemble, count, seed).
inline std::vector<cplx> sample_coefficients(const Ensemble& ensemble, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_coefficients: count must be at least 1");
  Engine eng = make_engine(seed);
  std::vector<cplx> xs(count);
  for (auto& x : xs) x = ensemble.draw(eng);
  return xs;
}

namespace detail {

inline void check_truncation_radius(Curvature kappa, double r_max) {
  if (!(r_max > 0.0) || !(r_max < kappa.radius()))
    throw DomainError("truncation radius must satisfy 0 < r_max < rho_kappa, got " + std::to_string(r_max));
}

/// Terms t_n = a_n^2 r^{2n} / scale for n = 0..M and a bound on sum_{n>M} t_n.
/// M is the first index past which the geometric majorant of the tail drops below `negligible`.
struct TailTerms {
  std::vector<double> terms;
  double remainder = 0.0;
};

inline TailTerms tail_terms(Curvature kappa, double r, double scale, double negligible) {
  const double k = kappa.value();
  const double log_r2 = 2.0 * std::log(r);
  const double log_scale = std::log(scale);
  const double limit_ratio = -k * r * r;  // lim t_{n+1}/t_n
  constexpr std::size_t kMaxTerms = 50'000'000;
  TailTerms out;
  double log_t = 0.0;  // log(a_n^2 r^{2n})
  for (std::size_t n = 0;; ++n) {
    out.terms.push_back(std::exp(log_t - log_scale));
    const auto nd = static_cast<double>(n);
    const double q_next = std::exp(std::log1p(-nd * k) - std::log(nd + 1.0) + log_r2);  // t_{n+1}/t_n
    const double log_t_next = log_t + std::log(q_next);
    // Ratios beyond n+1 are monotone toward limit_ratio, so max(q_{n+1}, limit) dominates them.
    const double q_after = std::exp(std::log1p(-(nd + 1.0) * k) - std::log(nd + 2.0) + log_r2);
    const double q_sup = std::max(q_after, limit_ratio);
    if (q_sup < 1.0) {
      const double majorant = std::exp(log_t_next - log_scale) / (1.0 - q_sup);
      if (majorant < negligible) {
        out.remainder = majorant;
        return out;
      }
    }
    if (out.terms.size() > kMaxTerms) throw NonConvergence("series tail did not converge within the term cap");
    log_t = log_t_next;
  }
}

}  // namespace detail

/// sum_{n > degree} a_{n,kappa}^2 r^{2n}, the variance of the discarded tail at |z| = r.
inline double series_tail(Curvature kappa, std::size_t degree, double r) {
  detail::check_truncation_radius(kappa, r);
  const double k = kappa.value();
  const double log_r2 = 2.0 * std::log(r);
  const double limit_ratio = -k * r * r;
  double log_t = 2.0 * log_coefficient(degree + 1, kappa) + static_cast<double>(degree + 1) * log_r2;
  double acc = 0.0;
  for (std::size_t n = degree + 1;; ++n) {
    const double t = std::exp(log_t);
    acc += t;
    const auto nd = static_cast<double>(n);
    log_t += std::log1p(-nd * k) - std::log(nd + 1.0) + log_r2;
    const double q_after = std::exp(std::log1p(-(nd + 1.0) * k) - std::log(nd + 2.0) + log_r2);
    const double q_sup = std::max(q_after, limit_ratio);
    if (q_sup < 1.0) {
      const double majorant = std::exp(log_t) / (1.0 - q_sup);
      if (majorant <= 1e-17 * acc || majorant == 0.0) return acc + majorant;
    }
    if (n - degree > 50'000'000) throw NonConvergence("series tail did not converge within the term cap");
  }
}

/// Smallest N with sum_{n>N} a_{n,kappa}^2 r_max^{2n} < eps^2.
inline std::size_t truncation_degree(Curvature kappa, double r_max, double eps) {
  detail::check_truncation_radius(kappa, r_max);
  if (!(eps > 0.0)) throw DomainError("truncation tolerance must be positive");
  const double eps2 = eps * eps;
  const auto t = detail::tail_terms(kappa, r_max, eps2, 1e-6);
  // tail[N] = sum_{n>N} t_n in units of eps^2, accumulated from the far end.
  std::vector<double> tail(t.terms.size());
  double acc = t.remainder;
  for (std::size_t n = t.terms.size(); n-- > 0;) {
    tail[n] = acc;
    acc += t.terms[n];
  }
  for (std::size_t n = 0; n < tail.size(); ++n)
    if (tail[n] < 1.0) return n;
  return tail.size() - 1;
}

/// Coefficients c_n = a_{n,kappa} X_n, n = 0..N, with their provenance.
struct TruncatedSeries {
  Curvature kappa{0.0};
  Ensemble ensemble = Ensemble::complex_gaussian();
  std::uint64_t seed = 0;
  Polynomial poly;
  /// Radius the tail bound refers to.
  double r_max = 0.0;
  /// (sum_{n>N} a_n^2 r_max^{2n})^{1/2}: standard deviation of the discarded tail on |z| <= r_max.
  double tail_bound = 0.0;

  [[nodiscard]] std::size_t degree() const noexcept { return poly.degree(); }
  [[nodiscard]] std::span<const cplx> coeffs() const noexcept { return poly.coeffs(); }
};

/// Pointwise sum of two truncations of the same model; tail bounds add.
inline TruncatedSeries operator+(const TruncatedSeries& s, const TruncatedSeries& t) {
  if (!(s.kappa == t.kappa)) throw std::invalid_argument("cannot add series with different curvature");
  const std::size_t n = std::max(s.poly.size(), t.poly.size());
  std::vector<cplx> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < s.poly.size()) c[k] += s.poly[k];
    if (k < t.poly.size()) c[k] += t.poly[k];
  }
  TruncatedSeries out = s;
  out.poly = Polynomial(std::move(c));
  out.r_max = std::min(s.r_max, t.r_max);
  out.tail_bound = s.tail_bound + t.tail_bound;
  return out;
}

/// Draws X_0..X_degree and weights them by a_{n,kappa}. Passing r_max records the tail bound.
inline TruncatedSeries sample_raf(const Ensemble& ensemble, Curvature kappa, std::size_t degree, std::uint64_t seed,
                                  std::optional<double> r_max = std::nullopt) {
  auto xs = sample_coefficients(ensemble, degree + 1, seed);
  const CoefficientTable a(kappa, degree);
  for (std::size_t n = 0; n <= degree; ++n) xs[n] *= a[n];
  TruncatedSeries s{kappa, ensemble, seed, Polynomial(std::move(xs)), 0.0, 0.0};
  if (r_max) {
    s.r_max = *r_max;
    s.tail_bound = std::sqrt(series_tail(kappa, degree, *r_max));
  }
  return s;
}

struct Evaluation {
  cplx value;
  /// False when |z| exceeds the radius the tail bound was computed for.
  bool tail_bound_valid;
};

inline Evaluation evaluate(const TruncatedSeries& series, cplx z) {
  return {series.poly(z), std::abs(z) <= series.r_max};
}

}  // namespace raf
