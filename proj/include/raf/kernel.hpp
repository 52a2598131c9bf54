#pragma once

// Geometry of the kappa-family of random analytic functions: the disk of
// radius |kappa|^{-1/2}, the coefficient weights a_{n,kappa}, the covariance
// kernel Q_kappa, the disk automorphisms Phi_kappa^u and the covariance
// factor Delta_kappa^u.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "raf/error.hpp"

namespace raf {

using cplx = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// log(1 + w) for complex w, accurate when |w| is tiny.
inline cplx log1p(cplx w) {
  const double re = w.real();
  const double im = w.imag();
  const double mod2m1 = 2.0 * re + re * re + im * im;  // |1+w|^2 - 1
  return {0.5 * std::log1p(mod2m1), std::atan2(im, 1.0 + re)};
}

/// Curvature parameter kappa <= 0. The metric on the disk has Gauss curvature 4*kappa.
class Curvature {
 public:
  explicit Curvature(double kappa) : kappa_(kappa) {
    if (!(kappa <= 0.0)) {
      std::ostringstream os;
      os << "curvature parameter must satisfy kappa <= 0, got " << kappa;
      throw DomainError(os.str());
    }
  }

  [[nodiscard]] double value() const noexcept { return kappa_; }
  [[nodiscard]] bool is_flat() const noexcept { return kappa_ == 0.0; }

  /// rho_kappa = |kappa|^{-1/2}; +infinity for kappa = 0.
  [[nodiscard]] double radius() const noexcept {
    return is_flat() ? kInfinity : 1.0 / std::sqrt(-kappa_);
  }

  [[nodiscard]] bool contains(cplx z) const noexcept {
    return is_flat() ? std::isfinite(std::abs(z)) : std::abs(z) < radius();
  }

  friend bool operator==(const Curvature&, const Curvature&) = default;

 private:
  double kappa_;
};

inline double radius_of_convergence(Curvature kappa) noexcept { return kappa.radius(); }

inline void require_in_domain(cplx z, Curvature kappa, const char* what) {
  if (!kappa.contains(z)) {
    std::ostringstream os;
    os << what << " = " << z << " lies outside the disk of radius " << kappa.radius();
    throw DomainError(os.str());
  }
}

/// A point strictly inside U(0, rho_kappa).
class DiskPoint {
 public:
  DiskPoint(cplx z, Curvature kappa) : z_(z), kappa_(kappa) { require_in_domain(z, kappa, "disk point"); }

  [[nodiscard]] cplx z() const noexcept { return z_; }
  [[nodiscard]] Curvature kappa() const noexcept { return kappa_; }

 private:
  cplx z_;
  Curvature kappa_;
};

/// log a_{n,kappa} = sum_{j=1}^{n} 0.5 * log((1 - (j-1) kappa) / j).
inline double log_coefficient(std::size_t n, Curvature kappa) {
  const double k = kappa.value();
  double acc = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const auto jd = static_cast<double>(j);
    acc += 0.5 * (std::log1p(-(jd - 1.0) * k) - std::log(jd));
  }
  return acc;
}

/// a_{n,kappa}, evaluated in log space so large n neither overflows nor underflows early.
inline double coefficient(std::size_t n, Curvature kappa) { return std::exp(log_coefficient(n, kappa)); }

/// The weights a_{0..degree}. Entries follow a[n]^2 * n = a[n-1]^2 * (1 - (n-1) kappa).
class CoefficientTable {
 public:
  CoefficientTable(Curvature kappa, std::size_t degree) : kappa_(kappa), a_(degree + 1) {
    a_[0] = 1.0;
    const double k = kappa.value();
    for (std::size_t n = 1; n <= degree; ++n) {
      const auto nd = static_cast<double>(n);
      a_[n] = a_[n - 1] * std::sqrt((1.0 - (nd - 1.0) * k) / nd);
    }
  }

  [[nodiscard]] Curvature kappa() const noexcept { return kappa_; }
  [[nodiscard]] std::size_t degree() const noexcept { return a_.size() - 1; }
  [[nodiscard]] double operator[](std::size_t n) const { return a_[n]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return a_; }

 private:
  Curvature kappa_;
  std::vector<double> a_;
};

/// Q_kappa(z, w) = (1 + kappa z conj(w))^{1/kappa}, or exp(z conj(w)) when kappa = 0.
inline cplx covariance(cplx z, cplx w, Curvature kappa) {
  require_in_domain(z, kappa, "z");
  require_in_domain(w, kappa, "w");
  const cplx zw = z * std::conj(w);
  if (kappa.is_flat()) return std::exp(zw);
  const double k = kappa.value();
  return std::exp(log1p(k * zw) / k);
}

/// Phi_kappa^u(z) = (z - u) / (1 + kappa conj(u) z); sends u to 0.
inline cplx mobius(cplx z, const DiskPoint& u) {
  const cplx uz = u.z();
  if (uz == cplx{}) return z;
  return (z - uz) / (1.0 + u.kappa().value() * std::conj(uz) * z);
}

/// Inverse of mobius(., u), which is mobius(., -u).
inline cplx mobius_inverse(cplx w, const DiskPoint& u) { return mobius(w, DiskPoint(-u.z(), u.kappa())); }

/// Delta_kappa^u(z), the factor by which Q_kappa transforms under Phi_kappa^u.
inline cplx delta(cplx z, const DiskPoint& u) {
  const cplx uz = u.z();
  const double u2 = std::norm(uz);
  if (u.kappa().is_flat()) return std::exp(0.5 * u2 - std::conj(uz) * z);
  const double k = u.kappa().value();
  const cplx log_frame = std::log1p(k * u2) / (2.0 * k);
  return std::exp(log_frame - log1p(k * std::conj(uz) * z) / k);
}

/// |Q(Phi z, Phi w) - Delta(z) conj(Delta(w)) Q(z, w)|.
inline double covariance_identity_residual(cplx z, cplx w, const DiskPoint& u) {
  const Curvature kappa = u.kappa();
  const cplx lhs = covariance(mobius(z, u), mobius(w, u), kappa);
  const cplx rhs = delta(z, u) * std::conj(delta(w, u)) * covariance(z, w, kappa);
  return std::abs(lhs - rhs);
}

/// The residual above divided by sqrt(Q(Phi z, Phi z) Q(Phi w, Phi w)), the
/// Cauchy-Schwarz bound on |Q(Phi z, Phi w)|. Scale-free near the boundary,
/// where Q itself grows without bound.
inline double covariance_identity_relative_residual(cplx z, cplx w, const DiskPoint& u) {
  const Curvature kappa = u.kappa();
  const cplx pz = mobius(z, u);
  const cplx pw = mobius(w, u);
  const double scale = std::sqrt(covariance(pz, pz, kappa).real() * covariance(pw, pw, kappa).real());
  return covariance_identity_residual(z, w, u) / scale;
}

/// alpha_n(u) = a_n sum_k lambda_k Phi^u(z_k)^n / Delta^u(z_k) for n = 0..trunc.
inline std::vector<cplx> alpha_coefficients(const DiskPoint& u, std::span<const cplx> lambdas,
                                            std::span<const cplx> zs, std::size_t trunc) {
  if (lambdas.size() != zs.size()) throw std::invalid_argument("alpha_coefficients: lambdas and zs differ in length");
  const Curvature kappa = u.kappa();
  std::vector<cplx> weight(zs.size());
  std::vector<cplx> power(zs.size(), cplx{1.0, 0.0});
  std::vector<cplx> ratio(zs.size());
  for (std::size_t k = 0; k < zs.size(); ++k) {
    require_in_domain(zs[k], kappa, "z_k");
    weight[k] = lambdas[k] / delta(zs[k], u);
    ratio[k] = mobius(zs[k], u);
  }
  const CoefficientTable a(kappa, trunc);
  std::vector<cplx> alpha(trunc + 1);
  for (std::size_t n = 0; n <= trunc; ++n) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < zs.size(); ++k) {
      acc += weight[k] * power[k];
      power[k] *= ratio[k];
    }
    alpha[n] = a[n] * acc;
  }
  return alpha;
}

/// sum_{j,k} lambda_j Q(z_j, z_k) conj(lambda_k); real and non-negative.
inline double kernel_quadratic_form(std::span<const cplx> lambdas, std::span<const cplx> zs, Curvature kappa) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < zs.size(); ++j)
    for (std::size_t k = 0; k < zs.size(); ++k) acc += lambdas[j] * covariance(zs[j], zs[k], kappa) * std::conj(lambdas[k]);
  return acc.real();
}

}  // namespace raf
