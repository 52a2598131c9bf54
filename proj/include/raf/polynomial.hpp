#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace raf {

/// Dense complex polynomial sum_n c[n] z^n, coefficients in increasing degree.
class Polynomial {
 public:
  using value_type = std::complex<double>;

  Polynomial() = default;
  explicit Polynomial(std::vector<value_type> coeffs) : c_(std::move(coeffs)) {}
  Polynomial(std::initializer_list<value_type> coeffs) : c_(coeffs) {}

  [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
  /// Formal degree (index of the last stored coefficient); 0 for the empty polynomial.
  [[nodiscard]] std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  [[nodiscard]] std::span<const value_type> coeffs() const noexcept { return c_; }
  [[nodiscard]] const value_type& operator[](std::size_t n) const { return c_[n]; }

  [[nodiscard]] value_type operator()(value_type z) const noexcept {
    value_type acc{0.0, 0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// f(z) and f'(z) in one Horner pass.
  [[nodiscard]] std::pair<value_type, value_type> value_and_derivative(value_type z) const noexcept {
    value_type f{0.0, 0.0};
    value_type df{0.0, 0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      df = df * z + f;
      f = f * z + *it;
    }
    return {f, df};
  }

  [[nodiscard]] Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial{};
    std::vector<value_type> d(c_.size() - 1);
    for (std::size_t n = 1; n < c_.size(); ++n) d[n - 1] = static_cast<double>(n) * c_[n];
    return Polynomial(std::move(d));
  }

  /// sum_n |c[n]| r^n: bounds |f| on |z| <= r and sets the rounding scale of Horner evaluation.
  [[nodiscard]] double magnitude(double r) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  [[nodiscard]] double max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  std::vector<value_type> c_;
};

}  // namespace raf
