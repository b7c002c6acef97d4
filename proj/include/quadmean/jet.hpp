#pragma once

// Truncated Taylor arithmetic: a Jet<N> holds f(x0), f'(x0)/1!, ..., f^(N)(x0)/N!.

#include <array>
#include <cmath>
#include <cstddef>

namespace quadmean {

template <std::size_t N>
class Jet {
 public:
  constexpr Jet() = default;
  constexpr Jet(double value) { c_[0] = value; }  // NOLINT: implicit constant lift

  /// The independent variable x at x0.
  static constexpr Jet variable(double x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c_[1] = 1.0;
    return j;
  }

  constexpr double operator[](std::size_t k) const { return c_[k]; }
  constexpr double& operator[](std::size_t k) { return c_[k]; }

  /// k-th derivative (not divided by k!).
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c_[k] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t i = 0; i <= N; ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t i = 0; i <= N; ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = 0; i + j <= N; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    // r' = a' r  =>  k r_k = sum_{j=1..k} j a_j r_{k-j}
    Jet r;
    r.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k <= N; ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / static_cast<double>(k);
    }
    return r;
  }

 private:
  std::array<double, N + 1> c_{};
};

}  // namespace quadmean
