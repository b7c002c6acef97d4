#pragma once

// Gauss-type sums
//   G_m(k) = ((1 - i)/2 + (-1/k)(1 + i)/2) * sum_{a mod k} (a/k) e(am/k),   k odd,
// by literal summation and by the multiplicative prime-power table.

#include <cmath>
#include <complex>
#include <limits>

#include "quadmean/arith.hpp"
#include "quadmean/quadrature.hpp"

namespace quadmean {

/// Default cap on the residue count of a direct evaluation.
inline constexpr i64 kGaussDirectCap = 1'000'000;

struct GaussSumValue {
  double re = 0.0;
  double im = 0.0;

  std::complex<double> complex() const { return {re, im}; }
  double abs() const { return std::hypot(re, im); }

  friend GaussSumValue operator*(const GaussSumValue& a, const GaussSumValue& b) {
    const auto z = a.complex() * b.complex();
    return {z.real(), z.imag()};
  }
};

/// Literal summation. The phase am/k is reduced mod k in integers before any
/// trigonometry, so large a*m loses nothing.
inline GaussSumValue gauss_direct(i64 m, i64 k, i64 cap = kGaussDirectCap) {
  require_odd_modulus(k, "gauss_direct");
  if (k > cap) throw resource_error("gauss_direct: modulus beyond the direct-evaluation cap");
  const i64 step = ((m % k) + k) % k;
  CompensatedSum<std::complex<double>> sum;
  i64 phase = 0;  // a*m mod k
  for (i64 a = 0; a < k; ++a) {
    const int chi = (k == 1) ? 1 : jacobi(a, k);
    if (chi != 0) {
      const double theta = 2.0 * kPi * static_cast<double>(phase) / static_cast<double>(k);
      sum += std::complex<double>(chi * std::cos(theta), chi * std::sin(theta));
    }
    phase += step;
    if (phase >= k) phase -= k;
  }
  const std::complex<double> pre =
      (kronecker(-1, k) == 1) ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, -1.0);
  const auto g = pre * sum.value();
  return {g.real(), g.imag()};
}

/// G_m(p^b) from the prime-power table, with a = v_p(m) (a = infinity for m = 0).
inline double gauss_prime_power(i64 m, i64 p, int b) {
  if (p < 3 || !is_prime(p)) throw domain_error("gauss_prime_power: p must be an odd prime");
  if (b < 1) throw domain_error("gauss_prime_power: b must be >= 1");
  constexpr int kInfinite = std::numeric_limits<int>::max();
  const int a = (m == 0) ? kInfinite : valuation(m, p);
  auto ipow = [](i64 base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= static_cast<double>(base);
    return r;
  };
  if (b <= a) {
    if (b % 2 == 1) return 0.0;
    return ipow(p, b) - ipow(p, b - 1);  // phi(p^b)
  }
  if (b == a + 1) {
    const double pa = ipow(p, a);
    if (b % 2 == 0) return -pa;
    i64 unit = m;
    for (int i = 0; i < a; ++i) unit /= p;
    return kronecker(unit, p) * pa * std::sqrt(static_cast<double>(p));
  }
  return 0.0;
}

/// Product of prime-power values over the factorization of k.
inline GaussSumValue gauss_fast(i64 m, i64 k) {
  require_odd_modulus(k, "gauss_fast");
  double g = 1.0;
  for (const auto& [p, e] : factorize(k).factors) {
    g *= gauss_prime_power(m, p, e);
    if (g == 0.0) break;
  }
  return {g, 0.0};
}

/// Both sides of (2/n) G_m(n) = G_{2m}(n), computed independently.
struct TwistedGaussSum {
  GaussSumValue twisted;  // (2/n) G_m(n)
  GaussSumValue doubled;  // G_{2m}(n)
};

inline TwistedGaussSum gauss_twisted(i64 m, i64 n, i64 cap = kGaussDirectCap) {
  require_odd_modulus(n, "gauss_twisted");
  const int chi2 = kronecker(2, n);
  if (n <= cap) {
    const auto g = gauss_direct(m, n, cap);
    return {{chi2 * g.re, chi2 * g.im}, gauss_direct(2 * m, n, cap)};
  }
  const auto g = gauss_fast(m, n);
  return {{chi2 * g.re, 0.0}, gauss_fast(2 * m, n)};
}

}  // namespace quadmean
