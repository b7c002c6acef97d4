#pragma once

// Zeta, Stieltjes constants, the Euler products eta(s) and G(s, k), and
// Dirichlet series of real characters. Every truncated product or series
// comes with a rigorous bound on its dropped tail.
//
//   sum_{n odd} phi(n^2) d(n^2) / n^{2+s}   = zeta(s)^3 eta(s)
//   sum_{n odd} G_{2k}(n) d(n) / n^{1+s}    = L(1/2 + s, chi_{k1})^2 G(s, k),   2k = k1 k2^2

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "quadmean/arith.hpp"
#include "quadmean/error.hpp"
#include "quadmean/gauss.hpp"
#include "quadmean/laurent.hpp"
#include "quadmean/quadrature.hpp"
#include "quadmean/smoothing.hpp"

namespace quadmean {

inline constexpr long kZetaEulerMaclaurinN = 10'000;
inline constexpr i64 kEtaCutoff = 100'000;
inline constexpr i64 kScriptGCutoff = 10'000;
inline constexpr i64 kScriptGFamilyCutoff = 1'000'000;
inline constexpr i64 kLFunctionTerms = 100'000;

namespace detail {

// B_{2j} / (2j)! for j = 1..4.
inline constexpr std::array<double, 4> kBernoulliOverFactorial = {
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};

inline constexpr i64 kSharedPrimeLimit = 2'000'000;

inline const std::vector<i64>& shared_primes() {
  static const auto v = primes_up_to(kSharedPrimeLimit);
  return v;
}

template <class F>
void for_each_prime(i64 limit, F&& f) {
  if (limit <= kSharedPrimeLimit) {
    for (i64 p : shared_primes()) {
      if (p > limit) break;
      f(p);
    }
    return;
  }
  for (i64 p : primes_up_to(limit)) f(p);
}

}  // namespace detail

/// Upper bound for sum_{p > P} (log p)^j p^{-a}, j in {0, 1, 2}, a > 1, by
/// partial summation against pi(x) < 1.25506 x / log x.
inline double prime_tail_bound(double P, double a, int j) {
  if (!(a > 1.0)) throw domain_error("prime_tail_bound: exponent must exceed 1");
  if (P < 17.0) throw domain_error("prime_tail_bound: cutoff too small");
  constexpr double kPiConst = 1.25506;
  const double lp = std::log(P);
  const double base = kPiConst * a * std::pow(P, 1.0 - a);
  switch (j) {
    case 0:
      return base / ((a - 1.0) * lp);
    case 1:
      return base / (a - 1.0);
    case 2:
      return base * (lp / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0)));
    default:
      throw domain_error("prime_tail_bound: log power must be 0, 1 or 2");
  }
}

// ---------------------------------------------------------------------------
// zeta

/// zeta(s) by Euler-Maclaurin with N terms and four Bernoulli corrections.
inline cplx zeta(cplx s, long N = kZetaEulerMaclaurinN) {
  if (s == cplx(1.0, 0.0)) throw pole_error("zeta: pole at s = 1");
  if (!(s.real() > -6.0)) throw domain_error("zeta: Euler-Maclaurin range is Re(s) > -6");
  CompensatedSum<cplx> acc;
  for (long n = N - 1; n >= 1; --n) acc += std::exp(-s * std::log(static_cast<double>(n)));
  const double lnN = std::log(static_cast<double>(N));
  const cplx Ns = std::exp(-s * lnN);  // N^{-s}
  acc += 0.5 * Ns;
  acc += Ns * static_cast<double>(N) / (s - 1.0);
  // + sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}
  cplx rising = s;
  cplx power = Ns / static_cast<double>(N);
  for (std::size_t j = 0; j < detail::kBernoulliOverFactorial.size(); ++j) {
    acc += detail::kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
    power /= static_cast<double>(N) * static_cast<double>(N);
  }
  return acc.value();
}

inline double zeta_real(double s) {
  if (s == 1.0) throw pole_error("zeta_real: pole at s = 1");
  return zeta(cplx(s, 0.0)).real();
}

/// Stieltjes constant gamma_n for 0 <= n <= 4, from Euler-Maclaurin applied to
/// (log k)^n / k:
///   gamma_n = sum_{k<N} f(k) + f(N)/2 - sum_j B_{2j}/(2j)! f^{(2j-1)}(N) - (log N)^{n+1}/(n+1).
inline double stieltjes(int n) {
  if (n < 0) throw domain_error("stieltjes: index must be >= 0");
  if (n > 4) throw unsupported_error("stieltjes: only n <= 4 is supported");
  static const auto table = [] {
    std::array<double, 5> out{};
    constexpr long N = kZetaEulerMaclaurinN;
    const long double lnN = std::log(static_cast<long double>(N));
    for (int order = 0; order <= 4; ++order) {
      long double sum = 0.0L, comp = 0.0L;
      auto add = [&](long double x) {
        const long double t = sum + x;
        comp += (std::fabs(sum) >= std::fabs(x)) ? (sum - t) + x : (x - t) + sum;
        sum = t;
      };
      for (long k = N - 1; k >= 2; --k) {
        const long double lk = std::log(static_cast<long double>(k));
        add(std::pow(lk, order) / static_cast<long double>(k));
      }
      if (order == 0) add(1.0L);
      add(0.5L * std::pow(lnN, order) / static_cast<long double>(N));
      // f^{(m)}(x) = x^{-1-m} P_m(log x) with P_{m+1} = -(m+1) P_m + P_m'
      std::vector<long double> P(static_cast<std::size_t>(order) + 1, 0.0L);
      P[static_cast<std::size_t>(order)] = 1.0L;
      auto eval = [&](const std::vector<long double>& poly) {
        long double v = 0.0L;
        for (std::size_t i = poly.size(); i-- > 0;) v = v * lnN + poly[i];
        return v;
      };
      for (int m = 0; m < 8; ++m) {
        std::vector<long double> next(P.size(), 0.0L);
        for (std::size_t i = 0; i < P.size(); ++i) {
          next[i] -= static_cast<long double>(m + 1) * P[i];
          if (i > 0) next[i - 1] += static_cast<long double>(i) * P[i];
        }
        P = std::move(next);
        const int deriv = m + 1;
        if (deriv % 2 == 1) {
          const long double fd = eval(P) * std::pow(static_cast<long double>(N), -1 - deriv);
          add(-static_cast<long double>(detail::kBernoulliOverFactorial[deriv / 2]) * fd);
        }
      }
      add(-std::pow(lnN, order + 1) / static_cast<long double>(order + 1));
      out[static_cast<std::size_t>(order)] = static_cast<double>(sum + comp);
    }
    return out;
  }();
  return table[static_cast<std::size_t>(n)];
}

/// Error allowance for stieltjes(n): compensated long double accumulation and
/// the final rounding to double; the Euler-Maclaurin remainder is below 1e-30.
inline constexpr double kStieltjesAbsError = 1e-15;

/// zeta(w) = 1/(w-1) + sum_{n<=4} (-1)^n gamma_n (w-1)^n / n!, for |w - 1| <= 0.3.
inline cplx zeta_near_one(cplx w) {
  const cplx v = w - 1.0;
  if (std::abs(v) > 0.3) throw domain_error("zeta_near_one: requires |w - 1| <= 0.3");
  if (v == cplx(0.0)) throw pole_error("zeta_near_one: pole at w = 1");
  cplx acc = 0.0;
  double fact = 1.0;
  for (int n = 4; n >= 0; --n) {
    fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const double c = ((n % 2 == 0) ? 1.0 : -1.0) * stieltjes(n) / fact;
    acc = acc * v + c;
  }
  return 1.0 / v + acc;
}

/// zeta(2s)^3 about s = 1/2 in u = s - 1/2, orders -3..2.
inline LaurentSeries<double> zeta_cubed_laurent() {
  // zeta(1 + 2u) = (2u)^{-1} + sum_n (-1)^n gamma_n 2^n u^n / n!
  std::vector<double> c;
  c.push_back(0.5);
  double fact = 1.0, two = 1.0;
  for (int n = 0; n <= 4; ++n) {
    if (n > 0) {
      fact *= n;
      two *= 2.0;
    }
    c.push_back(((n % 2 == 0) ? 1.0 : -1.0) * stieltjes(n) * two / fact);
  }
  const LaurentSeries<double> z(0.5, -1, c);
  return z * z * z;
}

// ---------------------------------------------------------------------------
// eta

/// Local factor eta_p(s): (1 - 2^{-s})^3 at p = 2, otherwise
/// 1 - 3 p^{-1-s} + (4/p - 1) p^{-2s} - p^{-1-3s}.
inline cplx eta_local(i64 p, cplx s) {
  const double L = std::log(static_cast<double>(p));
  if (p == 2) {
    const cplx u = 1.0 - std::exp(-s * L);
    return u * u * u;
  }
  const double pd = static_cast<double>(p);
  return 1.0 - 3.0 * std::exp(-(1.0 + s) * L) + (4.0 / pd - 1.0) * std::exp(-2.0 * s * L) -
         std::exp(-(1.0 + 3.0 * s) * L);
}

namespace detail {

// Bounds on sum_{p > P} |x_p|, |x_p'|, |x_p''| where eta_p = 1 + x_p, at Re s = sigma.
inline std::array<double, 3> eta_tail_sums(double P, double sigma) {
  std::array<double, 3> t{};
  // the k-th derivative of p^{-c s} is (-c log p)^k p^{-c s}
  constexpr double c2[] = {1.0, 2.0, 4.0};
  constexpr double c3[] = {1.0, 3.0, 9.0};
  for (int j = 0; j <= 2; ++j) {
    t[static_cast<std::size_t>(j)] = 3.0 * prime_tail_bound(P, 1.0 + sigma, j) +
                                     c2[j] * prime_tail_bound(P, 2.0 * sigma, j) +
                                     c3[j] * prime_tail_bound(P, 1.0 + 3.0 * sigma, j);
  }
  return t;
}

}  // namespace detail

/// eta(s) = prod_{p <= cutoff} eta_p(s), with |dropped tail| <= |value| (exp(T) - 1).
inline Estimate<cplx> eta(cplx s, i64 cutoff = kEtaCutoff) {
  if (!(s.real() > 0.5)) throw domain_error("eta: requires Re(s) > 1/2");
  if (cutoff < 17) throw domain_error("eta: cutoff must be >= 17");
  cplx prod = 1.0;
  long count = 0;
  detail::for_each_prime(cutoff, [&](i64 p) {
    prod *= eta_local(p, s);
    ++count;
  });
  const double T = detail::eta_tail_sums(static_cast<double>(cutoff), s.real())[0];
  const double err = std::abs(prod) * (std::expm1(T) + 4e-16 * static_cast<double>(count));
  return {prod, err};
}

/// d^order/ds^order eta(s) at real s, order 0..2, from the analytic
/// logarithmic derivative of the truncated product plus bounds on the tail's
/// contribution.
inline Estimate<double> eta_derivatives(double s, int order, i64 cutoff = kEtaCutoff) {
  if (!(s > 0.5)) throw domain_error("eta_derivatives: requires s > 1/2");
  if (order < 0 || order > 2) throw domain_error("eta_derivatives: order must be 0, 1 or 2");
  if (cutoff < 17) throw domain_error("eta_derivatives: cutoff must be >= 17");
  double value = 1.0;
  CompensatedSum<double> A, B;  // sum a_p, sum (b_p - a_p^2), a = eta'/eta, b = eta''/eta
  long count = 0;
  detail::for_each_prime(cutoff, [&](i64 p) {
    const double L = std::log(static_cast<double>(p));
    double v, d1, d2;
    if (p == 2) {
      const double q = std::exp(-s * L);
      const double u = 1.0 - q;
      v = u * u * u;
      d1 = 3.0 * u * u * L * q;
      d2 = 6.0 * u * (L * q) * (L * q) - 3.0 * u * u * L * L * q;
    } else {
      const double pd = static_cast<double>(p);
      const double c = 4.0 / pd - 1.0;
      const double q1 = std::exp(-(1.0 + s) * L), q2 = std::exp(-2.0 * s * L),
                   q3 = std::exp(-(1.0 + 3.0 * s) * L);
      v = 1.0 - 3.0 * q1 + c * q2 - q3;
      d1 = L * (3.0 * q1 - 2.0 * c * q2 + 3.0 * q3);
      d2 = L * L * (-3.0 * q1 + 4.0 * c * q2 - 9.0 * q3);
    }
    value *= v;
    const double a = d1 / v;
    A += a;
    B += d2 / v - a * a;
    ++count;
  });
  const double a = A.value();
  const double e0 = value, e1 = value * a, e2 = value * (a * a + B.value());

  const auto t = detail::eta_tail_sums(static_cast<double>(cutoff), s);
  const double g = std::expm1(t[0]);
  const double eT = 1.0 + g;
  const double rounding = 4e-16 * static_cast<double>(count);
  switch (order) {
    case 0:
      return {e0, std::abs(e0) * (g + rounding)};
    case 1:
      return {e1, std::abs(e1) * (g + rounding) + std::abs(e0) * eT * 2.0 * t[1]};
    default:
      return {e2, std::abs(e2) * (g + rounding) + 4.0 * std::abs(e1) * eT * t[1] +
                      std::abs(e0) * eT * (8.0 * t[1] * t[1] + 2.0 * t[2])};
  }
}

// ---------------------------------------------------------------------------
// G(s, k)

/// Local factor G_p(s, k) together with its s-derivative.
struct LocalFactor {
  cplx value;
  cplx derivative;
};

namespace detail {

inline LocalFactor script_g_local_jet(i64 p, cplx s, i64 k, const KDecomposition& kd) {
  const double L = std::log(static_cast<double>(p));
  const int chi = kronecker(kd.k1, p);
  const cplx q = std::exp(-(0.5 + s) * L);  // p^{-1/2-s}
  const cplx lead = 1.0 - static_cast<double>(chi) * q;
  const cplx lead_d = static_cast<double>(chi) * L * q;
  if (p == 2) return {lead * lead, 2.0 * lead * lead_d};
  const i64 two_k = 2 * k;
  if (two_k % p != 0) {
    const cplx q1 = std::exp(-(1.0 + 2.0 * s) * L);
    const cplx q2 = std::exp(-(1.5 + 3.0 * s) * L);
    return {1.0 - 3.0 * q1 + 2.0 * chi * q2, 6.0 * L * q1 - 6.0 * static_cast<double>(chi) * L * q2};
  }
  // finite r-sum: G_{2k}(p^r) = 0 for r >= v_p(2k) + 2
  const int a = valuation(two_k, p);
  cplx bracket = 1.0, bracket_d = 0.0;
  for (int r = 1; r <= a + 1; ++r) {
    const double g = gauss_prime_power(two_k, p, r);
    if (g == 0.0) continue;
    const cplx term = static_cast<double>(r + 1) * g * std::exp(-static_cast<double>(r) * (1.0 + s) * L);
    bracket += term;
    bracket_d -= static_cast<double>(r) * L * term;
  }
  const cplx A = lead * lead, Ad = 2.0 * lead * lead_d;
  return {A * bracket, Ad * bracket + A * bracket_d};
}

// Tail sums for p > P, p not dividing 2k: |x| <= 3 p^{-1-2 sigma} + 2 p^{-3/2-3 sigma},
// |x'| <= 6 log p (p^{-1-2 sigma} + p^{-3/2-3 sigma}).
inline std::array<double, 2> script_g_tail_sums(double P, double sigma) {
  return {3.0 * prime_tail_bound(P, 1.0 + 2.0 * sigma, 0) +
              2.0 * prime_tail_bound(P, 1.5 + 3.0 * sigma, 0),
          6.0 * prime_tail_bound(P, 1.0 + 2.0 * sigma, 1) +
              6.0 * prime_tail_bound(P, 1.5 + 3.0 * sigma, 1)};
}

}  // namespace detail

/// G_p(s, k): at p = 2 the squared L-factor correction; at odd p the squared
/// correction times the (finite) r-sum, or its closed form when p does not divide 2k.
inline cplx script_g_local(i64 p, cplx s, i64 k) {
  if (k == 0) throw domain_error("script_g_local: k must be nonzero");
  if (!is_prime(p)) throw domain_error("script_g_local: p must be prime");
  if (!(s.real() > 0.0)) throw domain_error("script_g_local: requires Re(s) > 0");
  return detail::script_g_local_jet(p, s, k, k_decompose(k)).value;
}

/// Product of the primes of 2k exceeding `cutoff` (they are always included exactly).
inline std::vector<i64> large_prime_divisors(i64 k, i64 cutoff) {
  std::vector<i64> out;
  const i64 n = (k < 0 ? -k : k);
  for (const auto& pe : factorize(2 * n).factors)
    if (pe.p > cutoff) out.push_back(pe.p);
  return out;
}

/// G(s, k) = prod_p G_p(s, k), with every p <= cutoff and every p | 2k taken
/// exactly and the generic tail bounded.
inline Estimate<cplx> script_g(cplx s, i64 k, i64 cutoff = kScriptGCutoff) {
  if (k == 0) throw domain_error("script_g: k must be nonzero");
  if (!(s.real() > 0.0)) throw domain_error("script_g: requires Re(s) > 0");
  if (cutoff < 17) throw domain_error("script_g: cutoff must be >= 17");
  const auto kd = k_decompose(k);
  cplx prod = 1.0;
  long count = 0;
  auto take = [&](i64 p) {
    prod *= detail::script_g_local_jet(p, s, k, kd).value;
    ++count;
  };
  detail::for_each_prime(cutoff, take);
  for (i64 p : large_prime_divisors(k, cutoff)) take(p);
  const double T = detail::script_g_tail_sums(static_cast<double>(cutoff), s.real())[0];
  return {prod, std::abs(prod) * (std::expm1(T) + 4e-16 * static_cast<double>(count))};
}

/// dG/ds at real s by complex-step differentiation of the truncated product
/// (G is real on the real axis), plus the bounded tail contribution.
inline Estimate<double> script_g_derivative(double s, i64 k, i64 cutoff = kScriptGCutoff) {
  constexpr double h = 1e-30;
  const auto v = script_g(cplx(s, 0.0), k, cutoff);
  const auto w = script_g(cplx(s, h), k, cutoff);
  const double d = w.value.imag() / h;
  const auto t = detail::script_g_tail_sums(static_cast<double>(cutoff), s);
  const double g = std::expm1(t[0]);
  const double err = std::abs(d) * (g + 4e-14) + std::abs(v.value) * (1.0 + g) * 2.0 * t[1];
  return {d, err};
}

/// G(s, 2k^2), k >= 1, at a fixed real s. Here 2k' = 4k^2 so k1 = 1 and the
/// generic factor 1 - 3 p^{-1-2s} + 2 p^{-3/2-3s} does not depend on k; it is
/// multiplied out once and corrected at the primes of k.
class ScriptGSquareFamily {
 public:
  explicit ScriptGSquareFamily(double s, i64 cutoff = kScriptGFamilyCutoff) : s_(s), cutoff_(cutoff) {
    if (!(s > 0.0)) throw domain_error("ScriptGSquareFamily: requires s > 0");
    if (cutoff < 17) throw domain_error("ScriptGSquareFamily: cutoff must be >= 17");
    const KDecomposition unit{2, 1, 2};  // k = 2: no odd p divides 2k and k1 = 1
    double prod = 1.0;
    CompensatedSum<double> dlog;
    long count = 0;
    detail::for_each_prime(cutoff, [&](i64 p) {
      if (p == 2) return;
      const auto f = detail::script_g_local_jet(p, s, 2, unit);
      prod *= f.value.real();
      dlog += f.derivative.real() / f.value.real();
      ++count;
    });
    base_ = prod;
    base_dlog_ = dlog.value();
    const auto t = detail::script_g_tail_sums(static_cast<double>(cutoff), s);
    tail_ = std::expm1(t[0]) + 4e-16 * static_cast<double>(count);
    tail_d_ = 2.0 * t[1] * (1.0 + std::expm1(t[0]));
  }

  double s() const noexcept { return s_; }
  i64 cutoff() const noexcept { return cutoff_; }

  struct Value {
    Estimate<double> value;
    Estimate<double> derivative;
  };

  Value evaluate(i64 k) const {
    if (k < 1) throw domain_error("ScriptGSquareFamily: k must be >= 1");
    const i64 kk = 2 * k * k;
    const auto kd = k_decompose(kk);
    const KDecomposition unit{2, 1, 2};
    // p = 2 factor (1 - 2^{-1/2-s})^2
    const auto two = detail::script_g_local_jet(2, s_, kk, kd);
    double v = base_ * two.value.real();
    double dlog = base_dlog_ + two.derivative.real() / two.value.real();
    for (const auto& pe : factorize(k).factors) {
      if (pe.p == 2) continue;
      const auto loc = detail::script_g_local_jet(pe.p, s_, kk, kd);
      if (loc.value.real() == 0.0) throw domain_error("ScriptGSquareFamily: vanishing local factor");
      v *= loc.value.real();
      dlog += loc.derivative.real() / loc.value.real();
      if (pe.p <= cutoff_) {
        const auto gen = detail::script_g_local_jet(pe.p, s_, 2, unit);
        v /= gen.value.real();
        dlog -= gen.derivative.real() / gen.value.real();
      }
    }
    const double d = v * dlog;
    return {{v, std::abs(v) * tail_}, {d, std::abs(d) * tail_ + std::abs(v) * tail_d_}};
  }

 private:
  double s_;
  i64 cutoff_;
  double base_ = 1.0;
  double base_dlog_ = 0.0;
  double tail_ = 0.0;
  double tail_d_ = 0.0;
};

// ---------------------------------------------------------------------------
// L(sigma, chi_{k1})

/// Period of n -> (k1 / n) on odd n, for squarefree k1. For k1 = 1 mod 4 or k1
/// even it is also a period on all n; for k1 = 3 mod 4, (k1 / 2) = +-1 breaks it.
inline i64 kronecker_period(i64 k1) {
  const i64 a = k1 < 0 ? -k1 : k1;
  if (a == 1) return k1 == 1 ? 1 : 4;
  return ((k1 % 4) + 4) % 4 == 1 ? a : 4 * a;
}

/// L(sigma, chi_{k1}) = sum_n (k1/n) n^{-sigma} truncated at N, sigma > 1.
/// Tail: N^{1-sigma}/(sigma-1) for k1 = 1; 2 B N^{-sigma} when (k1/.) has
/// period B on all n (B bounds every partial sum). For k1 = 3 mod 4 write
/// n = 2^j m with m odd; each odd-m tail is at most 2 B (N/2^j)^{-sigma} and the
/// j with 2^j > N add at most N^{-sigma} zeta(sigma).
inline Estimate<double> l_function(double sigma, i64 k1, i64 N = kLFunctionTerms) {
  if (!(sigma > 1.0)) throw unsupported_error("l_function: only sigma > 1 is supported");
  if (k1 == 0 || squarefree_decompose(k1).square != 1)
    throw domain_error("l_function: k1 must be a nonzero squarefree integer");
  if (N < 1) throw domain_error("l_function: N must be >= 1");
  CompensatedSum<double> acc;
  for (i64 n = N; n >= 1; --n) {
    const int chi = kronecker(k1, n);
    if (chi != 0) acc += chi * std::pow(static_cast<double>(n), -sigma);
  }
  const double Nd = static_cast<double>(N);
  const double B = static_cast<double>(kronecker_period(k1));
  double tail;
  if (k1 == 1)
    tail = std::pow(Nd, 1.0 - sigma) / (sigma - 1.0);
  else if (((k1 % 4) + 4) % 4 == 3)
    tail = (2.0 * B * (std::floor(std::log2(Nd)) + 1.0) + zeta_real(sigma)) * std::pow(Nd, -sigma);
  else
    tail = 2.0 * B * std::pow(Nd, -sigma);
  return {acc.value(), tail + 1e-16 * std::abs(acc.value()) * 8.0};
}

}  // namespace quadmean
