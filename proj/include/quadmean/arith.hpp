#pragma once

// Exact integer primitives: sieves, factorization, the Kronecker symbol,
// d / phi / mu and square-free decompositions.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "quadmean/error.hpp"

namespace quadmean {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// Default upper limit for sieve tables (entries, not bytes).
inline constexpr i64 kDefaultSieveCap = 50'000'000;

struct PrimePower {
  i64 p;
  int e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod p^e with primes strictly increasing and e >= 1. n = 1 has no factors.
struct Factorization {
  i64 n = 1;
  std::vector<PrimePower> factors;
};

/// Floor of the square root, exact for all non-negative 64-bit inputs.
inline i64 isqrt(i64 n) {
  if (n < 0) throw domain_error("isqrt of negative number");
  auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline void require_odd_modulus(i64 k, const char* who) {
  if (k < 1 || k % 2 == 0) throw domain_error(std::string(who) + ": modulus must be odd and >= 1");
}

inline bool is_square(i64 n) {
  if (n < 0) return false;
  const i64 r = isqrt(n);
  return r * r == n;
}

/// Exponent of p in m; m must be nonzero.
inline int valuation(i64 m, i64 p) {
  if (m == 0) throw domain_error("valuation of zero");
  int a = 0;
  while (m % p == 0) {
    m /= p;
    ++a;
  }
  return a;
}

/// Smallest-prime-factor table for 0..limit, immutable once built.
class SpfSieve {
 public:
  explicit SpfSieve(i64 limit, i64 cap = kDefaultSieveCap) : limit_(limit) {
    if (limit < 2) throw domain_error("spf_sieve: limit must be >= 2");
    if (limit > cap)
      throw resource_error("spf_sieve: limit " + std::to_string(limit) + " exceeds cap " +
                           std::to_string(cap));
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    for (i64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes_.push_back(i);
      }
      for (i64 p : primes_) {
        if (p > spf_[i] || p * i > limit) break;
        spf_[p * i] = static_cast<std::uint32_t>(p);
      }
    }
  }

  i64 limit() const noexcept { return limit_; }
  i64 operator[](i64 n) const { return spf_[static_cast<std::size_t>(n)]; }
  const std::vector<i64>& primes() const noexcept { return primes_; }

  Factorization factorize(i64 n) const {
    if (n <= 0) throw domain_error("factorize: n must be positive");
    if (n > limit_) throw domain_error("factorize: n beyond sieve limit");
    Factorization f{n, {}};
    while (n > 1) {
      const i64 p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.factors.push_back({p, e});
    }
    return f;
  }

 private:
  i64 limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<i64> primes_;
};

inline SpfSieve spf_sieve(i64 limit, i64 cap = kDefaultSieveCap) { return SpfSieve(limit, cap); }

/// Primes up to limit by the sieve of Eratosthenes.
inline std::vector<i64> primes_up_to(i64 limit) {
  std::vector<i64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (i64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

namespace detail {
inline const std::vector<i64>& small_primes() {
  static const std::vector<i64> primes = primes_up_to(1'000'000);
  return primes;
}
}  // namespace detail

/// Factorization by trial division with sieved primes up to sqrt(n).
inline Factorization factorize(i64 n) {
  if (n <= 0) throw domain_error("factorize: n must be positive");
  Factorization f{n, {}};
  auto take = [&](i64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };
  for (i64 p : detail::small_primes()) {
    if (p * p > n) break;
    take(p);
  }
  // Inputs beyond 10^12 continue with odd trial divisors.
  for (i64 d = 1'000'001; d * d <= n; d += 2) take(d);
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].e == 1;
}

/// d(n) = prod (e_i + 1).
inline i64 divisor_count(const Factorization& f) {
  i64 d = 1;
  for (const auto& [p, e] : f.factors) d *= e + 1;
  return d;
}

inline i64 euler_phi(const Factorization& f) {
  i64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (int i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

inline int mobius(const Factorization& f) {
  int mu = 1;
  for (const auto& pe : f.factors) {
    if (pe.e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

/// d, phi and mu for 0..limit from one linear sieve. Index 0 is unused.
struct ArithmeticTables {
  std::vector<std::int32_t> d;
  std::vector<i64> phi;
  std::vector<std::int8_t> mu;
};

inline ArithmeticTables arithmetic_tables(i64 limit, i64 cap = kDefaultSieveCap) {
  if (limit < 1) throw domain_error("arithmetic_tables: limit must be >= 1");
  if (limit > cap) throw resource_error("arithmetic_tables: limit exceeds cap");
  const auto n = static_cast<std::size_t>(limit) + 1;
  ArithmeticTables t{std::vector<std::int32_t>(n, 0), std::vector<i64>(n, 0),
                     std::vector<std::int8_t>(n, 0)};
  // exponent of the least prime in i, needed to update d multiplicatively
  std::vector<std::int32_t> least_exp(n, 0);
  std::vector<i64> primes;
  t.d[1] = 1;
  t.phi[1] = 1;
  t.mu[1] = 1;
  std::vector<bool> composite(n, false);
  for (i64 i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      t.d[i] = 2;
      t.phi[i] = i - 1;
      t.mu[i] = -1;
      least_exp[i] = 1;
    }
    for (i64 p : primes) {
      const i64 ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        least_exp[ip] = least_exp[i] + 1;
        t.d[ip] = t.d[i] / (least_exp[i] + 1) * (least_exp[i] + 2);
        t.phi[ip] = t.phi[i] * p;
        t.mu[ip] = 0;
        break;
      }
      least_exp[ip] = 1;
      t.d[ip] = t.d[i] * 2;
      t.phi[ip] = t.phi[i] * (p - 1);
      t.mu[ip] = static_cast<std::int8_t>(-t.mu[i]);
    }
  }
  return t;
}

inline std::vector<std::int32_t> divisor_table(i64 limit, i64 cap = kDefaultSieveCap) {
  return arithmetic_tables(limit, cap).d;
}

/// Jacobi symbol (m/n) for odd n > 0.
inline int jacobi(i64 m, i64 n) {
  if (n <= 0 || n % 2 == 0) throw domain_error("jacobi: n must be odd and positive");
  m %= n;
  if (m < 0) m += n;
  int t = 1;
  while (m != 0) {
    while (m % 2 == 0) {
      m /= 2;
      const i64 r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(m, n);
    if (m % 4 == 3 && n % 4 == 3) t = -t;
    m %= n;
  }
  return n == 1 ? t : 0;
}

/// Kronecker symbol (m/n) for all (m, n) != (0, 0).
///
/// Conventions: (m/1) = 1; (m/2) = 0 for even m, +1 for m = +-1 mod 8 and -1 for
/// m = +-3 mod 8; (m/-1) = -1 for m < 0 and +1 otherwise; (m/0) = [|m| = 1].
inline int kronecker(i64 m, i64 n) {
  if (m == 0 && n == 0) throw domain_error("kronecker: (0/0) is undefined");
  if (n == 0) return (m == 1 || m == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (m < 0) sign = -1;
  }
  if (m % 2 == 0 && n % 2 == 0) return 0;
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos % 2 == 1) {
    const i64 r = ((m % 8) + 8) % 8;
    if (r == 3 || r == 5) sign = -sign;
  }
  if (n == 1) return sign;
  return sign * jacobi(m, n);
}

/// |n| = square^2 * |kernel|, kernel square-free and carrying the sign of n.
struct SquarefreeDecomposition {
  i64 square;
  i64 kernel;
};

inline SquarefreeDecomposition squarefree_decompose(i64 n) {
  if (n == 0) throw domain_error("squarefree_decompose: zero input");
  const auto f = factorize(n < 0 ? -n : n);
  i64 s = 1;
  i64 b = 1;
  for (const auto& [p, e] : f.factors) {
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2 == 1) b *= p;
  }
  return {s, n < 0 ? -b : b};
}

/// 2k = k1 * k2^2 with k1 square-free (sign of k) and k2 > 0.
struct KDecomposition {
  i64 k;
  i64 k1;
  i64 k2;
};

inline KDecomposition k_decompose(i64 k) {
  if (k == 0) throw domain_error("k_decompose: k must be nonzero");
  const auto sd = squarefree_decompose(2 * k);
  return {k, sd.kernel, sd.square};
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

}  // namespace quadmean
