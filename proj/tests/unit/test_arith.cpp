#include <gtest/gtest.h>

#include <random>

#include "quadmean/arith.hpp"

using namespace quadmean;

namespace {

std::vector<PrimePower> fac(i64 n) { return factorize(n).factors; }

// O(n) divisor enumeration, independent of any factorization.
i64 count_divisors(i64 n) {
  i64 c = 0;
  for (i64 d = 1; d <= n; ++d) c += (n % d == 0);
  return c;
}

// Legendre symbol by Euler's criterion, for odd primes p.
int euler_criterion(i64 a, i64 p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  i64 r = 1, b = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

}  // namespace

TEST(SpfSieve, SmallTable) {
  const auto t = spf_sieve(10);
  EXPECT_EQ(t[9], 3);
  EXPECT_EQ(t[7], 7);
  EXPECT_EQ(t[6], 2);
}

TEST(SpfSieve, CapIsEnforced) {
  EXPECT_THROW(spf_sieve(1000, 100), resource_error);
  EXPECT_THROW(spf_sieve(1), domain_error);
}

TEST(Factorize, Examples) {
  EXPECT_TRUE(fac(1).empty());
  EXPECT_EQ(fac(12), (std::vector<PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_EQ(fac(360), (std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_THROW(factorize(0), domain_error);
}

TEST(Factorize, LargeInputsRoundTrip) {
  for (i64 n : {999'999'999'989LL, 1'000'000'007LL * 999'983LL, (1LL << 40) * 3, 600'851'475'143LL}) {
    i64 prod = 1, last = 0;
    for (const auto& [p, e] : fac(n)) {
      EXPECT_GT(p, last);
      EXPECT_TRUE(is_prime(p));
      last = p;
      for (int i = 0; i < e; ++i) prod *= p;
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(Kronecker, Examples) {
  for (i64 n = 1; n < 50; ++n) EXPECT_EQ(kronecker(1, n), 1);
  EXPECT_EQ(kronecker(3, 5), -1);
  EXPECT_EQ(kronecker(3, 3), 0);
  EXPECT_EQ(kronecker(2, 15), 1);
}

TEST(Kronecker, MatchesEulerCriterionAtPrimes) {
  for (i64 p : {3, 5, 7, 11, 13, 101, 997})
    for (i64 a = -60; a <= 60; ++a) EXPECT_EQ(kronecker(a, p), euler_criterion(a, p)) << a << " " << p;
}

TEST(Kronecker, ConventionsAtTwoAndMinusOne) {
  // (a/2) from a mod 8
  for (i64 a = -20; a <= 20; ++a) {
    const i64 r = ((a % 8) + 8) % 8;
    const int want = (a % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
    EXPECT_EQ(kronecker(a, 2), want);
    EXPECT_EQ(kronecker(a, -1), a < 0 ? -1 : 1);
  }
}

TEST(Kronecker, MultiplicativeInTopArgument) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> top(-500, 500), bottom(0, 400);
  for (int i = 0; i < 2000; ++i) {
    const i64 a = top(rng), b = top(rng), n = 2 * bottom(rng) + 1;
    EXPECT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
  }
}

TEST(Kronecker, PeriodicModOddN) {
  for (i64 n = 1; n < 200; n += 2)
    for (i64 m = -50; m < 50; ++m) EXPECT_EQ(kronecker(m, n), kronecker(m + n, n));
}

TEST(DivisorCount, Examples) {
  EXPECT_EQ(divisor_count(factorize(1)), 1);
  EXPECT_EQ(divisor_count(factorize(12)), 6);
  for (i64 p : {2, 3, 97, 7919}) EXPECT_EQ(divisor_count(factorize(p)), 2);
}

TEST(PhiMobius, Examples) {
  EXPECT_EQ(euler_phi(factorize(9)), 6);
  EXPECT_EQ(mobius(factorize(15)), 1);
  EXPECT_EQ(mobius(factorize(12)), 0);
}

TEST(ArithmeticTables, AgreeWithFactorizationUpTo1e5) {
  const i64 N = 100'000;
  const auto t = arithmetic_tables(N);
  for (i64 n = 1; n <= N; ++n) {
    const auto f = factorize(n);
    ASSERT_EQ(t.d[n], divisor_count(f)) << n;
    ASSERT_EQ(t.phi[n], euler_phi(f)) << n;
    ASSERT_EQ(t.mu[n], mobius(f)) << n;
  }
  const auto d = divisor_table(500);
  for (i64 n = 1; n <= 500; ++n) EXPECT_EQ(d[n], count_divisors(n));
}

TEST(SquarefreeDecompose, RoundTrips) {
  for (i64 n = -3000; n <= 3000; ++n) {
    if (n == 0) continue;
    const auto [s, b] = squarefree_decompose(n);
    EXPECT_EQ(s * s * b, n);
    EXPECT_NE(mobius(factorize(b < 0 ? -b : b)), 0);
  }
  EXPECT_THROW(squarefree_decompose(0), domain_error);
}

TEST(KDecompose, Examples) {
  auto check = [](i64 k, i64 k1, i64 k2) {
    const auto d = k_decompose(k);
    EXPECT_EQ(d.k1, k1);
    EXPECT_EQ(d.k2, k2);
    EXPECT_EQ(2 * k, d.k1 * d.k2 * d.k2);
  };
  check(1, 2, 1);
  check(2, 1, 2);
  check(-18, -1, 6);
  EXPECT_THROW(k_decompose(0), domain_error);
}
