#pragma once

// S(X, Y)  = sum_{m <= X odd} sum_{n <= Y odd} (m/n) d(n)
// S~(X, Y) = sum_{m odd} sum_{n odd} (m/n) d(n) Phi(n/Y) W(m/X)
//
// The exact paths accumulate in 128-bit integers. The fast path uses that
// m -> (m/n) on odd m has period 2n with period sum phi(n) for square n and 0
// otherwise, so each n costs O(min(X, 2n)) symbol evaluations.

#include <algorithm>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "quadmean/arith.hpp"
#include "quadmean/error.hpp"
#include "quadmean/quadrature.hpp"
#include "quadmean/smoothing.hpp"

namespace quadmean {

inline constexpr i64 kNaiveWorkCap = 100'000'000;  // X * Y
inline constexpr i64 kFastYCap = 1'000'000;
inline constexpr i64 kSmoothedXPerThread = 1'000'000;

enum class SumMode { naive, fast, smoothed };

inline const char* to_string(SumMode m) {
  switch (m) {
    case SumMode::naive:
      return "naive";
    case SumMode::fast:
      return "fast";
    case SumMode::smoothed:
      return "smoothed";
  }
  return "?";
}

struct SumQuery {
  i64 X = 1;
  i64 Y = 1;
  SumMode mode = SumMode::fast;
  double U = 0.0;  // smoothed mode only
  int threads = 1;
  i64 y_cap = kFastYCap;
};

struct SumResult {
  SumMode mode = SumMode::fast;
  i64 X = 0, Y = 0;
  double U = 0.0;
  i128 value_exact = 0;    // naive / fast
  double value_real = 0.0;  // smoothed
  double elapsed_ms = 0.0;
  int partition_count = 1;
};

/// Decimal rendering of a 128-bit integer.
inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

/// sum_{m <= X, m odd} (m/n) for odd n >= 1.
inline i64 inner_char_sum(i64 n, i64 X) {
  require_odd_modulus(n, "inner_char_sum");
  if (X <= 0) return 0;
  if (n == 1) return (X + 1) / 2;
  const i64 period = 2 * n;
  const i64 full = X / period;
  const i64 rest = X % period;
  i64 total = 0;
  if (full > 0 && is_square(n)) total = full * euler_phi(factorize(n));
  for (i64 m = 1; m <= rest; m += 2) total += jacobi(m, n);
  return total;
}

namespace detail {

inline void check_query(const SumQuery& q) {
  if (q.X < 1 || q.Y < 1) throw domain_error("sum: X and Y must be positive");
  if (q.threads < 1) throw domain_error("sum: threads must be >= 1");
}

// Split odd n in [1, Y] into `parts` contiguous ranges of roughly equal cost.
inline std::vector<i64> partition_by_cost(i64 Y, int parts, auto cost) {
  std::vector<double> prefix;
  prefix.reserve(static_cast<std::size_t>(Y / 2 + 1));
  double acc = 0.0;
  for (i64 n = 1; n <= Y; n += 2) {
    acc += cost(n);
    prefix.push_back(acc);
  }
  std::vector<i64> bounds = {1};
  for (int i = 1; i < parts; ++i) {
    const double target = acc * static_cast<double>(i) / static_cast<double>(parts);
    const auto it = std::lower_bound(prefix.begin(), prefix.end(), target);
    i64 n = 2 * static_cast<i64>(it - prefix.begin()) + 1;
    n = std::max(n, bounds.back());
    bounds.push_back(n);
  }
  bounds.push_back(Y % 2 == 1 ? Y + 2 : Y + 1);  // exclusive end, odd
  return bounds;
}

template <class F>
void run_parallel(int parts, F&& body) {
  if (parts == 1) {
    body(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(parts));
  for (int i = 0; i < parts; ++i) pool.emplace_back([&, i] { body(i); });
  for (auto& t : pool) t.join();
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Literal double loop; the oracle path.
inline SumResult s_naive(const SumQuery& q) {
  detail::check_query(q);
  if (static_cast<i128>(q.X) * q.Y > kNaiveWorkCap)
    throw resource_error("s_naive: X * Y exceeds the oracle cap of 1e8");
  const auto start = std::chrono::steady_clock::now();
  std::vector<i64> d(static_cast<std::size_t>(q.Y) + 1, 0);
  for (i64 n = 1; n <= q.Y; n += 2) d[static_cast<std::size_t>(n)] = divisor_count(factorize(n));
  i128 total = 0;
  for (i64 m = 1; m <= q.X; m += 2)
    for (i64 n = 1; n <= q.Y; n += 2) total += kronecker(m, n) * d[static_cast<std::size_t>(n)];
  SumResult r;
  r.mode = SumMode::naive;
  r.X = q.X;
  r.Y = q.Y;
  r.value_exact = total;
  r.elapsed_ms = detail::elapsed_ms(start);
  return r;
}

/// sum_{n <= Y odd} d(n) inner_char_sum(n, X), parallel over cost-balanced n-ranges.
inline SumResult s_fast(const SumQuery& q) {
  detail::check_query(q);
  if (q.Y > q.y_cap) throw resource_error("s_fast: Y exceeds the configured cap");
  const auto start = std::chrono::steady_clock::now();
  const auto d = divisor_table(q.Y);
  const i64 X = q.X;
  const int parts = static_cast<int>(std::min<i64>(q.threads, (q.Y + 1) / 2));
  const auto bounds =
      detail::partition_by_cost(q.Y, parts, [X](i64 n) { return static_cast<double>(X % (2 * n)) + 1.0; });
  std::vector<i128> partial(static_cast<std::size_t>(parts), 0);
  detail::run_parallel(parts, [&](int i) {
    i128 acc = 0;
    for (i64 n = bounds[static_cast<std::size_t>(i)]; n < bounds[static_cast<std::size_t>(i) + 1]; n += 2)
      acc += static_cast<i128>(d[static_cast<std::size_t>(n)]) * inner_char_sum(n, X);
    partial[static_cast<std::size_t>(i)] = acc;
  });
  i128 total = 0;
  for (const auto& p : partial) total += p;
  SumResult r;
  r.mode = SumMode::fast;
  r.X = q.X;
  r.Y = q.Y;
  r.value_exact = total;
  r.elapsed_ms = detail::elapsed_ms(start);
  r.partition_count = parts;
  return r;
}

/// The smoothed sum. Per n, the symbol table over residues mod n is built once
/// and discarded; per-n contributions are summed in ascending n, so the result
/// does not depend on the thread count.
inline SumResult s_smoothed(const SumQuery& q, const SmoothingSpec& spec) {
  detail::check_query(q);
  if (q.X > kSmoothedXPerThread * q.threads)
    throw resource_error("s_smoothed: X exceeds the per-thread work budget");
  if (q.Y > q.y_cap) throw resource_error("s_smoothed: Y exceeds the configured cap");
  const auto start = std::chrono::steady_clock::now();
  const auto d = divisor_table(q.Y);
  const double Xd = static_cast<double>(q.X), Yd = static_cast<double>(q.Y);
  // W(m/X) vanishes for m >= X (or m > X for the unit hook)
  std::vector<double> w(static_cast<std::size_t>(q.X) + 1, 0.0);
  for (i64 m = 1; m <= q.X; m += 2) w[static_cast<std::size_t>(m)] = mollifier_eval(static_cast<double>(m) / Xd, spec);

  const i64 count = (q.Y + 1) / 2;
  std::vector<double> contrib(static_cast<std::size_t>(count), 0.0);
  const int parts = static_cast<int>(std::min<i64>(q.threads, count));
  const auto bounds = detail::partition_by_cost(q.Y, parts, [&](i64 n) { return Xd / 2.0 + static_cast<double>(n); });
  detail::run_parallel(parts, [&](int i) {
    std::vector<signed char> chi;
    for (i64 n = bounds[static_cast<std::size_t>(i)]; n < bounds[static_cast<std::size_t>(i) + 1]; n += 2) {
      const double phi = mollifier_eval(static_cast<double>(n) / Yd, spec);
      if (phi == 0.0) continue;
      chi.assign(static_cast<std::size_t>(n), 0);
      for (i64 a = 0; a < n; ++a) chi[static_cast<std::size_t>(a)] = static_cast<signed char>(n == 1 ? 1 : jacobi(a, n));
      CompensatedSum<double> acc;
      for (i64 m = 1; m <= q.X; m += 2) {
        const double wm = w[static_cast<std::size_t>(m)];
        if (wm != 0.0) acc += chi[static_cast<std::size_t>(m % n)] * wm;
      }
      contrib[static_cast<std::size_t>(n / 2)] = static_cast<double>(d[static_cast<std::size_t>(n)]) * phi * acc.value();
    }
  });
  CompensatedSum<double> total;
  for (double c : contrib) total += c;
  SumResult r;
  r.mode = SumMode::smoothed;
  r.X = q.X;
  r.Y = q.Y;
  r.U = spec.U();
  r.value_real = total.value();
  r.elapsed_ms = detail::elapsed_ms(start);
  r.partition_count = parts;
  return r;
}

}  // namespace quadmean
