#pragma once

// Numerical checks of the supporting lemmas: twisted Poisson summation, the
// quadratic large sieve, and the size of the smoothing gap |S - S~|.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "quadmean/arith.hpp"
#include "quadmean/error.hpp"
#include "quadmean/gauss.hpp"
#include "quadmean/smoothing.hpp"
#include "quadmean/sums.hpp"

namespace quadmean {

enum class CheckStatus { pass, fail, inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

struct CheckReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;  // in insertion order
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio_or_gap = 0.0;
  double tolerance_or_bound = 0.0;
  bool pass = false;
  CheckStatus status = CheckStatus::fail;
  std::vector<std::pair<std::string, double>> extra;

  double parameter(const std::string& key) const {
    for (const auto& [k, v] : parameters)
      if (k == key) return v;
    throw domain_error("CheckReport: no parameter " + key);
  }
};

// ---------------------------------------------------------------------------
// Poisson summation

struct PoissonOptions {
  double tolerance = 1e-6;    // allowed |LHS - RHS| beyond the dropped tail
  long long k_max = 0;        // 0: smallest K whose tail bound is below tolerance / 10
  long long k_limit = 1'000'000;
};

namespace detail {

// Bound on sum_{|k| > K} |G_k(n)| |W~(k xi0)| with |G_k(n)| <= n and the
// j-fold decay envelope, sum_{k > K} k^{-j} <= K^{1-j} / (j - 1).
inline double poisson_tail_bound(long long K, double xi0, double n, const SmoothingSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 2; j <= static_cast<int>(kMaxDerivative); ++j) {
    const double env = std::sqrt(2.0) * mollifier_derivative_norm(j, spec) * std::pow(2.0 * kPi * xi0, -j);
    best = std::min(best, env * std::pow(static_cast<double>(K), 1.0 - j) / (j - 1.0));
  }
  return 2.0 * n * best;
}

}  // namespace detail

/// sum_{d odd} (d/n) W(d/X)  vs  (X/2n)(2/n) sum_k (-1)^k G_k(n) W~(kX/2n).
inline CheckReport poisson_check(i64 n, double X, const SmoothingSpec& spec, const PoissonOptions& opt = {}) {
  require_odd_modulus(n, "poisson_check");
  if (!(X > 0.0)) throw domain_error("poisson_check: X must be positive");
  const double nd = static_cast<double>(n);
  const double xi0 = X / (2.0 * nd);
  const double scale = xi0 * kronecker(2, n);

  long long K = opt.k_max;
  if (K <= 0) {
    K = 1;
    while (scale != 0.0 && std::abs(scale) * detail::poisson_tail_bound(K, xi0, nd, spec) > 0.1 * opt.tolerance) {
      if (K >= opt.k_limit) break;
      K *= 2;
    }
  }
  const double tail = std::abs(scale) * detail::poisson_tail_bound(K, xi0, nd, spec);

  CompensatedSum<double> lhs;
  const i64 d_end = static_cast<i64>(std::floor(X));
  for (i64 d = 1; d <= d_end; d += 2) {
    const double w = mollifier_eval(static_cast<double>(d) / X, spec);
    if (w != 0.0) lhs += (n == 1 ? 1 : jacobi(d, n)) * w;
  }

  CompensatedSum<double> rhs;
  double quad_err = 0.0;
  auto term = [&](long long k) {
    const double g = gauss_fast(k, n).re;
    if (g == 0.0) return;
    const auto w = w_tilde(static_cast<double>(k) * xi0, spec);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    rhs += sign * g * w.value;
    quad_err += std::abs(g) * w.abs_error;
  };
  term(0);
  for (long long k = 1; k <= K; ++k) {
    term(k);
    term(-k);
  }
  const double rhs_value = scale * rhs.value();
  const double bound = tail + std::abs(scale) * quad_err;

  CheckReport r;
  r.name = "poisson";
  r.parameters = {{"n", nd}, {"X", X}, {"U", spec.U()}, {"k_max", static_cast<double>(K)}};
  r.lhs = lhs.value();
  r.rhs = rhs_value;
  r.ratio_or_gap = std::abs(r.lhs - r.rhs);
  r.tolerance_or_bound = opt.tolerance + bound;
  r.extra = {{"tail_bound", tail}, {"quadrature_error", std::abs(scale) * quad_err}};
  if (tail > opt.tolerance) {
    r.status = CheckStatus::inconclusive;
    r.pass = false;
  } else {
    r.pass = r.ratio_or_gap <= r.tolerance_or_bound;
    r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Large sieve

enum class CoefficientLaw { sign, normal };

inline const char* to_string(CoefficientLaw l) { return l == CoefficientLaw::sign ? "sign" : "normal"; }

struct LargeSieveResult {
  CheckReport report;           // worst trial
  std::vector<double> ratios;  // per trial, in draw order
};

inline constexpr i64 kLargeSieveCap = 2000;

namespace detail {

inline std::vector<i64> odd_squarefree_up_to(i64 limit) {
  std::vector<i64> out;
  for (i64 m = 1; m <= limit; m += 2)
    if (mobius(factorize(m)) != 0) out.push_back(m);
  return out;
}

// Uniform on (0, 1) from the top 53 bits.
inline double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Odd squarefree integers up to `limit`, ascending: the index set of a_n below.
inline std::vector<i64> large_sieve_support(i64 limit) { return detail::odd_squarefree_up_to(limit); }

namespace detail {

struct SieveMatrix {
  std::vector<i64> ms, ns;
  std::vector<signed char> chi;  // (n/m), row-major in m
};

inline SieveMatrix sieve_matrix(i64 M, i64 N) {
  if (M < 1 || N < 1) throw domain_error("large_sieve: M and N must be positive");
  if (M > kLargeSieveCap || N > kLargeSieveCap) throw resource_error("large_sieve: M, N must be <= 2000");
  SieveMatrix s{odd_squarefree_up_to(M), odd_squarefree_up_to(N), {}};
  s.chi.resize(s.ms.size() * s.ns.size());
  for (std::size_t i = 0; i < s.ms.size(); ++i)
    for (std::size_t j = 0; j < s.ns.size(); ++j)
      s.chi[i * s.ns.size() + j] = static_cast<signed char>(s.ms[i] == 1 ? 1 : jacobi(s.ns[j], s.ms[i]));
  return s;
}

// {sum*_m |sum*_n a_n (n/m)|^2, (M + N) sum |a_n|^2}
inline std::pair<double, double> sieve_sides(const SieveMatrix& s, i64 M, i64 N, const std::vector<double>& a) {
  double norm = 0.0;
  for (double x : a) norm += x * x;
  double lhs = 0.0;
  for (std::size_t i = 0; i < s.ms.size(); ++i) {
    double inner = 0.0;
    const signed char* row = &s.chi[i * s.ns.size()];
    for (std::size_t j = 0; j < s.ns.size(); ++j) inner += a[j] * row[j];
    lhs += inner * inner;
  }
  return {lhs, static_cast<double>(M + N) * norm};
}

}  // namespace detail

/// The large-sieve quotient for given coefficients, a[j] attached to the j-th
/// element of large_sieve_support(N).
inline CheckReport large_sieve_quotient(i64 M, i64 N, const std::vector<double>& a, double bound = 10.0) {
  const auto s = detail::sieve_matrix(M, N);
  if (a.size() != s.ns.size()) throw domain_error("large_sieve_quotient: one coefficient per odd squarefree n <= N");
  const auto [lhs, denom] = detail::sieve_sides(s, M, N, a);
  CheckReport r;
  r.name = "large-sieve";
  r.parameters = {{"M", static_cast<double>(M)}, {"N", static_cast<double>(N)}};
  r.lhs = lhs;
  r.rhs = denom;
  r.ratio_or_gap = denom > 0.0 ? lhs / denom : 0.0;
  r.tolerance_or_bound = bound;
  r.pass = r.ratio_or_gap <= bound;
  r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// max over trials of sum*_m |sum*_n a_n (n/m)|^2 / ((M + N) sum |a_n|^2), with
/// m, n odd squarefree. Draws come from mt19937_64(seed), in a fixed order.
inline LargeSieveResult large_sieve_ratio(i64 M, i64 N, int trials, std::uint64_t seed,
                                          CoefficientLaw law = CoefficientLaw::sign, double bound = 10.0) {
  if (trials < 1) throw domain_error("large_sieve_ratio: trials must be >= 1");
  const auto s = detail::sieve_matrix(M, N);

  std::mt19937_64 rng(seed);
  std::vector<double> a(s.ns.size());
  LargeSieveResult out;
  double best = -1.0;
  for (int t = 0; t < trials; ++t) {
    if (law == CoefficientLaw::sign) {
      for (auto& x : a) x = (rng() >> 63) ? 1.0 : -1.0;
    } else {
      for (std::size_t j = 0; j < a.size(); j += 2) {
        const double r = std::sqrt(-2.0 * std::log(detail::unit_open(rng)));
        const double th = 2.0 * kPi * detail::unit_open(rng);
        a[j] = r * std::cos(th);
        if (j + 1 < a.size()) a[j + 1] = r * std::sin(th);
      }
    }
    const auto [lhs, denom] = detail::sieve_sides(s, M, N, a);
    const double ratio = denom > 0.0 ? lhs / denom : 0.0;
    out.ratios.push_back(ratio);
    if (ratio > best) {
      best = ratio;
      out.report.lhs = lhs;
      out.report.rhs = denom;
    }
  }
  auto& r = out.report;
  r.name = "large-sieve";
  r.parameters = {{"M", static_cast<double>(M)},
                  {"N", static_cast<double>(N)},
                  {"trials", static_cast<double>(trials)},
                  {"seed", static_cast<double>(seed)},
                  {"normal_law", law == CoefficientLaw::normal ? 1.0 : 0.0}};
  r.ratio_or_gap = best;
  r.tolerance_or_bound = bound;
  r.pass = best <= bound;
  r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing gap

struct SmoothingGapResult {
  std::vector<CheckReport> reports;  // one per U, in grid order
  double max_ratio = 0.0;
  double median_step = 0.0;  // median of ratio[i+1] / ratio[i]
};

/// |S(X,Y) - S~(X,Y)| / ((XY)^eps (X Y^{1/2} + Y X^{1/2}) U^{-1/2}) for each U.
inline SmoothingGapResult smoothing_gap(i64 X, i64 Y, const std::vector<double>& U_grid, int threads = 1,
                                        double eps = 0.05, double bound = 10.0,
                                        QuadratureConfig quadrature = {}) {
  if (U_grid.empty()) throw domain_error("smoothing_gap: empty U grid");
  SumQuery q;
  q.X = X;
  q.Y = Y;
  q.threads = threads;
  const double sharp = static_cast<double>(s_fast(q).value_exact);
  const double Xd = static_cast<double>(X), Yd = static_cast<double>(Y);
  const double shape = std::pow(Xd * Yd, eps) * (Xd * std::sqrt(Yd) + Yd * std::sqrt(Xd));

  SmoothingGapResult out;
  for (double U : U_grid) {
    const SmoothingSpec spec(U, quadrature);
    q.mode = SumMode::smoothed;
    q.U = U;
    const double smooth = s_smoothed(q, spec).value_real;
    CheckReport r;
    r.name = "gap";
    r.parameters = {{"X", Xd}, {"Y", Yd}, {"U", U}, {"eps", eps}};
    r.lhs = sharp;
    r.rhs = smooth;
    const double gap = std::abs(sharp - smooth);
    r.ratio_or_gap = gap / (shape / std::sqrt(U));
    r.tolerance_or_bound = bound;
    r.extra = {{"gap", gap}};
    r.pass = r.ratio_or_gap <= bound;
    r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
    out.max_ratio = std::max(out.max_ratio, r.ratio_or_gap);
    out.reports.push_back(std::move(r));
  }
  std::vector<double> steps;
  for (std::size_t i = 1; i < out.reports.size(); ++i) {
    const double prev = out.reports[i - 1].ratio_or_gap;
    if (prev > 0.0) steps.push_back(out.reports[i].ratio_or_gap / prev);
  }
  if (!steps.empty()) {
    std::sort(steps.begin(), steps.end());
    const std::size_t h = steps.size() / 2;
    out.median_step = steps.size() % 2 ? steps[h] : 0.5 * (steps[h - 1] + steps[h]);
  }
  return out;
}

}  // namespace quadmean
