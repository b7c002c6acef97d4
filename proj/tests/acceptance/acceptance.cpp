// One line per acceptance criterion: PASS/FAIL, the measured quantity, the
// limit, and the runtime against its budget. Exit status 1 if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quadmean/asymptotic.hpp"
#include "quadmean/cache.hpp"
#include "quadmean/gauss.hpp"
#include "quadmean/sums.hpp"
#include "quadmean/verify.hpp"
#include "support/series_oracles.hpp"

using namespace quadmean;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const ConstantsCache& constants() {
  static const ConstantsCache c = build_cache(CacheConfig{});
  return c;
}

Outcome gauss_equivalence() {
  double worst = 0.0, worst_im = 0.0;
  for (i64 k = 1; k <= 315; k += 2)
    for (i64 m = -50; m <= 50; ++m) {
      const auto d = gauss_direct(m, k), f = gauss_fast(m, k);
      const double mag = std::max(std::abs(d.re), std::abs(f.re));
      worst = std::max(worst, std::abs(d.re - f.re) / (1.0 + mag));
      worst_im = std::max({worst_im, std::abs(d.im), std::abs(f.im)});
    }
  return {worst <= 1e-8 && worst_im <= 1e-9,
          "max |direct - fast|/(1+|G|) = " + fmt("%.3g", worst) + " (<= 1e-8), max |Im| = " + fmt("%.3g", worst_im) +
              " (<= 1e-9)"};
}

Outcome poisson_grid() {
  double worst = -1e300, worst_tail = 0.0;
  int ok = 0, total = 0;
  for (i64 n : {1, 3, 5, 9, 15, 21})
    for (double X : {40.0, 100.0})
      for (double U : {8.0, 16.0}) {
        const auto r = poisson_check(n, X, SmoothingSpec(U));
        const double tail = r.extra[0].second;
        const double slack = r.ratio_or_gap - (1e-6 + tail);
        worst = std::max(worst, slack);
        worst_tail = std::max(worst_tail, tail);
        ok += slack <= 0.0;
        ++total;
      }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                           " points with |LHS - RHS| <= 1e-6 + tail, max tail bound " + fmt("%.3g", worst_tail)};
}

Outcome euler_products() {
  bool agree = true;
  double worst_bound = 0.0;
  std::ostringstream d;
  for (double s : {1.5, 2.0, 3.0}) {
    const auto c = oracle::eta_series(s);
    agree = agree && c.agrees();
    worst_bound = std::max(worst_bound, c.bound());
    d << "eta(" << s << ") bound " << fmt("%.2g", c.bound()) << "; ";
  }
  double g_bound = 0.0;
  for (i64 k : {1, -1, 2, 3, 5, 8}) {
    const auto c = oracle::factorization_series(k);
    agree = agree && c.agrees();
    g_bound = std::max(g_bound, c.bound());
  }
  worst_bound = std::max(worst_bound, g_bound);
  d << "G(2,k) max bound " << fmt("%.2g", g_bound) << "; agreement within bounds: " << (agree ? "yes" : "no")
    << "; combined bound target 1e-5: " << (worst_bound <= 1e-5 ? "met" : "missed");
  return {agree && worst_bound <= 1e-5, d.str()};
}

Outcome residue_oracle() {
  const auto poly = constants().polynomial();
  double worst = 0.0;
  for (double Y : {std::exp(2.0), std::exp(4.0), 1000.0}) {
    const auto o = residue_contour_oracle(Y);
    worst = std::max(worst, std::abs(poly.residue(Y) - o.value) / std::abs(o.value));
  }
  const double eta1 = eta_derivatives(1.0, 0).value;
  const double lead = std::abs(poly.lead_coeff - eta1 / 8.0) / (eta1 / 8.0);
  return {worst <= 1e-8 && lead <= 1e-9,
          "max relative residue difference " + fmt("%.3g", worst) + " (<= 1e-8), lead vs eta(1)/8 " +
              fmt("%.3g", lead) + " (<= 1e-9)"};
}

Outcome sum_engines() {
  int mismatches = 0;
  for (i64 X = 1; X <= 40; ++X)
    for (i64 Y = 1; Y <= 40; ++Y)
      mismatches += s_fast({X, Y, SumMode::fast}).value_exact != s_naive({X, Y, SumMode::naive}).value_exact;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logu(0.0, std::log(1e7));
  int random_bad = 0;
  for (int i = 0; i < 50; ++i) {
    const double total = std::exp(logu(rng));
    std::uniform_real_distribution<double> split(0.0, std::log(total));
    const i64 X = std::max<i64>(1, static_cast<i64>(std::exp(split(rng))));
    const i64 Y = std::clamp<i64>(static_cast<i64>(total / static_cast<double>(X)), 1, kFastYCap);
    random_bad += s_fast({X, Y, SumMode::fast}).value_exact != s_naive({X, Y, SumMode::naive}).value_exact;
  }
  int thread_bad = 0;
  SumQuery q{100'000, 20'000, SumMode::fast};
  const i128 one = s_fast(q).value_exact;
  for (int t : {2, 4, 8}) {
    q.threads = t;
    thread_bad += s_fast(q).value_exact != one;
  }
  return {mismatches + random_bad + thread_bad == 0,
          "grid mismatches " + std::to_string(mismatches) + "/1600, random " + std::to_string(random_bad) +
              "/50, thread-count mismatches " + std::to_string(thread_bad) + "/3"};
}

Outcome m12_consistency() {
  const auto table = constants().table();
  const ConstantsEngine eng(table, {});
  double worst = 0.0;
  for (double X : {1000.0, 4000.0, 16000.0})
    for (double ratio : {0.05, 0.1, 0.2})
      for (double U : {8.0, 32.0}) {
        const double Y = ratio * X;
        const auto m = m12_finite_u(X, Y, SmoothingSpec(U), table);
        const auto c = eng.at(Y / X);
        const double X15 = std::pow(X, 1.5);
        const double form = X15 * (std::log(X) + 2.0 * kEulerGamma) * c.c1 + X15 * c.c2;
        worst = std::max(worst, std::abs(m.value - form) / m12_budget(X, Y, U));
      }
  return {worst <= 10.0, "recorded constant max |M12 - form|/budget = " + fmt("%.4g", worst) + " (<= 10)"};
}

Outcome main_term_trend() {
  const MainTermContext ctx(constants().polynomial(), constants().table());
  std::vector<double> dev;
  std::ostringstream d;
  for (int a = 14; a <= 20; ++a) {
    const i64 X = i64{1} << a;
    const i64 Y = static_cast<i64>(std::floor(std::pow(static_cast<double>(X), 0.4)));
    const double s = static_cast<double>(s_fast({X, Y, SumMode::fast}).value_exact);
    const double r = s / ctx.evaluate(static_cast<double>(X), static_cast<double>(Y)).main_total;
    dev.push_back(std::abs(r - 1.0));
    d << "a=" << a << ":" << fmt("%.4f", r) << " ";
  }
  d << "| |ratio-1| at a=20 " << fmt("%.4f", dev.back()) << " (<= 0.15 and <= " << fmt("%.4f", dev.front())
    << " at a=14)";
  return {dev.back() <= 0.15 && dev.back() <= dev.front(), d.str()};
}

Outcome gap_bound() {
  const auto g = smoothing_gap(20000, 2000, {4.0, 8.0, 16.0, 32.0});
  std::ostringstream d;
  d << "ratios";
  for (const auto& r : g.reports) d << " " << fmt("%.4f", r.ratio_or_gap);
  d << " (all <= 10)";
  return {g.max_ratio <= 10.0, d.str()};
}

Outcome small_alpha() {
  const auto table = constants().table();
  const ConstantsEngine eng(table, {});
  bool ok = true;
  std::ostringstream d;
  for (double a : {0.01, 0.1}) {
    const auto c = eng.at(a);
    const double a15 = std::pow(a, 1.5);
    const double env1 = (1.0 + std::sqrt(2.0)) * (2.0 / 3.0) * a15 * c.abs_g_sum + c.c1_err;
    const double log_moment = (2.0 / 3.0) * a15 * (2.0 / 3.0 - std::log(a));
    const double env2 =
        (1.0 + std::sqrt(2.0)) * (log_moment * c.abs_g_sum + (2.0 / 3.0) * a15 * c.abs_gd_sum) + c.c2_err;
    ok = ok && std::abs(c.c1) <= env1 && std::abs(c.c2) <= env2;
    d << "alpha=" << a << ": |C1|/env " << fmt("%.3f", std::abs(c.c1) / env1) << ", |C2|/env "
      << fmt("%.3f", std::abs(c.c2) / env2) << "; ";
  }
  return {ok, d.str() + "(<= 1)"};
}

Outcome large_sieve() {
  struct Fixture {
    std::uint64_t seed;
    double baseline;
  };
  bool ok = true;
  std::ostringstream d;
  for (const auto& f : {Fixture{20240229, 0.214521857923497}, Fixture{12345, 0.227691}}) {
    const auto r = large_sieve_ratio(300, 300, 50, f.seed);
    const double m = r.report.ratio_or_gap;
    ok = ok && m <= 10.0 && m <= 2.0 * f.baseline;
    d << "seed " << f.seed << ": max " << fmt("%.6f", m) << " (<= 10, <= 2 x " << f.baseline << "); ";
  }
  return {ok, d.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gauss-sum equivalence", 30, gauss_equivalence},
      {2, "poisson summation grid", 120, poisson_grid},
      {3, "euler-product identities", 120, euler_products},
      {4, "residue oracle", 30, residue_oracle},
      {5, "sum-engine equivalence", 60, sum_engines},
      {6, "M12 internal consistency", 600, m12_consistency},
      {7, "main-term trend", 900, main_term_trend},
      {8, "smoothing-gap bound", 300, gap_bound},
      {9, "small-alpha envelope", 60, small_alpha},
      {10, "large-sieve ensemble", 120, large_sieve},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_s;
    failed += !pass;
    std::printf("criterion %2d %-26s %s  [%.1fs / %.0fs]  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
