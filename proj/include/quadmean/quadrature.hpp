#pragma once

// Gauss-Kronrod quadrature (adaptive and fixed-panel) plus compensated
// summation. Integrands may return double or std::complex<double>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <vector>

#include "quadmean/error.hpp"

namespace quadmean {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

struct QuadratureConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  int oscillation_panels_per_period = 4;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw domain_error("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 1) throw domain_error("QuadratureConfig: max_subdivisions must be >= 1");
    if (oscillation_panels_per_period < 4)
      throw domain_error("QuadratureConfig: oscillation_panels_per_period must be >= 4");
  }
};

template <class T>
struct QuadResult {
  T value{};
  double abs_error = 0.0;
  int subdivisions = 0;
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& z) { return z.real(); }

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, comp_, x);
    } else {
      double sr = sum_.real(), cr = comp_.real(), si = sum_.imag(), ci = comp_.imag();
      add_real(sr, cr, x.real());
      add_real(si, ci, x.imag());
      sum_ = {sr, si};
      comp_ = {cr, ci};
    }
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  T sum_{};
  T comp_{};
};

namespace detail {

// 15-point Kronrod abscissae (non-negative half) with the embedded 7-point
// Gauss rule on the odd entries.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One Gauss-Kronrod 15/7 panel on [a, b]: returns {kronrod, |kronrod - gauss|}.
template <class F>
auto gauss_kronrod15(F&& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * detail::kKronrodWeights[7];
  T gauss = fc * detail::kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * detail::kKronrodNodes[i];
    const T fsum = f(c - dx) + f(c + dx);
    kron += fsum * detail::kKronrodWeights[i];
    if (i % 2 == 1) gauss += fsum * detail::kGaussWeights[i / 2];
  }
  return QuadResult<T>{kron * h, magnitude((kron - gauss) * h), 1};
}

/// Global adaptive bisection with GK15 panels (QUADPACK QAG style).
/// Throws accuracy_error with the best estimate when max_subdivisions is hit.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
  using T = std::decay_t<decltype(f(a))>;
  struct Panel {
    double a, b;
    T value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  if (a == b) return QuadResult<T>{};
  std::vector<Panel> heap;
  auto first = gauss_kronrod15(f, a, b);
  heap.push_back({a, b, first.value, first.abs_error});
  T total = first.value;
  double err = first.abs_error;
  int n = 1;
  auto resum = [&] {
    CompensatedSum<T> acc;
    err = 0.0;
    for (const auto& p : heap) {
      acc += p.value;
      err += p.err;
    }
    total = acc.value();
  };
  while (err > std::max(cfg.abs_tol, cfg.rel_tol * magnitude(total))) {
    if (n >= cfg.max_subdivisions) {
      resum();
      if (err <= std::max(cfg.abs_tol, cfg.rel_tol * magnitude(total))) break;
      throw accuracy_error("integrate_adaptive: tolerance not reached after " +
                               std::to_string(n) + " subdivisions",
                           real_part(total), err);
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = gauss_kronrod15(f, worst.a, mid);
    auto right = gauss_kronrod15(f, mid, worst.b);
    heap.push_back({worst.a, mid, left.value, left.abs_error});
    std::push_heap(heap.begin(), heap.end());
    heap.push_back({mid, worst.b, right.value, right.abs_error});
    std::push_heap(heap.begin(), heap.end());
    ++n;
    total += left.value + right.value - worst.value;
    err += left.abs_error + right.abs_error - worst.err;
    // the running update drifts; resum exactly every so often
    if (n % 64 == 0) resum();
  }
  resum();
  return QuadResult<T>{total, err, n};
}

/// GK15 on `panels` equal sub-intervals; error is the sum of panel errors.
template <class F>
auto integrate_panels(F&& f, double a, double b, long panels) {
  using T = std::decay_t<decltype(f(a))>;
  if (panels < 1) panels = 1;
  CompensatedSum<T> acc;
  double err = 0.0;
  const double h = (b - a) / static_cast<double>(panels);
  for (long i = 0; i < panels; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i + 1 == panels) ? b : lo + h;
    auto r = gauss_kronrod15(f, lo, hi);
    acc += r.value;
    err += r.abs_error;
  }
  return QuadResult<T>{acc.value(), err, static_cast<int>(panels)};
}

/// Composite Simpson rule on n (even) intervals. Used as an independent check.
template <class F>
auto integrate_simpson(F&& f, double a, double b, long n) {
  using T = std::decay_t<decltype(f(a))>;
  if (n % 2 == 1) ++n;
  const double h = (b - a) / static_cast<double>(n);
  CompensatedSum<T> acc;
  acc += f(a);
  acc += f(b);
  for (long i = 1; i < n; ++i) acc += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc.value() * (h / 3.0);
}

}  // namespace quadmean
