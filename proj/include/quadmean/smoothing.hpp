#pragma once

// The mollifier family Phi = W and its transforms:
//   W~(xi)      = int_0^1 (cos 2 pi xi x + sin 2 pi xi x) W(x) dx
//   Phi^(s)     = int_0^1 Phi(t) t^{s-1} dt
//   f~(s, k)    = int_0^1 Phi(t) W~(k X / (2 Y t)) t^{s-1} dt
//
// The bump rises on [0, 1/U] and falls on [1 - 1/U, 1] through the smooth step
// s(y) = g(y) / (g(y) + g(1 - y)), g(y) = exp(-1/y). On the plateau the integrals
// are done in closed form; only the two transition layers are integrated
// numerically.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "quadmean/error.hpp"
#include "quadmean/jet.hpp"
#include "quadmean/quadrature.hpp"

namespace quadmean {

using cplx = std::complex<double>;

/// Value with an absolute error estimate.
template <class T>
struct Estimate {
  T value{};
  double abs_error = 0.0;
};

/// Smooth step from 0 (y <= 0) to 1 (y >= 1); s(y) + s(1 - y) = 1.
inline double smoothstep(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double e = 1.0 / y - 1.0 / (1.0 - y);
  if (e > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

/// Taylor jet of the smooth step at y in (0, 1).
template <std::size_t N>
Jet<N> smoothstep_jet(double y) {
  if (y <= 0.0 || y >= 1.0) return Jet<N>(smoothstep(y));
  const auto v = Jet<N>::variable(y);
  const auto e = Jet<N>(1.0) / v - Jet<N>(1.0) / (Jet<N>(1.0) - v);
  if (e[0] > 600.0) return Jet<N>(0.0);
  return Jet<N>(1.0) / (Jet<N>(1.0) + exp(e));
}

namespace detail {

inline constexpr std::size_t kMaxDerivative = 8;

// A_j = int_0^1 |s^(j)(y)| dy for j = 0..kMaxDerivative.
inline const std::array<double, kMaxDerivative + 1>& smoothstep_derivative_norms() {
  static const auto norms = [] {
    std::array<double, kMaxDerivative + 1> a{};
    constexpr long kPanels = 4000;
    const double h = 1.0 / kPanels;
    for (long p = 0; p < kPanels; ++p) {
      const double c = h * (static_cast<double>(p) + 0.5);
      auto add = [&](double y, double w) {
        const auto jet = smoothstep_jet<kMaxDerivative>(y);
        for (std::size_t k = 0; k <= kMaxDerivative; ++k)
          a[k] += w * 0.5 * h * std::abs(jet.derivative(k));
      };
      add(c, kKronrodWeights[7]);
      for (int i = 0; i < 7; ++i) {
        add(c - 0.5 * h * kKronrodNodes[i], kKronrodWeights[i]);
        add(c + 0.5 * h * kKronrodNodes[i], kKronrodWeights[i]);
      }
    }
    // |s^(j)| has kinks at sign changes; pad the quadrature result.
    for (auto& x : a) x *= 1.01;
    return a;
  }();
  return norms;
}

// Gauss-Kronrod nodes on [0, 1] split into `panels` equal panels, with the
// layer profile h(y) = 1 - s(y) sampled at each node.
struct LayerNodes {
  std::vector<double> y, w_kronrod, w_gauss, profile;
};

inline LayerNodes make_layer_nodes(long panels) {
  LayerNodes n;
  const auto count = static_cast<std::size_t>(panels) * 15;
  n.y.reserve(count);
  n.w_kronrod.reserve(count);
  n.w_gauss.reserve(count);
  n.profile.reserve(count);
  const double h = 1.0 / static_cast<double>(panels);
  for (long p = 0; p < panels; ++p) {
    const double c = h * (static_cast<double>(p) + 0.5);
    const double half = 0.5 * h;
    auto push = [&](double y, double wk, double wg) {
      n.y.push_back(y);
      n.w_kronrod.push_back(wk * half);
      n.w_gauss.push_back(wg * half);
      n.profile.push_back(1.0 - smoothstep(y));
    };
    push(c, kKronrodWeights[7], kGaussWeights[3]);
    for (int i = 0; i < 7; ++i) {
      const double dx = half * kKronrodNodes[i];
      const double wg = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
      push(c - dx, kKronrodWeights[i], wg);
      push(c + dx, kKronrodWeights[i], wg);
    }
  }
  return n;
}

inline constexpr int kCachedLayerLevels = 13;  // 1, 2, 4, ..., 4096 panels

inline const std::vector<LayerNodes>& cached_layer_nodes() {
  static const auto levels = [] {
    std::vector<LayerNodes> v;
    for (int l = 0; l < kCachedLayerLevels; ++l) v.push_back(make_layer_nodes(1L << l));
    return v;
  }();
  return levels;
}

}  // namespace detail

/// Which weight function a SmoothingSpec produces. `unit` and `zero` are
/// test hooks: the indicator of (0, 1] and the zero function.
enum class WeightShape { smooth, unit, zero };

class SmoothingSpec {
 public:
  explicit SmoothingSpec(double U, QuadratureConfig quadrature = {},
                         WeightShape shape = WeightShape::smooth)
      : U_(U), quad_(quadrature), shape_(shape) {
    if (!(U >= 4.0)) throw domain_error("SmoothingSpec: U must be >= 4");
    quad_.validate();
  }

  double U() const noexcept { return U_; }
  const QuadratureConfig& quadrature() const noexcept { return quad_; }
  WeightShape shape() const noexcept { return shape_; }

 private:
  double U_;
  QuadratureConfig quad_;
  WeightShape shape_;
};

/// Phi(t) = W(t): 1 on [1/U, 1 - 1/U], 0 outside (0, 1), smooth in between.
inline double mollifier_eval(double t, const SmoothingSpec& spec) {
  switch (spec.shape()) {
    case WeightShape::zero:
      return 0.0;
    case WeightShape::unit:
      return (t > 0.0 && t <= 1.0) ? 1.0 : 0.0;
    case WeightShape::smooth:
      break;
  }
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double U = spec.U();
  if (t < 1.0 / U) return smoothstep(U * t);
  if (t > 1.0 - 1.0 / U) return smoothstep(U * (1.0 - t));
  return 1.0;
}

/// int_0^1 |W^(j)| = 2 U^{j-1} int_0^1 |s^(j)|, for 1 <= j <= 8.
inline double mollifier_derivative_norm(int j, const SmoothingSpec& spec) {
  if (j < 1 || j > static_cast<int>(detail::kMaxDerivative))
    throw domain_error("mollifier_derivative_norm: order out of range");
  return 2.0 * std::pow(spec.U(), j - 1) * detail::smoothstep_derivative_norms()[j];
}

/// Rigorous decay envelope from j-fold integration by parts,
/// |W~(xi)| <= sqrt(2) (2 pi |xi|)^{-j} int |W^(j)|, minimized over 1 <= j <= 8.
inline double w_tilde_decay_bound(double xi, const SmoothingSpec& spec) {
  const double ax = std::abs(xi);
  double best = std::sqrt(2.0);  // |W~| <= sqrt(2) int W
  if (ax == 0.0) return best;
  for (int j = 1; j <= static_cast<int>(detail::kMaxDerivative); ++j) {
    const double b = std::sqrt(2.0) * mollifier_derivative_norm(j, spec) * std::pow(2.0 * kPi * ax, -j);
    best = std::min(best, b);
  }
  return best;
}

/// (1 - cos 2 pi xi + sin 2 pi xi) / (2 pi xi): the transform of the indicator of [0, 1].
inline double w_tilde_indicator(double xi) {
  if (xi == 0.0) return 1.0;
  const double th = 2.0 * kPi * xi;
  const double half = std::sin(0.5 * th);
  return (2.0 * half * half + std::sin(th)) / th;
}

namespace detail {

// int_0^1 h(y) cos(wy) dy and int_0^1 h(y) sin(wy) dy on a node level, with
// the Kronrod/Gauss discrepancy as error estimate.
struct LayerTransform {
  double c, s, err_c, err_s;
};

inline LayerTransform layer_transform(const LayerNodes& n, double omega) {
  CompensatedSum<double> kc, ks, gc, gs;
  for (std::size_t i = 0; i < n.y.size(); ++i) {
    const double fc = n.profile[i] * std::cos(omega * n.y[i]);
    const double fs = n.profile[i] * std::sin(omega * n.y[i]);
    kc += fc * n.w_kronrod[i];
    ks += fs * n.w_kronrod[i];
    if (n.w_gauss[i] != 0.0) {
      gc += fc * n.w_gauss[i];
      gs += fs * n.w_gauss[i];
    }
  }
  return {kc.value(), ks.value(), std::abs(kc.value() - gc.value()),
          std::abs(ks.value() - gs.value())};
}

}  // namespace detail

/// W~(xi) by closed-form plateau plus panel quadrature on the transition layers.
/// Panels are sized to `oscillation_panels_per_period` per period of the layer
/// oscillation and doubled until the Kronrod error estimate meets tolerance.
inline Estimate<double> w_tilde(double xi, const SmoothingSpec& spec) {
  switch (spec.shape()) {
    case WeightShape::zero:
      return {0.0, 0.0};
    case WeightShape::unit:
      return {w_tilde_indicator(xi), 1e-16};
    case WeightShape::smooth:
      break;
  }
  const auto& q = spec.quadrature();
  const double U = spec.U();
  const double bound = w_tilde_decay_bound(xi, spec);
  if (bound < q.abs_tol) return {0.0, bound};

  const double closed = w_tilde_indicator(xi);
  const double theta = 2.0 * kPi * xi;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double omega = theta / U;
  const double periods = std::abs(omega) / (2.0 * kPi);
  long panels = std::max(8L, static_cast<long>(std::ceil(periods * q.oscillation_panels_per_period)));
  int level = 0;
  while ((1L << level) < panels) ++level;

  const auto& cache = detail::cached_layer_nodes();
  double value = 0.0, err = 0.0;
  for (;; ++level) {
    const long n_panels = 1L << level;
    detail::LayerTransform t{};
    if (level < detail::kCachedLayerLevels) {
      t = detail::layer_transform(cache[static_cast<std::size_t>(level)], omega);
    } else {
      t = detail::layer_transform(detail::make_layer_nodes(n_panels), omega);
    }
    // rising layer x = y/U, falling layer x = 1 - y/U
    const double layers = (t.c + t.s) + (ct + st) * t.c + (st - ct) * t.s;
    value = closed - layers / U;
    const double rounding = 32.0 * 1.1e-16 * (std::abs(closed) + (std::abs(t.c) + std::abs(t.s)) * 3.0 / U);
    err = (1.0 + std::sqrt(2.0)) * (t.err_c + t.err_s) / U + rounding;
    if (err <= std::max(q.abs_tol, q.rel_tol * std::abs(value))) break;
    if (n_panels >= static_cast<long>(q.max_subdivisions) * 16) {
      throw accuracy_error("w_tilde: tolerance not reached", value, err);
    }
  }
  return {value, std::min(err, bound + err)};
}

/// Phi^(s) = int_0^1 Phi(t) t^{s-1} dt for Re s > 0.
inline Estimate<cplx> phi_mellin(cplx s, const SmoothingSpec& spec) {
  if (!(s.real() > 0.0)) throw domain_error("phi_mellin: requires Re(s) > 0");
  switch (spec.shape()) {
    case WeightShape::zero:
      return {0.0, 0.0};
    case WeightShape::unit:
      return {1.0 / s, 1e-16 * std::abs(1.0 / s)};
    case WeightShape::smooth:
      break;
  }
  const double U = spec.U();
  const auto& q = spec.quadrature();
  // plateau [1/U, 1 - 1/U]
  const cplx plateau = (std::pow(cplx(1.0 - 1.0 / U), s) - std::pow(cplx(U), -s)) / s;
  // rising layer: t = y/U  ->  U^{-s} int_0^1 s(y) y^{s-1} dy
  auto rising = integrate_adaptive(
      [&](double y) -> cplx {
        const double w = smoothstep(y);
        return w == 0.0 ? cplx(0.0) : w * std::pow(cplx(y), s - 1.0);
      },
      0.0, 1.0, q);
  // falling layer: t = 1 - y/U  ->  (1/U) int_0^1 s(y) (1 - y/U)^{s-1} dy
  auto falling = integrate_adaptive(
      [&](double y) -> cplx { return smoothstep(y) * std::pow(cplx(1.0 - y / U), s - 1.0); }, 0.0,
      1.0, q);
  const cplx scale = std::pow(cplx(U), -s);
  const cplx value = plateau + scale * rising.value + falling.value / U;
  return {value, std::abs(scale) * rising.abs_error + falling.abs_error / U};
}

/// int_0^1 Phi(t) (log t)^order t^{s-1} dt: the order-th s-derivative of Phi^,
/// by direct quadrature.
inline Estimate<double> phi_mellin_log_moment(double s, int order, const SmoothingSpec& spec) {
  if (!(s > 0.0)) throw domain_error("phi_mellin_log_moment: requires s > 0");
  if (spec.shape() == WeightShape::zero) return {0.0, 0.0};
  const double U = spec.U();
  auto f = [&](double t) {
    const double phi = mollifier_eval(t, spec);
    if (phi == 0.0) return 0.0;
    return phi * std::pow(std::log(t), order) * std::pow(t, s - 1.0);
  };
  const auto& q = spec.quadrature();
  if (spec.shape() == WeightShape::unit) {
    auto r = integrate_adaptive(f, 0.0, 1.0, q);
    return {r.value, r.abs_error};
  }
  auto a = integrate_adaptive(f, 0.0, 1.0 / U, q);
  auto b = integrate_adaptive(f, 1.0 / U, 1.0 - 1.0 / U, q);
  auto c = integrate_adaptive(f, 1.0 - 1.0 / U, 1.0, q);
  return {a.value + b.value + c.value, a.abs_error + b.abs_error + c.abs_error};
}

/// d^order/ds^order Phi^(s) at real s, order 1 or 2.
/// Order 1 uses a complex step of 1e-6; order 2 uses central differences with
/// one Richardson extrapolation step.
inline Estimate<double> phi_mellin_derivative(double s, int order, const SmoothingSpec& spec) {
  if (order == 0) {
    auto r = phi_mellin(s, spec);
    return {r.value.real(), r.abs_error};
  }
  if (order == 1) {
    constexpr double h = 1e-6;
    auto r = phi_mellin(cplx(s, h), spec);
    return {r.value.imag() / h, r.abs_error / h + h * h * 1e2};
  }
  if (order == 2) {
    auto f = [&](double x) { return phi_mellin(x, spec).value.real(); };
    const double f0 = f(s);
    auto second = [&](double h) { return (f(s + h) - 2.0 * f0 + f(s - h)) / (h * h); };
    const double h = 2e-3;
    const double d1 = second(h);
    const double d2 = second(0.5 * h);
    const double noise = 4.0 * phi_mellin(s, spec).abs_error / (0.25 * h * h);
    return {(4.0 * d2 - d1) / 3.0, std::abs(d2 - d1) / 3.0 + noise};
  }
  throw domain_error("phi_mellin_derivative: order must be 0, 1 or 2");
}

/// f~(s, k) = int_0^1 Phi(t) W~(k X / (2 Y t)) t^{s-1} (log t)^{log_power} dt,
/// log_power in {0, 1}. The inner W~ errors are propagated into the estimate.
inline Estimate<cplx> f_tilde(cplx s, long long k, double X, double Y, const SmoothingSpec& spec,
                              int log_power = 0) {
  if (!(s.real() > 0.0)) throw domain_error("f_tilde: requires Re(s) > 0");
  if (!(X > 0.0) || !(Y > 0.0)) throw domain_error("f_tilde: X and Y must be positive");
  if (k == 0) throw domain_error("f_tilde: k must be nonzero");
  if (log_power != 0 && log_power != 1) throw domain_error("f_tilde: log_power must be 0 or 1");
  if (spec.shape() == WeightShape::zero) return {0.0, 0.0};
  const double c = static_cast<double>(k) * X / (2.0 * Y);
  double worst_inner = 0.0;
  auto f = [&](double t) -> cplx {
    const double phi = mollifier_eval(t, spec);
    if (phi == 0.0) return 0.0;
    const auto w = w_tilde(c / t, spec);
    worst_inner = std::max(worst_inner, w.abs_error);
    cplx v = phi * w.value * std::pow(cplx(t), s - 1.0);
    if (log_power == 1) v *= std::log(t);
    return v;
  };
  const auto& q = spec.quadrature();
  const double U = spec.U();
  std::vector<double> cuts = {0.0, 1.0};
  if (spec.shape() == WeightShape::smooth) cuts = {0.0, 1.0 / U, 1.0 - 1.0 / U, 1.0};
  cplx value = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = integrate_adaptive(f, cuts[i], cuts[i + 1], q);
    value += r.value;
    err += r.abs_error;
  }
  // int_0^1 t^{sigma-1} |log t|^p dt = p! / sigma^{p+1}
  const double sigma = s.real();
  const double weight = log_power == 0 ? 1.0 / sigma : 1.0 / (sigma * sigma);
  return {value, err + worst_inner * weight};
}

}  // namespace quadmean
