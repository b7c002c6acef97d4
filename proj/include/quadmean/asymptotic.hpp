#pragma once

// Main terms of the mean value of S(X, Y):
//   XY^{1/2} log^2 Y eta(1)/16 + (X/2) Y^{1/2} P1(log Y)
//   + X^{3/2} (log X + 2 gamma) C1(Y/X) + X^{3/2} C2(Y/X),
// with P1 read off the residue at s = 1/2 of Y^s Phi^(s) zeta^3(2s) eta(2s),
// the off-diagonal constants C1, C2, a finite-U cross-check of the
// off-diagonal term, and the error expression monitored alongside.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "quadmean/arith.hpp"
#include "quadmean/dirichlet.hpp"
#include "quadmean/error.hpp"
#include "quadmean/laurent.hpp"
#include "quadmean/quadrature.hpp"
#include "quadmean/smoothing.hpp"

namespace quadmean {

// ---------------------------------------------------------------------------
// residue at s = 1/2

/// Residue(Y)/Y^{1/2} = lead_coeff log^2 Y + p1_lin log Y + p1_const.
struct MainTermPolynomial {
  double lead_coeff = 0.0;
  double p1_lin = 0.0;
  double p1_const = 0.0;
  double lead_err = 0.0, p1_lin_err = 0.0, p1_const_err = 0.0;
  double eta1 = 0.0;

  double p1(double logY) const { return p1_lin * logY + p1_const; }
  double residue(double Y) const {
    const double L = std::log(Y);
    return std::sqrt(Y) * (lead_coeff * L * L + p1(L));
  }
  double residue_error(double Y) const {
    const double L = std::abs(std::log(Y));
    return std::sqrt(Y) * (lead_err * L * L + p1_lin_err * L + p1_const_err);
  }
};

/// Which factors enter the residue. `unit_eta` replaces eta by 1 (test hook).
struct ResidueModel {
  bool unit_eta = false;
  i64 eta_cutoff = kEtaCutoff;
};

/// eta(1), eta'(1), eta''(1) with error estimates.
struct EtaJet {
  Estimate<double> d0, d1, d2;
};

inline EtaJet eta_jet_at_one(i64 cutoff = kEtaCutoff) {
  return {eta_derivatives(1.0, 0, cutoff), eta_derivatives(1.0, 1, cutoff), eta_derivatives(1.0, 2, cutoff)};
}

/// The residue polynomial from eta(1 + 2u) = eta + 2 eta' u + 2 eta'' u^2,
/// Phi^(1/2 + u) -> 1/(1/2 + u) = 2 - 4u + 8u^2 and the cube of zeta(1 + 2u).
inline MainTermPolynomial residue_polynomial(const EtaJet& e, bool unit_eta = false) {
  const auto z3 = zeta_cubed_laurent().truncated(-1);
  const auto eta_s = unit_eta ? LaurentSeries<double>::taylor(0.5, {1.0, 0.0, 0.0})
                              : LaurentSeries<double>::taylor(0.5, {e.d0.value, 2.0 * e.d1.value, 2.0 * e.d2.value});
  const auto phi_s = LaurentSeries<double>::taylor(0.5, {2.0, -4.0, 8.0});
  const auto g = z3 * eta_s * phi_s;
  // propagate the eta errors through the same products with absolute values
  std::vector<double> zc;
  for (int o = -3; o <= -1; ++o) zc.push_back(std::abs(z3.coefficient(o)));
  const auto za = LaurentSeries<double>(0.5, -3, zc);
  const auto ea = unit_eta ? LaurentSeries<double>::taylor(0.5, {0.0, 0.0, 0.0})
                           : LaurentSeries<double>::taylor(0.5, {e.d0.abs_error, 2.0 * e.d1.abs_error, 2.0 * e.d2.abs_error});
  const auto pa = LaurentSeries<double>::taylor(0.5, {2.0, 4.0, 8.0});
  const auto ge = za * ea * pa;
  // Res Y^{1/2} e^{uL} G(u) = Y^{1/2} sum_j g_{-1-j} L^j / j!
  MainTermPolynomial m;
  const double rnd = 1e-15;
  m.lead_coeff = 0.5 * g.coefficient(-3);
  m.p1_lin = g.coefficient(-2);
  m.p1_const = g.coefficient(-1);
  m.lead_err = 0.5 * ge.coefficient(-3) + rnd * std::abs(m.lead_coeff);
  m.p1_lin_err = ge.coefficient(-2) + rnd * std::abs(m.p1_lin);
  m.p1_const_err = ge.coefficient(-1) + rnd * std::abs(m.p1_const);
  m.eta1 = unit_eta ? 1.0 : e.d0.value;
  return m;
}

inline MainTermPolynomial residue_m0(double Y, const ResidueModel& model = {}) {
  if (!(Y > 1.0)) throw domain_error("residue_m0: requires Y > 1");
  if (model.unit_eta) return residue_polynomial(EtaJet{}, true);
  return residue_polynomial(eta_jet_at_one(model.eta_cutoff), false);
}

/// (1/2 pi i) * contour integral of f over |s - center| = radius by the
/// trapezoidal rule; the node count is doubled once and the two results must
/// agree to `rel_tol`.
template <class F>
Estimate<cplx> contour_residue(F&& f, cplx center, double radius, int nodes = 512, double rel_tol = 1e-10) {
  if (nodes < 512) throw domain_error("contour_residue: at least 512 nodes are required");
  if (!(radius > 0.0)) throw domain_error("contour_residue: radius must be positive");
  auto partial = [&](int n, int offset, int stride) {
    CompensatedSum<cplx> acc;
    for (int j = offset; j < n; j += stride) {
      const cplx e = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
      acc += f(center + radius * e) * e;
    }
    return acc.value();
  };
  const cplx even = partial(2 * nodes, 0, 2);
  const cplx odd = partial(2 * nodes, 1, 2);
  const cplx coarse = radius * even / static_cast<double>(nodes);
  const cplx fine = radius * (even + odd) / static_cast<double>(2 * nodes);
  const double diff = std::abs(fine - coarse);
  if (diff > rel_tol * std::max(1.0, std::abs(fine)))
    throw accuracy_error("contour_residue: node doubling did not converge", fine.real(), diff);
  return {fine, diff + 1e-15 * std::abs(fine)};
}

/// Residue of Y^s Phi^(s) zeta^3(2s) eta(2s) at s = 1/2 by contour integration.
/// U = infinity uses the limit Phi^(s) = 1/s.
inline Estimate<double> residue_contour_oracle(double Y, double U = std::numeric_limits<double>::infinity(),
                                               const ResidueModel& model = {}, double radius = 0.05,
                                               int nodes = 512) {
  if (!(Y > 1.0)) throw domain_error("residue_contour_oracle: requires Y > 1");
  if (radius < 0.05 || radius > 0.1) throw domain_error("residue_contour_oracle: radius must be in [0.05, 0.1]");
  std::optional<SmoothingSpec> spec;
  if (std::isfinite(U)) spec.emplace(U);
  const double lY = std::log(Y);
  auto f = [&](cplx s) {
    const cplx z = zeta_near_one(2.0 * s);
    const cplx phi = spec ? phi_mellin(s, *spec).value : 1.0 / s;
    const cplx e = model.unit_eta ? cplx(1.0) : eta(2.0 * s, model.eta_cutoff).value;
    return std::exp(s * lY) * phi * z * z * z * e;
  };
  const auto r = contour_residue(f, 0.5, radius, nodes, 1e-11);
  return {r.value.real(), r.abs_error + std::abs(r.value.imag())};
}

// ---------------------------------------------------------------------------
// G(1/2, 2k^2) series

/// G(1/2, 2k^2) and its s-derivative for k >= 1, precomputed up to some k and
/// evaluated on demand beyond.
class ScriptGTable {
 public:
  using Value = ScriptGSquareFamily::Value;

  explicit ScriptGTable(i64 precompute = 0, i64 family_cutoff = kScriptGFamilyCutoff)
      : family_(0.5, family_cutoff) {
    table_.reserve(static_cast<std::size_t>(std::max<i64>(precompute, 0)));
    for (i64 k = 1; k <= precompute; ++k) table_.push_back(family_.evaluate(k));
  }

  /// Take over precomputed entries (e.g. from the constants cache) for k = 1..size.
  ScriptGTable(std::vector<Value> entries, i64 family_cutoff)
      : family_(0.5, family_cutoff), table_(std::move(entries)) {}

  Value at(i64 k) const {
    if (k >= 1 && k <= static_cast<i64>(table_.size())) return table_[static_cast<std::size_t>(k - 1)];
    return family_.evaluate(k);
  }
  i64 cached() const noexcept { return static_cast<i64>(table_.size()); }
  i64 family_cutoff() const noexcept { return family_.cutoff(); }

 private:
  ScriptGSquareFamily family_;
  std::vector<Value> table_;
};

// ---------------------------------------------------------------------------
// C1, C2

inline constexpr i64 kConstantsKCutoff = 20'000;

struct CConstantsConfig {
  i64 k_cutoff = kConstantsKCutoff;
  double delta = -1.0;  // < 0: alpha * 1e-4 clamped to [1e-8, 1e-3]
  QuadratureConfig quadrature{};
};

inline double default_delta(double alpha) { return std::clamp(alpha * 1e-4, 1e-8, 1e-3); }

struct CConstants {
  double alpha = 0.0;
  double c1 = 0.0, c1_err = 0.0;
  double c2 = 0.0, c2_err = 0.0;
  double delta = 0.0;
  i64 k_cutoff = 0;
  // (1/2 pi) sum_k |G|/k^2 and (1/2 pi) sum_k |G'|/k^2 over k <= k_cutoff
  double abs_g_sum = 0.0, abs_gd_sum = 0.0;
};

struct ConstantsTable {
  std::vector<double> alpha_grid;
  std::vector<double> c1_values, c1_errors, c2_values, c2_errors;
  i64 k_cutoff = 0;
};

namespace detail {

// int_Z^inf z^{-nu} (log z)^j e^{iz} dz, j in {0, 1}, by repeated integration by parts:
//   int f e^{iz} = e^{iZ} sum_{n<M} i^{n+1} f^{(n)}(Z) + i^M int f^{(M)} e^{iz},
// with |remainder| <= int_Z^inf |f^{(M)}|. Here f^{(n)} = z^{-nu-n} (A_n + B_n log z).
inline Estimate<cplx> oscillatory_tail(double Z, double nu, int j) {
  const double lz = std::log(Z);
  double A = j == 0 ? 1.0 : 0.0, B = j == 0 ? 0.0 : 1.0;
  cplx sum = 0.0, ipow(0.0, 1.0);
  double best_rem = std::numeric_limits<double>::infinity();
  cplx best = 0.0;
  for (int n = 0; n < 60; ++n) {
    const double mu = nu + n;
    sum += ipow * (std::pow(Z, -mu) * (A + B * lz));
    const double An = -mu * A + B, Bn = -mu * B;
    A = An;
    B = Bn;
    const double m1 = mu;  // f^{(n+1)} decays like z^{-(mu+1)}
    const double rem = std::pow(Z, -m1) * (std::abs(A) / m1 + std::abs(B) * (lz / m1 + 1.0 / (m1 * m1)));
    if (rem >= best_rem) break;
    best_rem = rem;
    best = sum;
    if (rem < 1e-18 * std::abs(sum)) break;
    ipow *= cplx(0.0, 1.0);
  }
  return {std::polar(1.0, Z) * best, best_rem};
}

// F_j(a) = int_a^inf z^{-5/2} (log z)^j (sin z - cos z) dz.
inline Estimate<double> oscillatory_integral(double a, int j, const QuadratureConfig& q) {
  constexpr double kSwitch = 50.0;
  constexpr double nu = 2.5;
  auto imre = [](const Estimate<cplx>& t) {
    return Estimate<double>{t.value.imag() - t.value.real(), std::sqrt(2.0) * t.abs_error};
  };
  if (a >= kSwitch) return imre(oscillatory_tail(a, nu, j));
  auto f = [j](double z) {
    const double w = std::pow(z, -nu) * (std::sin(z) - std::cos(z));
    return j == 0 ? w : w * std::log(z);
  };
  double value = 0.0, err = 0.0;
  double lo = a;
  for (double panel = std::floor(a / kPi) + 1.0; lo < kSwitch; panel += 1.0) {
    const double hi = std::min(kSwitch, panel * kPi);
    if (hi <= lo) continue;
    const auto r = integrate_adaptive(f, lo, hi, q);
    value += r.value;
    err += r.abs_error;
    lo = hi;
  }
  const auto t = imre(oscillatory_tail(kSwitch, nu, j));
  return {value + t.value, err + t.abs_error};
}

// int_0^alpha sqrt(y) |log y| dy
inline double abs_log_moment(double alpha) {
  if (alpha <= 0.0) return 0.0;
  const double a15 = std::pow(alpha, 1.5);
  if (alpha <= 1.0) return (2.0 / 3.0) * a15 * (2.0 / 3.0 - std::log(alpha));
  return 8.0 / 9.0 + (2.0 / 3.0) * a15 * (std::log(alpha) - 2.0 / 3.0);
}

// I = int_delta^alpha sqrt(y) (1 - cos(c/y) + sin(c/y)) dy and the log y weighted J.
struct KIntegrals {
  Estimate<double> I, J;
};

inline KIntegrals k_integrals(double alpha, double delta, double c, const QuadratureConfig& q) {
  const double za = c / alpha, zd = c / delta;
  const auto f0a = oscillatory_integral(za, 0, q), f0d = oscillatory_integral(zd, 0, q);
  const auto f1a = oscillatory_integral(za, 1, q), f1d = oscillatory_integral(zd, 1, q);
  const double c15 = std::pow(c, 1.5), lc = std::log(c);
  const double a15 = std::pow(alpha, 1.5), d15 = std::pow(delta, 1.5);
  const double osc0 = f0a.value - f0d.value, osc0_err = f0a.abs_error + f0d.abs_error;
  const double osc1 = f1a.value - f1d.value, osc1_err = f1a.abs_error + f1d.abs_error;
  const double I = (2.0 / 3.0) * (a15 - d15) + c15 * osc0;
  const double J = (2.0 / 3.0) * (a15 * (std::log(alpha) - 2.0 / 3.0) - d15 * (std::log(delta) - 2.0 / 3.0)) +
                   c15 * (lc * osc0 - osc1);
  const double rnd = 1e-15;
  return {{I, c15 * osc0_err + rnd * (std::abs(I) + a15)},
          {J, c15 * (std::abs(lc) * osc0_err + osc1_err) + rnd * (std::abs(J) + a15 * (1.0 + std::abs(std::log(alpha))))}};
}

}  // namespace detail

/// C1(alpha), C2(alpha) for a fixed G-series. The per-k terms are summed in
/// ascending k.
class ConstantsEngine {
 public:
  explicit ConstantsEngine(const ScriptGTable& table, CConstantsConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.k_cutoff < 1) throw domain_error("ConstantsEngine: k_cutoff must be >= 1");
    cfg_.quadrature.validate();
    g_.reserve(static_cast<std::size_t>(cfg_.k_cutoff));
    for (i64 k = 1; k <= cfg_.k_cutoff; ++k) {
      const auto v = table.at(k);
      g_.push_back(v);
      const double k2 = static_cast<double>(k) * static_cast<double>(k);
      max_g_ = std::max(max_g_, std::abs(v.value.value) + v.value.abs_error);
      max_gd_ = std::max(max_gd_, std::abs(v.derivative.value) + v.derivative.abs_error);
      abs_g_ += std::abs(v.value.value) / k2;
      abs_gd_ += std::abs(v.derivative.value) / k2;
    }
  }

  const CConstantsConfig& config() const noexcept { return cfg_; }

  CConstants at(double alpha) const {
    if (!(alpha >= 0.0)) throw domain_error("c_constants: alpha must be >= 0");
    CConstants out;
    out.alpha = alpha;
    out.k_cutoff = cfg_.k_cutoff;
    out.abs_g_sum = abs_g_ / (2.0 * kPi);
    out.abs_gd_sum = abs_gd_ / (2.0 * kPi);
    if (alpha == 0.0) return out;
    const double delta = std::min(cfg_.delta > 0.0 ? cfg_.delta : default_delta(alpha), 0.5 * alpha);
    out.delta = delta;
    CompensatedSum<double> c1, c2;
    double e1 = 0.0, e2 = 0.0;
    for (i64 k = 1; k <= cfg_.k_cutoff; ++k) {
      const double k2 = static_cast<double>(k) * static_cast<double>(k);
      const auto& v = g_[static_cast<std::size_t>(k - 1)];
      const auto ints = detail::k_integrals(alpha, delta, 2.0 * kPi * k2, cfg_.quadrature);
      const double g = v.value.value / k2, gd = v.derivative.value / k2;
      const double ge = v.value.abs_error / k2, gde = v.derivative.abs_error / k2;
      c1 += g * ints.I.value;
      c2 += g * ints.J.value + gd * ints.I.value;
      e1 += std::abs(g) * ints.I.abs_error + ge * std::abs(ints.I.value);
      e2 += std::abs(g) * ints.J.abs_error + ge * std::abs(ints.J.value) + std::abs(gd) * ints.I.abs_error +
            gde * std::abs(ints.I.value);
    }
    // [0, delta] remainders
    const double env = 1.0 + std::sqrt(2.0);
    const double d15 = std::pow(delta, 1.5);
    const double r0 = env * (2.0 / 3.0) * d15;
    const double r1 = env * (2.0 / 3.0) * d15 * (std::abs(std::log(delta)) + 2.0 / 3.0);
    e1 += abs_g_ * r0;
    e2 += abs_g_ * r1 + abs_gd_ * r0;
    // k > k_cutoff: (max |G|) sum_{k>K} k^{-2} (integral bound), sum_{k>K} k^{-2} <= 1/K
    const double inv_k = 1.0 / static_cast<double>(cfg_.k_cutoff);
    const double ibound = env * (2.0 / 3.0) * std::pow(alpha, 1.5);
    const double jbound = env * detail::abs_log_moment(alpha);
    e1 += max_g_ * inv_k * ibound;
    e2 += max_g_ * inv_k * jbound + max_gd_ * inv_k * ibound;
    const double norm = 1.0 / (2.0 * kPi);
    out.c1 = norm * c1.value();
    out.c2 = norm * c2.value();
    out.c1_err = norm * e1 + 1e-15 * std::abs(out.c1);
    out.c2_err = norm * e2 + 1e-15 * std::abs(out.c2);
    return out;
  }

  ConstantsTable table(const std::vector<double>& alphas) const {
    ConstantsTable t;
    t.k_cutoff = cfg_.k_cutoff;
    for (double a : alphas) {
      const auto c = at(a);
      t.alpha_grid.push_back(a);
      t.c1_values.push_back(c.c1);
      t.c1_errors.push_back(c.c1_err);
      t.c2_values.push_back(c.c2);
      t.c2_errors.push_back(c.c2_err);
    }
    return t;
  }

 private:
  CConstantsConfig cfg_;
  std::vector<ScriptGTable::Value> g_;
  double max_g_ = 0.0, max_gd_ = 0.0, abs_g_ = 0.0, abs_gd_ = 0.0;
};

inline CConstants c_constants(double alpha, const CConstantsConfig& cfg = {}) {
  if (!(alpha >= 0.0)) throw domain_error("c_constants: alpha must be >= 0");
  const ScriptGTable table;
  return ConstantsEngine(table, cfg).at(alpha);
}

// ---------------------------------------------------------------------------
// finite-U off-diagonal term

struct M12Result {
  double value = 0.0, abs_error = 0.0;
  i64 k_used = 0;
  double tail_bound = 0.0;
  double sum_fg = 0.0, sum_fpg = 0.0, sum_fgp = 0.0;  // sum f G, sum f' G, sum f G'
};

/// X Y^{1/2} [ (log Y + 2 gamma) sum f~ G + sum f~' G + sum f~ G' ] with
/// f~ = f~(1/2, 2k^2), f~' its log-weighted version and G = G(1/2, 2k^2).
/// k_cutoff = 0 picks the first k where the W~ decay envelope makes f~ negligible.
inline M12Result m12_finite_u(double X, double Y, const SmoothingSpec& spec, const ScriptGTable& table,
                              i64 k_cutoff = 0, int threads = 1) {
  if (!(X > 0.0) || !(Y > 1.0)) throw domain_error("m12_finite_u: requires X > 0 and Y > 1");
  if (threads < 1) throw domain_error("m12_finite_u: threads must be >= 1");
  const double floor = spec.quadrature().abs_tol;
  // |f~(1/2, 2k^2)| <= int_0^1 t^{-1/2} |W~(k^2 X/(Y t))| dt <= 2 B(k^2 X / Y)
  auto envelope = [&](i64 k) {
    return 2.0 * w_tilde_decay_bound(static_cast<double>(k) * static_cast<double>(k) * X / Y, spec);
  };
  i64 K = k_cutoff;
  if (K <= 0) {
    K = 1;
    while (envelope(K + 1) > floor) {
      ++K;
      if (K > 1'000'000) throw resource_error("m12_finite_u: decay floor not reached");
    }
  }
  struct Term {
    double f = 0, fe = 0, fp = 0, fpe = 0;
  };
  std::vector<Term> terms(static_cast<std::size_t>(K));
  std::atomic<i64> next{1};
  auto worker = [&] {
    for (i64 k = next++; k <= K; k = next++) {
      const i64 kk = 2 * k * k;
      const auto f = f_tilde(0.5, kk, X, Y, spec, 0);
      const auto fp = f_tilde(0.5, kk, X, Y, spec, 1);
      terms[static_cast<std::size_t>(k - 1)] = {f.value.real(), f.abs_error, fp.value.real(), fp.abs_error};
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  CompensatedSum<double> s0, s1, s2;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0, gmax = 0.0, gdmax = 0.0;
  for (i64 k = 1; k <= K; ++k) {
    const auto& t = terms[static_cast<std::size_t>(k - 1)];
    const auto g = table.at(k);
    const double G = g.value.value, Ge = g.value.abs_error, D = g.derivative.value, De = g.derivative.abs_error;
    s0 += t.f * G;
    s1 += t.fp * G;
    s2 += t.f * D;
    e0 += t.fe * std::abs(G) + std::abs(t.f) * Ge;
    e1 += t.fpe * std::abs(G) + std::abs(t.fp) * Ge;
    e2 += t.fe * std::abs(D) + std::abs(t.f) * De;
    gmax = std::max(gmax, std::abs(G) + Ge);
    gdmax = std::max(gdmax, std::abs(D) + De);
  }
  // dropped k > K: the envelope falls off like k^{-16}; sum it until negligible
  double tail_env = 0.0;
  for (i64 k = K + 1; k <= K + 100000; ++k) {
    const double e = envelope(k);
    tail_env += e;
    if (e < 1e-30) break;
  }
  const double lY = std::log(Y) + 2.0 * kEulerGamma;
  M12Result r;
  r.k_used = K;
  r.sum_fg = s0.value();
  r.sum_fpg = s1.value();
  r.sum_fgp = s2.value();
  const double scale = X * std::sqrt(Y);
  r.value = scale * (lY * r.sum_fg + r.sum_fpg + r.sum_fgp);
  // int_0^1 t^{-1/2} |log t| dt = 4, twice the weight behind the f~ envelope
  r.tail_bound = scale * tail_env * (std::abs(lY) * gmax + 2.0 * gmax + gdmax);
  r.abs_error = scale * (std::abs(lY) * e0 + e1 + e2) + r.tail_bound + 1e-14 * std::abs(r.value);
  return r;
}

/// The error budget of the finite-U off-diagonal term at exponent eps:
/// X Y^{1/2} log Y U^{-(1-eps)/2} (Y/X)^{(1+eps)/2} + Y^{3/2} log Y / U.
inline double m12_budget(double X, double Y, double U, double eps = 0.05) {
  const double lY = std::log(Y);
  return X * std::sqrt(Y) * lY * std::pow(U, -(1.0 - eps) / 2.0) * std::pow(Y / X, (1.0 + eps) / 2.0) +
         std::pow(Y, 1.5) * lY / U;
}

// ---------------------------------------------------------------------------
// the full main term

struct AsymptoticBreakdown {
  double X = 0.0, Y = 0.0;
  double t_lead = 0.0, t_p1 = 0.0, t_c1 = 0.0, t_c2 = 0.0;
  double main_total = 0.0;
  double main_error = 0.0;  // numerical error of the four terms
  double error_expression = 0.0;
  double U_used = 0.0;
  double epsilon = 0.05;
};

/// ((X Y^{1/2} + Y X^{1/2}) / (X Y^{1/4}))^{2/3}
inline double default_smoothing_parameter(double X, double Y) {
  const double V = (X * std::sqrt(Y) + Y * std::sqrt(X)) / (X * std::pow(Y, 0.25));
  return std::pow(V, 2.0 / 3.0);
}

/// The O(.) argument of the asymptotic formula with V = U^{3/2}:
///   X^{1+e} Y^{1/4+e} V^{2/3} + X^{1+e} Y^{1/2+e} V^{-1/3} (Y/X)^{(1+e)/2}
///   + Y^{3/2+e} V^{-2/3} + X^{1+e} Y^e (Y/X)^2 V^2.
inline double error_expression(double X, double Y, double eps = 0.05) {
  const double V = (X * std::sqrt(Y) + Y * std::sqrt(X)) / (X * std::pow(Y, 0.25));
  const double Xe = std::pow(X, 1.0 + eps);
  return Xe * std::pow(Y, 0.25 + eps) * std::pow(V, 2.0 / 3.0) +
         Xe * std::pow(Y, 0.5 + eps) * std::pow(V, -1.0 / 3.0) * std::pow(Y / X, (1.0 + eps) / 2.0) +
         std::pow(Y, 1.5 + eps) * std::pow(V, -2.0 / 3.0) + Xe * std::pow(Y, eps) * (Y / X) * (Y / X) * V * V;
}

/// Everything the main term needs, computed once and shared across (X, Y).
class MainTermContext {
 public:
  explicit MainTermContext(const MainTermPolynomial& poly, const ScriptGTable& table, CConstantsConfig cfg = {})
      : poly_(poly), engine_(table, cfg) {}

  const MainTermPolynomial& polynomial() const noexcept { return poly_; }
  const ConstantsEngine& constants() const noexcept { return engine_; }

  AsymptoticBreakdown evaluate(double X, double Y, double eps = 0.05, double U = 0.0) const {
    if (!(X >= 16.0) || !(Y >= 16.0)) throw domain_error("main_term: requires X, Y >= 16");
    AsymptoticBreakdown b;
    b.X = X;
    b.Y = Y;
    b.epsilon = eps;
    b.U_used = U > 0.0 ? U : default_smoothing_parameter(X, Y);
    const double L = std::log(Y), sY = std::sqrt(Y);
    const double half = 0.5 * X * sY;  // X W~(0)/2 * Y^{1/2}, W~(0) -> 1
    b.t_lead = half * poly_.lead_coeff * L * L;
    b.t_p1 = half * poly_.p1(L);
    const auto c = engine_.at(Y / X);
    const double X15 = std::pow(X, 1.5);
    const double lx = std::log(X) + 2.0 * kEulerGamma;
    b.t_c1 = X15 * lx * c.c1;
    b.t_c2 = X15 * c.c2;
    b.main_total = b.t_lead + b.t_p1 + b.t_c1 + b.t_c2;
    b.main_error = half * (poly_.lead_err * L * L + poly_.p1_lin_err * L + poly_.p1_const_err) +
                   X15 * (std::abs(lx) * c.c1_err + c.c2_err);
    b.error_expression = error_expression(X, Y, eps);
    return b;
  }

 private:
  MainTermPolynomial poly_;
  ConstantsEngine engine_;
};

inline AsymptoticBreakdown main_term(double X, double Y, double eps = 0.05) {
  const ScriptGTable table;
  const MainTermContext ctx(residue_m0(Y), table);
  return ctx.evaluate(X, Y, eps);
}

}  // namespace quadmean
