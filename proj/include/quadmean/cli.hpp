#pragma once

// Command-line front end. `run` parses argv, loads the key-value config file,
// dispatches to the library and prints JSON (one object per line) or CSV.
// Exit codes: 0 success, 1 usage or validation error, 2 accuracy or resource error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quadmean/arith.hpp"
#include "quadmean/asymptotic.hpp"
#include "quadmean/cache.hpp"
#include "quadmean/dirichlet.hpp"
#include "quadmean/error.hpp"
#include "quadmean/gauss.hpp"
#include "quadmean/smoothing.hpp"
#include "quadmean/sums.hpp"
#include "quadmean/verify.hpp"

namespace quadmean::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

// ---------------------------------------------------------------------------
// configuration

struct Config {
  QuadratureConfig quadrature{};
  i64 eta_cutoff = kEtaCutoff;
  i64 script_g_cutoff = kScriptGCutoff;
  i64 script_g_family_cutoff = kScriptGFamilyCutoff;
  i64 constants_k_cutoff = kConstantsKCutoff;
  i64 cache_k_max = 1000;
  i64 l_function_terms = kLFunctionTerms;
  i64 sum_y_cap = kFastYCap;
  i64 gauss_direct_cap = kGaussDirectCap;
  int threads = 1;
  std::string cache_path;
  std::uint64_t seed = 20240229;
  double epsilon = 0.05;

  CacheConfig cache_config() const {
    return {eta_cutoff, script_g_family_cutoff, cache_k_max, quadrature.abs_tol};
  }
  CConstantsConfig constants_config() const {
    CConstantsConfig c;
    c.k_cutoff = constants_k_cutoff;
    c.quadrature = quadrature;
    return c;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof()) throw domain_error("config: bad value for '" + key + "': " + text);
  return v;
}

}  // namespace detail

/// `key = value` lines; `#` starts a comment. Unknown keys are rejected.
inline Config parse_config(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw domain_error("config: line " + std::to_string(lineno) + " is not of the form key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto val = detail::trim(line.substr(eq + 1));
    using detail::parse_number;
    if (key == "quadrature.abs_tol") c.quadrature.abs_tol = parse_number<double>(key, val);
    else if (key == "quadrature.rel_tol") c.quadrature.rel_tol = parse_number<double>(key, val);
    else if (key == "quadrature.max_subdivisions") c.quadrature.max_subdivisions = parse_number<int>(key, val);
    else if (key == "quadrature.panels_per_period") c.quadrature.oscillation_panels_per_period = parse_number<int>(key, val);
    else if (key == "eta.prime_cutoff") c.eta_cutoff = parse_number<i64>(key, val);
    else if (key == "script_g.prime_cutoff") c.script_g_cutoff = parse_number<i64>(key, val);
    else if (key == "script_g.family_prime_cutoff") c.script_g_family_cutoff = parse_number<i64>(key, val);
    else if (key == "constants.k_cutoff") c.constants_k_cutoff = parse_number<i64>(key, val);
    else if (key == "cache.k_max") c.cache_k_max = parse_number<i64>(key, val);
    else if (key == "cache.path") c.cache_path = val;
    else if (key == "l_function.terms") c.l_function_terms = parse_number<i64>(key, val);
    else if (key == "sum.y_cap") c.sum_y_cap = parse_number<i64>(key, val);
    else if (key == "gauss.direct_cap") c.gauss_direct_cap = parse_number<i64>(key, val);
    else if (key == "threads") c.threads = parse_number<int>(key, val);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, val);
    else if (key == "epsilon") c.epsilon = parse_number<double>(key, val);
    else throw domain_error("config: unknown key '" + key + "'");
  }
  c.quadrature.validate();
  auto positive = [](i64 v, const char* name) {
    if (v < 1) throw domain_error(std::string("config: ") + name + " must be >= 1");
  };
  positive(c.eta_cutoff, "eta.prime_cutoff");
  positive(c.script_g_cutoff, "script_g.prime_cutoff");
  positive(c.constants_k_cutoff, "constants.k_cutoff");
  positive(c.l_function_terms, "l_function.terms");
  positive(c.sum_y_cap, "sum.y_cap");
  positive(c.gauss_direct_cap, "gauss.direct_cap");
  positive(c.threads, "threads");
  if (c.cache_k_max < 0) throw domain_error("config: cache.k_max must be >= 0");
  if (c.script_g_family_cutoff < 17) throw domain_error("config: script_g.family_prime_cutoff must be >= 17");
  if (c.eta_cutoff > quadmean::detail::kSharedPrimeLimit || c.script_g_cutoff > quadmean::detail::kSharedPrimeLimit ||
      c.script_g_family_cutoff > quadmean::detail::kSharedPrimeLimit)
    throw domain_error("config: prime cutoffs must be <= 2000000");
  if (!(c.epsilon > 0.0) || !(c.epsilon < 0.5)) throw domain_error("config: epsilon must be in (0, 0.5)");
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// output

/// A double rounded to 15 significant digits; non-finite values become strings.
inline ojson num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

/// Exact integers as JSON numbers while they fit in 64 bits, decimal strings beyond.
inline ojson exact(i128 v) {
  if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max()) return static_cast<i64>(v);
  return to_string(v);
}

inline ojson estimate(const Estimate<double>& e) { return {{"value", num(e.value)}, {"abs_error", num(e.abs_error)}}; }

class Emitter {
 public:
  Emitter(std::ostream& out, bool csv) : out_(out), csv_(csv) {}

  void emit(const ojson& record) {
    if (!csv_) {
      out_ << record.dump() << "\n";
      return;
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten("", record, flat);
    if (header_.empty()) {
      for (const auto& [k, v] : flat) header_.push_back(k);
      write_row(header_);
    }
    std::vector<std::string> row;
    for (const auto& h : header_) {
      std::string cell;
      for (const auto& [k, v] : flat)
        if (k == h) cell = v;
      row.push_back(cell);
    }
    write_row(row);
  }

 private:
  static void flatten(const std::string& prefix, const ojson& j,
                      std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) flatten(prefix.empty() ? k : prefix + "." + k, v, out);
    } else if (j.is_string()) {
      out.emplace_back(prefix, j.get<std::string>());
    } else {
      out.emplace_back(prefix, j.dump());
    }
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out_ << '"';
        for (char ch : c) out_ << (ch == '"' ? std::string("\"\"") : std::string(1, ch));
        out_ << '"';
      } else {
        out_ << c;
      }
    }
    out_ << "\n";
  }

  std::ostream& out_;
  bool csv_;
  std::vector<std::string> header_;
};

inline ojson report_json(const CheckReport& r) {
  ojson params = ojson::object(), extra = ojson::object();
  for (const auto& [k, v] : r.parameters) params[k] = num(v);
  for (const auto& [k, v] : r.extra) extra[k] = num(v);
  return {{"name", r.name},
          {"parameters", params},
          {"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"ratio_or_gap", num(r.ratio_or_gap)},
          {"tolerance_or_bound", num(r.tolerance_or_bound)},
          {"pass", r.pass},
          {"status", to_string(r.status)},
          {"extra", extra}};
}

inline ojson breakdown_json(const AsymptoticBreakdown& b) {
  return {{"X", num(b.X)},
          {"Y", num(b.Y)},
          {"t_lead", num(b.t_lead)},
          {"t_p1", num(b.t_p1)},
          {"t_c1", num(b.t_c1)},
          {"t_c2", num(b.t_c2)},
          {"main_total", num(b.main_total)},
          {"main_abs_error", num(b.main_error)},
          {"error_expression", num(b.error_expression)},
          {"U_used", num(b.U_used)},
          {"epsilon", num(b.epsilon)}};
}

// ---------------------------------------------------------------------------
// dispatcher

struct Options {
  std::string config_path;
  bool csv = false;
  int threads = 0;  // 0: from config

  i64 m = 0, n = 0, k = 0, x = 0, y = 0;
  double s = 0.0, s_imag = 0.0, u = 0.0, alpha_from = 0.0, alpha_to = 0.0, alpha_step = 0.0, eps = 0.0;
  double xr = 0.0, yr = 0.0;
  int order = 0, trials = 50;
  i64 k_max = 0, seed = -1;
  std::string mode = "fast", method = "both", law = "sign", u_text = "inf";
  std::vector<double> alphas, u_grid;
  bool derivative = false;
};

namespace detail {

inline ConstantsCache cached_constants(const Config& cfg) {
  return ensure_cache(resolve_cache_path(cfg.cache_path), cfg.cache_config());
}

inline SumQuery sum_query(i64 X, i64 Y, SumMode mode, int threads, const Config& cfg) {
  SumQuery q;
  q.X = X;
  q.Y = Y;
  q.mode = mode;
  q.threads = threads;
  q.y_cap = cfg.sum_y_cap;
  return q;
}

inline ojson sum_json(const SumResult& r) {
  ojson j = {{"X", r.X}, {"Y", r.Y}, {"mode", to_string(r.mode)}};
  if (r.mode == SumMode::smoothed) {
    j["U"] = num(r.U);
    j["value"] = num(r.value_real);
  } else {
    j["value"] = exact(r.value_exact);
  }
  j["partition_count"] = r.partition_count;
  j["elapsed_ms"] = num(r.elapsed_ms);
  return j;
}

}  // namespace detail

/// Runs one command line; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical companion for the mean value of quadratic characters weighted by d(n)", "quadmean"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options o;
  app.add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_flag("--csv", o.csv, "emit CSV instead of JSON lines");
  app.add_option("--threads", o.threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);

  auto* kron = app.add_subcommand("kronecker", "Kronecker symbol (m/n)");
  kron->add_option("--m", o.m)->required();
  kron->add_option("--n", o.n)->required();

  auto* gauss = app.add_subcommand("gauss", "Gauss-type sum G_m(k), k odd");
  gauss->add_option("--m", o.m)->required();
  gauss->add_option("--k", o.k)->required();
  gauss->add_option("--method", o.method, "direct | fast | both")->check(CLI::IsMember({"direct", "fast", "both"}));

  auto* sum = app.add_subcommand("sum", "exact S(X, Y)");
  sum->add_option("--x", o.x)->required()->check(CLI::PositiveNumber);
  sum->add_option("--y", o.y)->required()->check(CLI::PositiveNumber);
  sum->add_option("--mode", o.mode, "naive | fast")->check(CLI::IsMember({"naive", "fast"}));

  auto* ssum = app.add_subcommand("smoothed-sum", "smoothed sum with weights Phi(n/Y) W(m/X)");
  ssum->add_option("--x", o.x)->required()->check(CLI::PositiveNumber);
  ssum->add_option("--y", o.y)->required()->check(CLI::PositiveNumber);
  ssum->add_option("--u", o.u, "sharpness U >= 4")->required();

  auto* eta_cmd = app.add_subcommand("eta", "Euler product eta(s) or its derivatives");
  eta_cmd->add_option("--s", o.s)->required();
  eta_cmd->add_option("--s-imag", o.s_imag);
  eta_cmd->add_option("--order", o.order, "derivative order 0..2 (real s)")->check(CLI::Range(0, 2));

  auto* sg = app.add_subcommand("script-g", "correction factor G(s, k)");
  sg->add_option("--s", o.s)->required();
  sg->add_option("--s-imag", o.s_imag);
  sg->add_option("--k", o.k)->required();
  sg->add_flag("--derivative", o.derivative, "also the s-derivative (real s)");

  auto* cons = app.add_subcommand("constants", "C1(alpha), C2(alpha)");
  cons->add_option("--alpha", o.alphas, "alpha values")->delimiter(',');
  cons->add_option("--from", o.alpha_from);
  cons->add_option("--to", o.alpha_to);
  cons->add_option("--step", o.alpha_step);

  auto* mt = app.add_subcommand("main-term", "the four main terms and the error expression");
  mt->add_option("--x", o.xr)->required();
  mt->add_option("--y", o.yr)->required();
  mt->add_option("--eps", o.eps, "exponent in the error expression (default from config)");
  mt->add_option("--u", o.u, "smoothing parameter reported with the breakdown");

  auto* cmp = app.add_subcommand("compare", "S(X, Y) against the main term");
  cmp->add_option("--x", o.x)->required()->check(CLI::PositiveNumber);
  cmp->add_option("--y", o.y)->required()->check(CLI::PositiveNumber);
  cmp->add_option("--eps", o.eps);

  auto* ver = app.add_subcommand("verify", "lemma checks");
  ver->require_subcommand(1);
  auto* vp = ver->add_subcommand("poisson", "twisted Poisson summation");
  vp->add_option("--n", o.n)->required();
  vp->add_option("--x", o.xr)->required();
  vp->add_option("--u", o.u)->required();
  vp->add_option("--k-max", o.k_max, "0: chosen from the decay bound");
  auto* vl = ver->add_subcommand("large-sieve", "quadratic large sieve ratio");
  vl->add_option("--m", o.m)->required();
  vl->add_option("--n", o.n)->required();
  vl->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  vl->add_option("--seed", o.seed, "default from config");
  vl->add_option("--law", o.law, "sign | normal")->check(CLI::IsMember({"sign", "normal"}));
  auto* vg = ver->add_subcommand("gap", "smoothing gap |S - S~|");
  vg->add_option("--x", o.x)->required()->check(CLI::PositiveNumber);
  vg->add_option("--y", o.y)->required()->check(CLI::PositiveNumber);
  vg->add_option("--u", o.u_grid, "U values")->delimiter(',')->required();
  vg->add_option("--eps", o.eps);

  auto* res = app.add_subcommand("residue", "residue at s = 1/2 against a contour integral");
  res->add_option("--y", o.yr)->required();
  res->add_option("--u", o.u_text, "U for the contour oracle, or inf");

  auto* cache = app.add_subcommand("cache", "constants cache");
  cache->require_subcommand(1);
  auto* cb = cache->add_subcommand("build", "compute and write the cache");
  auto* cs = cache->add_subcommand("show", "print the cache");
  auto* cc = cache->add_subcommand("clear", "delete the cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitValidation;
  }

  auto fail = [&](const char* kind, const std::string& what, int code) {
    err << ojson{{"error", kind}, {"message", what}}.dump() << "\n";
    return code;
  };

  try {
    const Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
    const int threads = o.threads > 0 ? o.threads : cfg.threads;
    const double eps = o.eps > 0.0 ? o.eps : cfg.epsilon;
    Emitter emit(out, o.csv);

    if (kron->parsed()) {
      if (o.m == 0 && o.n == 0) throw domain_error("kronecker: (m, n) = (0, 0) is undefined");
      emit.emit({{"m", o.m}, {"n", o.n}, {"value", kronecker(o.m, o.n)}});
    } else if (gauss->parsed()) {
      require_odd_modulus(o.k, "gauss");
      ojson j = {{"m", o.m}, {"k", o.k}};
      std::optional<GaussSumValue> d, f;
      if (o.method != "fast") d = gauss_direct(o.m, o.k, cfg.gauss_direct_cap);
      if (o.method != "direct") f = gauss_fast(o.m, o.k);
      if (d) j["direct"] = {{"re", num(d->re)}, {"im", num(d->im)}};
      if (f) j["fast"] = {{"re", num(f->re)}, {"im", num(f->im)}};
      if (d && f) j["abs_diff"] = num(std::abs(d->complex() - f->complex()));
      emit.emit(j);
    } else if (sum->parsed()) {
      const auto mode = o.mode == "naive" ? SumMode::naive : SumMode::fast;
      const auto q = detail::sum_query(o.x, o.y, mode, threads, cfg);
      emit.emit(detail::sum_json(mode == SumMode::naive ? s_naive(q) : s_fast(q)));
    } else if (ssum->parsed()) {
      auto q = detail::sum_query(o.x, o.y, SumMode::smoothed, threads, cfg);
      q.U = o.u;
      emit.emit(detail::sum_json(s_smoothed(q, SmoothingSpec(o.u, cfg.quadrature))));
    } else if (eta_cmd->parsed()) {
      ojson j = {{"s", num(o.s)}, {"s_imag", num(o.s_imag)}, {"order", o.order}, {"prime_cutoff", cfg.eta_cutoff}};
      if (o.order > 0) {
        if (o.s_imag != 0.0) throw domain_error("eta: derivatives need real s");
        const auto v = eta_derivatives(o.s, o.order, cfg.eta_cutoff);
        j["value"] = num(v.value);
        j["value_imag"] = num(0.0);
        j["abs_error"] = num(v.abs_error);
      } else {
        const auto v = eta(cplx(o.s, o.s_imag), cfg.eta_cutoff);
        j["value"] = num(v.value.real());
        j["value_imag"] = num(v.value.imag());
        j["abs_error"] = num(v.abs_error);
      }
      emit.emit(j);
    } else if (sg->parsed()) {
      if (o.k == 0) throw domain_error("script-g: k must be nonzero");
      const auto v = script_g(cplx(o.s, o.s_imag), o.k, cfg.script_g_cutoff);
      const auto kd = k_decompose(o.k);
      ojson j = {{"s", num(o.s)},   {"s_imag", num(o.s_imag)},         {"k", o.k},
                 {"k1", kd.k1},     {"k2", kd.k2},                     {"prime_cutoff", cfg.script_g_cutoff},
                 {"value", num(v.value.real())}, {"value_imag", num(v.value.imag())}, {"abs_error", num(v.abs_error)}};
      if (o.derivative) {
        if (o.s_imag != 0.0) throw domain_error("script-g: the derivative needs real s");
        const auto d = script_g_derivative(o.s, o.k, cfg.script_g_cutoff);
        j["derivative"] = num(d.value);
        j["derivative_abs_error"] = num(d.abs_error);
      }
      emit.emit(j);
    } else if (cons->parsed()) {
      std::vector<double> grid = o.alphas;
      if (o.alpha_step > 0.0) {
        if (o.alpha_to < o.alpha_from) throw domain_error("constants: --to must be >= --from");
        const long n_steps = std::lround(std::floor((o.alpha_to - o.alpha_from) / o.alpha_step + 1e-9));
        for (long i = 0; i <= n_steps; ++i) grid.push_back(o.alpha_from + o.alpha_step * static_cast<double>(i));
      }
      if (grid.empty()) throw domain_error("constants: give --alpha or --from/--to/--step");
      const auto cc_ = detail::cached_constants(cfg);
      const auto table = cc_.table();
      const ConstantsEngine engine(table, cfg.constants_config());
      for (double a : grid) {
        const auto c = engine.at(a);
        emit.emit({{"alpha", num(c.alpha)},
                   {"c1", num(c.c1)},
                   {"c1_err", num(c.c1_err)},
                   {"c2", num(c.c2)},
                   {"c2_err", num(c.c2_err)}});
      }
    } else if (mt->parsed()) {
      const auto cc_ = detail::cached_constants(cfg);
      const MainTermContext ctx(cc_.polynomial(), cc_.table(), cfg.constants_config());
      emit.emit(breakdown_json(ctx.evaluate(o.xr, o.yr, eps, o.u)));
    } else if (cmp->parsed()) {
      const auto cc_ = detail::cached_constants(cfg);
      const MainTermContext ctx(cc_.polynomial(), cc_.table(), cfg.constants_config());
      const auto b = ctx.evaluate(static_cast<double>(o.x), static_cast<double>(o.y), eps);
      const auto s = s_fast(detail::sum_query(o.x, o.y, SumMode::fast, threads, cfg));
      const double sv = static_cast<double>(s.value_exact);
      emit.emit({{"X", o.x},
                 {"Y", o.y},
                 {"s_exact", exact(s.value_exact)},
                 {"main_total", num(b.main_total)},
                 {"ratio", num(sv / b.main_total)},
                 {"difference", num(sv - b.main_total)},
                 {"error_expression", num(b.error_expression)},
                 {"difference_over_error", num((sv - b.main_total) / b.error_expression)},
                 {"epsilon", num(eps)}});
    } else if (vp->parsed()) {
      PoissonOptions po;
      po.k_max = o.k_max;
      emit.emit(report_json(poisson_check(o.n, o.xr, SmoothingSpec(o.u, cfg.quadrature), po)));
    } else if (vl->parsed()) {
      const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : cfg.seed;
      const auto law = o.law == "normal" ? CoefficientLaw::normal : CoefficientLaw::sign;
      emit.emit(report_json(large_sieve_ratio(o.m, o.n, o.trials, seed, law).report));
    } else if (vg->parsed()) {
      const auto g = smoothing_gap(o.x, o.y, o.u_grid, threads, eps, 10.0, cfg.quadrature);
      for (const auto& r : g.reports) emit.emit(report_json(r));
    } else if (res->parsed()) {
      double U = std::numeric_limits<double>::infinity();
      if (o.u_text != "inf") U = detail::parse_number<double>("--u", o.u_text);
      ResidueModel model;
      model.eta_cutoff = cfg.eta_cutoff;
      const auto poly = residue_m0(o.yr, model);
      const auto oracle = residue_contour_oracle(o.yr, U, model);
      const double r = poly.residue(o.yr);
      emit.emit({{"Y", num(o.yr)},
                 {"U", num(U)},
                 {"lead_coeff", num(poly.lead_coeff)},
                 {"p1_lin", num(poly.p1_lin)},
                 {"p1_const", num(poly.p1_const)},
                 {"residue", num(r)},
                 {"residue_abs_error", num(poly.residue_error(o.yr))},
                 {"oracle", num(oracle.value)},
                 {"oracle_abs_error", num(oracle.abs_error)},
                 {"rel_diff", num(std::abs(r - oracle.value) / std::abs(oracle.value))}});
    } else if (cb->parsed()) {
      const auto path = resolve_cache_path(cfg.cache_path);
      write_cache(path, build_cache(cfg.cache_config()));
      emit.emit({{"path", path}, {"status", "built"}, {"version", kCacheVersion}});
    } else if (cs->parsed()) {
      const auto path = resolve_cache_path(cfg.cache_path);
      const auto c = read_cache(path);
      if (!c) throw resource_error("cache: no cache at " + path + "; run `cache build`");
      if (o.csv) {
        const auto doc = cache_to_json(*c);
        for (const auto& e : doc.at("entries")) {
          ojson row = {{"quantity", e.at("quantity")}, {"parameters", e.at("parameters").dump()},
                       {"cutoffs", e.at("cutoffs").dump()}, {"tolerance", e.at("tolerance")},
                       {"value", num(e.at("value").get<double>())}, {"abs_error", num(e.at("abs_error").get<double>())}};
          emit.emit(row);
        }
      } else {
        out << cache_serialize(*c);
      }
    } else if (cc->parsed()) {
      const auto path = resolve_cache_path(cfg.cache_path);
      const bool removed = clear_cache(path);
      emit.emit({{"path", path}, {"status", removed ? "cleared" : "absent"}});
    }
    return kExitOk;
  } catch (const accuracy_error& e) {
    err << ojson{{"error", "accuracy"}, {"message", e.what()}, {"best_estimate", num(e.best_estimate())},
                 {"error_estimate", num(e.error_estimate())}}.dump()
        << "\n";
    return kExitNumeric;
  } catch (const resource_error& e) {
    return fail("resource", e.what(), kExitNumeric);
  } catch (const stale_cache_error& e) {
    return fail("stale_cache", e.what(), kExitNumeric);
  } catch (const domain_error& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const unsupported_error& e) {
    return fail("unsupported", e.what(), kExitValidation);
  } catch (const error& e) {
    return fail("error", e.what(), kExitNumeric);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitNumeric);
  }
}

}  // namespace quadmean::cli
