#pragma once

// Versioned JSON cache of the constants behind the main term: gamma, gamma_1,
// eta(1), eta'(1), eta''(1) and G(1/2, 2k^2), G'(1/2, 2k^2) for k <= K.
// Every entry is keyed by quantity, parameters, cutoffs and tolerance; a file
// written by another format version is refused.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quadmean/asymptotic.hpp"
#include "quadmean/dirichlet.hpp"
#include "quadmean/error.hpp"

namespace quadmean {

inline constexpr int kCacheVersion = 1;
inline constexpr const char* kCacheFormat = "quadmean-constants";
inline constexpr const char* kCacheEnv = "QUADMEAN_CACHE";
inline constexpr const char* kDefaultCachePath = "quadmean-constants.json";

/// Version mismatch: the file must be rebuilt.
class stale_cache_error : public error {
 public:
  using error::error;
};

struct CacheConfig {
  i64 eta_cutoff = kEtaCutoff;
  i64 script_g_cutoff = kScriptGFamilyCutoff;
  i64 k_max = 1000;
  double tolerance = QuadratureConfig{}.abs_tol;

  bool operator==(const CacheConfig&) const = default;
};

struct ConstantsCache {
  CacheConfig config;
  Estimate<double> gamma0, gamma1;
  EtaJet eta;
  std::vector<ScriptGTable::Value> script_g;  // k = 1..k_max

  ScriptGTable table() const { return ScriptGTable(script_g, config.script_g_cutoff); }
  MainTermPolynomial polynomial() const { return residue_polynomial(eta); }
};

/// QUADMEAN_CACHE if set, otherwise the configured path, otherwise the default.
inline std::string resolve_cache_path(const std::string& configured = {}) {
  if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0') return env;
  return configured.empty() ? kDefaultCachePath : configured;
}

inline ConstantsCache build_cache(const CacheConfig& cfg) {
  if (cfg.k_max < 0) throw domain_error("build_cache: k_max must be >= 0");
  ConstantsCache c;
  c.config = cfg;
  c.gamma0 = {stieltjes(0), kStieltjesAbsError};
  c.gamma1 = {stieltjes(1), kStieltjesAbsError};
  c.eta = eta_jet_at_one(cfg.eta_cutoff);
  const ScriptGSquareFamily family(0.5, cfg.script_g_cutoff);
  c.script_g.reserve(static_cast<std::size_t>(cfg.k_max));
  for (i64 k = 1; k <= cfg.k_max; ++k) c.script_g.push_back(family.evaluate(k));
  return c;
}

namespace detail {

using json = nlohmann::json;

inline json cache_entry(const char* quantity, json parameters, json cutoffs, double tolerance,
                        const Estimate<double>& v) {
  return {{"quantity", quantity},
          {"parameters", std::move(parameters)},
          {"cutoffs", std::move(cutoffs)},
          {"tolerance", tolerance},
          {"value", v.value},
          {"abs_error", v.abs_error}};
}

inline Estimate<double> entry_estimate(const json& e) {
  return {e.at("value").get<double>(), e.at("abs_error").get<double>()};
}

}  // namespace detail

inline nlohmann::json cache_to_json(const ConstantsCache& c) {
  using detail::json;
  const auto& cfg = c.config;
  json entries = json::array();
  const json em = {{"euler_maclaurin_n", kZetaEulerMaclaurinN}};
  const json eta_cut = {{"prime_cutoff", cfg.eta_cutoff}};
  const json g_cut = {{"prime_cutoff", cfg.script_g_cutoff}};
  entries.push_back(detail::cache_entry("gamma", {{"n", 0}}, em, cfg.tolerance, c.gamma0));
  entries.push_back(detail::cache_entry("gamma", {{"n", 1}}, em, cfg.tolerance, c.gamma1));
  entries.push_back(detail::cache_entry("eta", {{"s", 1.0}, {"order", 0}}, eta_cut, cfg.tolerance, c.eta.d0));
  entries.push_back(detail::cache_entry("eta", {{"s", 1.0}, {"order", 1}}, eta_cut, cfg.tolerance, c.eta.d1));
  entries.push_back(detail::cache_entry("eta", {{"s", 1.0}, {"order", 2}}, eta_cut, cfg.tolerance, c.eta.d2));
  for (std::size_t i = 0; i < c.script_g.size(); ++i) {
    const json params = {{"s", 0.5}, {"k", static_cast<i64>(i) + 1}, {"argument", "2k^2"}};
    entries.push_back(detail::cache_entry("script_g", params, g_cut, cfg.tolerance, c.script_g[i].value));
    entries.push_back(detail::cache_entry("script_g_derivative", params, g_cut, cfg.tolerance,
                                          c.script_g[i].derivative));
  }
  return {{"format", kCacheFormat},
          {"version", kCacheVersion},
          {"config",
           {{"eta_cutoff", cfg.eta_cutoff},
            {"script_g_cutoff", cfg.script_g_cutoff},
            {"k_max", cfg.k_max},
            {"tolerance", cfg.tolerance}}},
          {"entries", std::move(entries)}};
}

inline ConstantsCache cache_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != kCacheFormat) throw stale_cache_error("cache: not a constants cache file");
  const int version = j.value("version", -1);
  if (version != kCacheVersion)
    throw stale_cache_error("cache: version " + std::to_string(version) + " found, " +
                            std::to_string(kCacheVersion) + " required; rebuild with `cache build`");
  ConstantsCache c;
  const auto& cfg = j.at("config");
  c.config.eta_cutoff = cfg.at("eta_cutoff").get<i64>();
  c.config.script_g_cutoff = cfg.at("script_g_cutoff").get<i64>();
  c.config.k_max = cfg.at("k_max").get<i64>();
  c.config.tolerance = cfg.at("tolerance").get<double>();
  c.script_g.resize(static_cast<std::size_t>(c.config.k_max));
  std::vector<int> seen(static_cast<std::size_t>(c.config.k_max), 0);
  int base = 0;
  for (const auto& e : j.at("entries")) {
    const auto q = e.at("quantity").get<std::string>();
    const auto& p = e.at("parameters");
    const auto v = detail::entry_estimate(e);
    if (q == "gamma") {
      (p.at("n").get<int>() == 0 ? c.gamma0 : c.gamma1) = v;
      ++base;
    } else if (q == "eta") {
      const int order = p.at("order").get<int>();
      (order == 0 ? c.eta.d0 : order == 1 ? c.eta.d1 : c.eta.d2) = v;
      ++base;
    } else if (q == "script_g" || q == "script_g_derivative") {
      const i64 k = p.at("k").get<i64>();
      if (k < 1 || k > c.config.k_max) throw stale_cache_error("cache: entry k out of range");
      auto& slot = c.script_g[static_cast<std::size_t>(k - 1)];
      (q == "script_g" ? slot.value : slot.derivative) = v;
      ++seen[static_cast<std::size_t>(k - 1)];
    }
  }
  if (base != 5) throw stale_cache_error("cache: missing gamma or eta entries");
  for (int s : seen)
    if (s != 2) throw stale_cache_error("cache: missing script_g entries");
  return c;
}

/// Pretty-printed with sorted keys, so identical configs give identical bytes.
inline std::string cache_serialize(const ConstantsCache& c) { return cache_to_json(c).dump(2) + "\n"; }

inline void write_cache(const std::string& path, const ConstantsCache& c) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw resource_error("cache: cannot write " + tmp);
    out << cache_serialize(c);
    if (!out) throw resource_error("cache: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, p);
}

/// nullopt when absent; stale_cache_error on a version mismatch or a damaged file.
inline std::optional<ConstantsCache> read_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw stale_cache_error(std::string("cache: unreadable file: ") + e.what());
  }
  try {
    return cache_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw stale_cache_error(std::string("cache: malformed entry: ") + e.what());
  }
}

/// The cached constants for `cfg`, rebuilding and rewriting the file when it is
/// missing or was built with different cutoffs. A stale version propagates.
inline ConstantsCache ensure_cache(const std::string& path, const CacheConfig& cfg, bool* rebuilt = nullptr) {
  if (auto c = read_cache(path); c && c->config == cfg) {
    if (rebuilt) *rebuilt = false;
    return *c;
  }
  auto c = build_cache(cfg);
  write_cache(path, c);
  if (rebuilt) *rebuilt = true;
  return c;
}

inline bool clear_cache(const std::string& path) { return std::filesystem::remove(path); }

}  // namespace quadmean
