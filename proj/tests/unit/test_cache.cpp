#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "quadmean/cache.hpp"

using namespace quadmean;
namespace fs = std::filesystem;

namespace {

CacheConfig small_config() {
  CacheConfig c;
  c.eta_cutoff = 10'000;
  c.script_g_cutoff = 20'000;
  c.k_max = 12;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CacheFile : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("quadmean-cache-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Cache, JsonRoundTripIsExact) {
  const auto c = build_cache(small_config());
  const auto back = cache_from_json(nlohmann::json::parse(cache_serialize(c)));
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.gamma0.value, c.gamma0.value);
  EXPECT_EQ(back.gamma1.value, c.gamma1.value);
  EXPECT_EQ(back.eta.d0.value, c.eta.d0.value);
  EXPECT_EQ(back.eta.d2.abs_error, c.eta.d2.abs_error);
  ASSERT_EQ(back.script_g.size(), 12u);
  for (std::size_t i = 0; i < back.script_g.size(); ++i) {
    EXPECT_EQ(back.script_g[i].value.value, c.script_g[i].value.value) << i;
    EXPECT_EQ(back.script_g[i].derivative.value, c.script_g[i].derivative.value) << i;
  }
  EXPECT_EQ(back.polynomial().lead_coeff, c.polynomial().lead_coeff);
}

TEST(Cache, EntriesCarryKeys) {
  const auto j = cache_to_json(build_cache(small_config()));
  EXPECT_EQ(j.at("format"), kCacheFormat);
  EXPECT_EQ(j.at("version"), kCacheVersion);
  EXPECT_EQ(j.at("entries").size(), 5u + 2u * 12u);
  for (const auto& e : j.at("entries")) {
    for (const char* key : {"quantity", "parameters", "cutoffs", "tolerance", "value", "abs_error"})
      EXPECT_TRUE(e.contains(key)) << key;
  }
}

TEST(Cache, BuildsAreByteIdentical) {
  EXPECT_EQ(cache_serialize(build_cache(small_config())), cache_serialize(build_cache(small_config())));
}

TEST(Cache, StaleVersionIsRefused) {
  auto j = cache_to_json(build_cache(small_config()));
  j["version"] = kCacheVersion + 1;
  EXPECT_THROW(cache_from_json(j), stale_cache_error);
  j["version"] = kCacheVersion;
  j["format"] = "something-else";
  EXPECT_THROW(cache_from_json(j), stale_cache_error);
  j["format"] = kCacheFormat;
  j["entries"].erase(j["entries"].size() - 1);
  EXPECT_THROW(cache_from_json(j), stale_cache_error);
}

TEST_F(CacheFile, WriteReadClear) {
  const auto p = path("c.json");
  EXPECT_FALSE(read_cache(p).has_value());
  const auto c = build_cache(small_config());
  write_cache(p, c);
  const auto first = slurp(p);
  write_cache(p, build_cache(small_config()));
  EXPECT_EQ(slurp(p), first);
  const auto r = read_cache(p);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->config, c.config);
  EXPECT_TRUE(clear_cache(p));
  EXPECT_FALSE(fs::exists(p));
  EXPECT_FALSE(clear_cache(p));
}

TEST_F(CacheFile, DamagedFileIsStale) {
  const auto p = path("bad.json");
  std::ofstream(p) << "{ not json";
  EXPECT_THROW(read_cache(p), stale_cache_error);
  std::ofstream(p, std::ios::trunc) << R"({"format": "quadmean-constants", "version": 1})";
  EXPECT_THROW(read_cache(p), stale_cache_error);
}

TEST_F(CacheFile, EnsureRebuildsOnConfigChange) {
  const auto p = path("e.json");
  bool rebuilt = false;
  auto cfg = small_config();
  ensure_cache(p, cfg, &rebuilt);
  EXPECT_TRUE(rebuilt);
  ensure_cache(p, cfg, &rebuilt);
  EXPECT_FALSE(rebuilt);
  cfg.k_max = 5;
  const auto c = ensure_cache(p, cfg, &rebuilt);
  EXPECT_TRUE(rebuilt);
  EXPECT_EQ(c.script_g.size(), 5u);
  EXPECT_EQ(read_cache(p)->config.k_max, 5);
}

TEST_F(CacheFile, EnsurePropagatesStaleVersion) {
  const auto p = path("v.json");
  auto j = cache_to_json(build_cache(small_config()));
  j["version"] = 0;
  std::ofstream(p) << j.dump();
  EXPECT_THROW(ensure_cache(p, small_config()), stale_cache_error);
}

TEST(Cache, EnvironmentOverridesPath) {
  ::unsetenv(kCacheEnv);
  EXPECT_EQ(resolve_cache_path(), kDefaultCachePath);
  EXPECT_EQ(resolve_cache_path("a.json"), "a.json");
  ::setenv(kCacheEnv, "/tmp/env.json", 1);
  EXPECT_EQ(resolve_cache_path("a.json"), "/tmp/env.json");
  ::unsetenv(kCacheEnv);
}

TEST(Cache, CachedTableMatchesDirectEvaluation) {
  const auto c = build_cache(small_config());
  const ScriptGTable direct(0, small_config().script_g_cutoff);
  const auto t = c.table();
  for (i64 k : {1, 5, 12}) EXPECT_EQ(t.at(k).value.value, direct.at(k).value.value) << k;
  EXPECT_THROW(build_cache({10'000, 20'000, -1, 1e-13}), domain_error);
}
