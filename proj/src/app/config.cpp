//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/app/config.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "pepforge/util/hash.h"

namespace pepforge::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed.
class Reader {
public:
  Reader(const json &j, std::string path): j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  template <class T> void get(const char *key, T &out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end())
      return;
    try {
      out = it->template get<T>();
    } catch (const json::exception &) {
      throw ConfigError(path_ + "/" + key, "wrong type");
    }
  }

  void get(const char *key, double &out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end())
      return;
    if (!it->is_number())
      throw ConfigError(path_ + "/" + key, "expected a number");
    out = it->get<double>();
  }

  void get(const char *key, std::array<double, 3> &out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end())
      return;
    if (!it->is_array() || it->size() != 3)
      throw ConfigError(path_ + "/" + key, "expected 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*it)[i].is_number())
        throw ConfigError(path_ + "/" + key + "/" + std::to_string(i),
                          "expected a number");
      out[i] = (*it)[i].get<double>();
    }
  }

  // Nested object, if present.
  const json *child(const char *key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string sub(const char *key) const { return path_ + "/" + key; }

  void finish() const {
    for (const auto &[key, value]: j_.items())
      if (!seen_.count(key))
        throw ConfigError(path_ + "/" + key, "unknown field");
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_cuts(const json &j, const std::string &path, properties::Cuts &c) {
  Reader r(j, path);
  r.get("lo", c.lo);
  r.get("hi", c.hi);
  r.finish();
}

std::string resolve(const std::string &p, const std::string &base) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute())
    return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

AppConfig config_from_json(const json &j, const std::string &base_dir) {
  AppConfig c;
  Reader r(j, "");

  if (const json *t = r.child("thresholds")) {
    Reader rt(*t, "/thresholds");
    if (const json *x = rt.child("logd"))
      read_cuts(*x, "/thresholds/logd", c.thresholds.logd);
    if (const json *x = rt.child("mrt"))
      read_cuts(*x, "/thresholds/mrt", c.thresholds.mrt);
    if (const json *x = rt.child("sif"))
      read_cuts(*x, "/thresholds/sif", c.thresholds.sif);
    rt.finish();
  }
  if (const json *x = r.child("reward")) {
    Reader rr(*x, "/reward");
    rr.get("thresholds", c.reward.thresholds);
    rr.get("scales", c.reward.scales);
    rr.get("alpha", c.reward.alpha);
    rr.get("s0", c.reward.s0);
    rr.get("gamma", c.reward.gamma);
    rr.get("w_prop", c.reward.w_prop);
    rr.get("w_sim", c.reward.w_sim);
    rr.get("history_capacity", c.reward.history_capacity);
    rr.get("fingerprint_radius", c.reward.fingerprint_radius);
    rr.get("fingerprint_bits", c.reward.fingerprint_bits);
    rr.finish();
  }
  if (const json *x = r.child("grpo")) {
    Reader rg(*x, "/grpo");
    rg.get("epsilon", c.grpo.epsilon);
    rg.get("beta", c.grpo.beta);
    rg.finish();
  }
  if (const json *x = r.child("surrogate")) {
    Reader rs(*x, "/surrogate");
    auto &s = c.surrogate;
    rs.get("logd_intercept", s.logd_intercept);
    rs.get("logd_aliphatic", s.logd_aliphatic);
    rs.get("logd_aromatic", s.logd_aromatic);
    rs.get("logd_halogen", s.logd_halogen);
    rs.get("logd_donor", s.logd_donor);
    rs.get("logd_acceptor", s.logd_acceptor);
    rs.get("mrt_intercept", s.mrt_intercept);
    rs.get("mrt_n_methyl", s.mrt_n_methyl);
    rs.get("mrt_logd", s.mrt_logd);
    rs.get("mrt_ring", s.mrt_ring);
    rs.get("sif_intercept", s.sif_intercept);
    rs.get("sif_n_methyl", s.sif_n_methyl);
    rs.get("sif_non_natural", s.sif_non_natural);
    rs.get("sif_logd", s.sif_logd);
    rs.finish();
  }
  if (const json *x = r.child("splits")) {
    Reader rs(*x, "/splits");
    rs.get("cap_per_group", c.splits.cap_per_group);
    rs.get("rl_pool_size", c.splits.rl_pool_size);
    rs.get("test_size", c.splits.test_size);
    rs.get("test_seed_fraction", c.splits.test_seed_fraction);
    rs.get("groups", c.splits.groups);
    rs.finish();
  }
  if (const json *x = r.child("prompts")) {
    Reader rp(*x, "/prompts");
    std::string kind(prompts::kind_name(c.prompt_style.kind));
    bool all_three = c.prompt_style.objective == prompts::ObjectiveMode::kAllThree;
    rp.get("kind", kind);
    rp.get("objective_all_three", all_three);
    rp.finish();
    try {
      c.prompt_style.kind = prompts::parse_kind(kind);
    } catch (const prompts::PromptError &e) {
      throw ConfigError("/prompts/kind", e.what());
    }
    c.prompt_style.objective = all_three ? prompts::ObjectiveMode::kAllThree
                                         : prompts::ObjectiveMode::kImprovedSet;
  }
  r.get("vocabulary_path", c.vocabulary_path);
  r.get("seeds_path", c.seeds_path);
  r.get("augment_k", c.augment_k);
  r.get("rng_seed", c.rng_seed);
  r.get("host", c.host);
  r.get("port", c.port);
  r.finish();

  c.vocabulary_path = resolve(c.vocabulary_path, base_dir);
  c.seeds_path = resolve(c.seeds_path, base_dir);
  c.validate();
  return c;
}

json config_to_json(const AppConfig &c) {
  auto cuts = [](const properties::Cuts &x) {
    return json { { "lo", x.lo }, { "hi", x.hi } };
  };
  const auto &s = c.surrogate;
  return {
    { "thresholds", { { "logd", cuts(c.thresholds.logd) },
                      { "mrt", cuts(c.thresholds.mrt) },
                      { "sif", cuts(c.thresholds.sif) } } },
    { "reward", { { "thresholds", c.reward.thresholds },
                  { "scales", c.reward.scales },
                  { "alpha", c.reward.alpha },
                  { "s0", c.reward.s0 },
                  { "gamma", c.reward.gamma },
                  { "w_prop", c.reward.w_prop },
                  { "w_sim", c.reward.w_sim },
                  { "history_capacity", c.reward.history_capacity },
                  { "fingerprint_radius", c.reward.fingerprint_radius },
                  { "fingerprint_bits", c.reward.fingerprint_bits } } },
    { "grpo", { { "epsilon", c.grpo.epsilon }, { "beta", c.grpo.beta } } },
    { "surrogate", { { "logd_intercept", s.logd_intercept },
                     { "logd_aliphatic", s.logd_aliphatic },
                     { "logd_aromatic", s.logd_aromatic },
                     { "logd_halogen", s.logd_halogen },
                     { "logd_donor", s.logd_donor },
                     { "logd_acceptor", s.logd_acceptor },
                     { "mrt_intercept", s.mrt_intercept },
                     { "mrt_n_methyl", s.mrt_n_methyl },
                     { "mrt_logd", s.mrt_logd },
                     { "mrt_ring", s.mrt_ring },
                     { "sif_intercept", s.sif_intercept },
                     { "sif_n_methyl", s.sif_n_methyl },
                     { "sif_non_natural", s.sif_non_natural },
                     { "sif_logd", s.sif_logd } } },
    { "splits", { { "cap_per_group", c.splits.cap_per_group },
                  { "rl_pool_size", c.splits.rl_pool_size },
                  { "test_size", c.splits.test_size },
                  { "test_seed_fraction", c.splits.test_seed_fraction },
                  { "groups", c.splits.groups } } },
    { "prompts",
      { { "kind", prompts::kind_name(c.prompt_style.kind) },
        { "objective_all_three",
          c.prompt_style.objective == prompts::ObjectiveMode::kAllThree } } },
    { "vocabulary_path", c.vocabulary_path },
    { "seeds_path", c.seeds_path },
    { "augment_k", c.augment_k },
    { "rng_seed", c.rng_seed },
    { "host", c.host },
    { "port", c.port },
  };
}

void AppConfig::validate() const {
  try {
    thresholds.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError("/thresholds", e.what());
  }
  try {
    reward.validate();
  } catch (const reward::RewardError &e) {
    throw ConfigError("/reward", e.what());
  }
  try {
    grpo.validate();
  } catch (const grpo::GrpoError &e) {
    throw ConfigError("/grpo", e.what());
  }
  if (!(splits.test_seed_fraction >= 0 && splits.test_seed_fraction < 1))
    throw ConfigError("/splits/test_seed_fraction", "must be in [0, 1)");
  if (augment_k < 1)
    throw ConfigError("/augment_k", "must be positive");
  if (port < 0 || port > 65535)
    throw ConfigError("/port", "out of range");
}

void AppConfig::check_paths() const {
  if (!fs::is_regular_file(vocabulary_path))
    throw ConfigError("/vocabulary_path", "no such file: " + vocabulary_path);
  if (!fs::is_regular_file(seeds_path))
    throw ConfigError("/seeds_path", "no such file: " + seeds_path);
}

std::string config_hash(const AppConfig &c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    hash_bytes(config_to_json(c).dump())));
  return buf;
}

AppConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", "cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  AppConfig c = config_from_json(j, fs::path(path).parent_path().string());
  c.check_paths();
  return c;
}

std::optional<std::string> resolve_config_path(
    const std::optional<std::string> &explicit_path) {
  if (explicit_path && !explicit_path->empty())
    return explicit_path;
  if (const char *env = std::getenv("PEPFORGE_CONFIG"); env && *env)
    return std::string(env);
  return std::nullopt;
}

}  // namespace pepforge::app
