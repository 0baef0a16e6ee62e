//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pepforge/grpo/grpo.h"
#include "pepforge/prompts/prompts.h"
#include "pepforge/properties/properties.h"
#include "pepforge/reward/reward.h"

namespace pepforge::app {

// Carries the JSON path of the offending field, e.g. "/reward/alpha".
class ConfigError: public std::runtime_error {
public:
  ConfigError(std::string path, const std::string &what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) { }
  const std::string &path() const { return path_; }

private:
  std::string path_;
};

struct AppConfig {
  properties::BucketThresholds thresholds;
  reward::RewardConfig reward;
  grpo::GrpoConfig grpo;
  properties::SurrogateCoefficients surrogate;
  properties::SplitConfig splits;
  prompts::PromptStyle prompt_style;
  std::string vocabulary_path = "monomers.tsv";
  std::string seeds_path = "seeds.helm";
  int augment_k = 100;
  std::uint64_t rng_seed = 20250801;
  std::string host = "127.0.0.1";
  int port = 8731;

  // Throws ConfigError for numeric constraints; paths are checked by
  // check_paths.
  void validate() const;
  void check_paths() const;
};

// Missing keys keep their defaults; unknown keys are errors. Relative
// paths are resolved against `base_dir` when it is not empty.
AppConfig config_from_json(const nlohmann::json &j,
                           const std::string &base_dir = "");
nlohmann::json config_to_json(const AppConfig &c);

// 16 hex digits over every field.
std::string config_hash(const AppConfig &c);

// Reads, validates and checks paths.
AppConfig load_config(const std::string &path);

// The explicit path if given, else $PEPFORGE_CONFIG, else nothing.
std::optional<std::string> resolve_config_path(
    const std::optional<std::string> &explicit_path);

}  // namespace pepforge::app
