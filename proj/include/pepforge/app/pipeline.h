//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pepforge/evalkit/evalkit.h"
#include "pepforge/peptide/peptide.h"
#include "pepforge/prompts/prompts.h"
#include "pepforge/properties/properties.h"

namespace pepforge::app {

// Schema violation in a JSONL input; the message starts with "line N".
class RecordError: public std::runtime_error {
public:
  RecordError(std::size_t line, const std::string &path,
              const std::string &what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct SeedEntry {
  std::string id;
  std::string helm;
  std::size_t line = 0;
};

// One HELM string per line, optionally "id<TAB>helm". Blank lines and
// lines starting with '#' are skipped. Ids default to seed-001, seed-002...
std::vector<SeedEntry> read_seeds(std::istream &in);

// One line of pairs.jsonl / annotated.jsonl / split files.
struct PairRecord {
  std::string seed_id;
  int position = 0;
  std::string leaving;
  std::string incoming;
  std::string original_helm;
  std::string original_smiles;
  std::string mutated_helm;
  std::string mutated_smiles;
  std::optional<properties::PropertyTriple> original_props;
  std::optional<properties::PropertyTriple> mutated_props;
  std::optional<properties::ImprovementLabel> label;
};

nlohmann::json to_json(const PairRecord &r);
PairRecord pair_record_from_json(const nlohmann::json &j, std::size_t line);
std::vector<PairRecord> read_pair_records(std::istream &in);

struct StageSummary {
  std::string stage;
  std::size_t read = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;
  std::vector<std::string> messages;  // skip reasons and warnings

  nlohmann::json to_json() const;
};

StageSummary run_augment(const std::vector<SeedEntry> &seeds,
                         const peptide::MonomerVocabulary &vocab, int k,
                         std::uint64_t rng_seed, std::ostream &out);

StageSummary run_annotate(std::istream &pairs,
                          const properties::PropertyPredictor &predictor,
                          const properties::BucketThresholds &t,
                          std::ostream &out);

struct SplitStreams {
  std::ostream &sft;
  std::ostream &rl_pool;
  std::ostream &test;
};

StageSummary run_split(std::istream &annotated,
                       const properties::SplitConfig &config,
                       std::uint64_t rng_seed, SplitStreams out);

// One prompt record per input pair.
StageSummary run_build_prompts(std::istream &pairs,
                               const peptide::MonomerVocabulary &vocab,
                               const prompts::PromptStyle &style,
                               std::ostream &out);

// Generation dump lines: {seed_id, output_text | smiles, logd?, mrt?, sif?}.
evalkit::GenerationSet read_generation_dump(
    std::istream &dump, const properties::PropertyPredictor &predictor);

// Treats each pair's mutated peptide as a generation for its seed.
StageSummary write_baseline_dump(std::istream &pairs, std::ostream &dump);

// Canonical SMILES of both sides of every pair.
std::set<std::string> read_training_index(std::istream &pairs);
// Original-peptide properties by seed id.
std::map<std::string, properties::PropertyTriple> read_seed_props(
    std::istream &pairs);

}  // namespace pepforge::app
