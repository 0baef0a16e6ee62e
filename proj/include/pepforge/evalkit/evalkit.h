//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "pepforge/properties/properties.h"

namespace pepforge::evalkit {

class EvalError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct GenerationRecord {
  std::string seed_id;
  std::string raw_output;
  std::optional<std::string> smiles;  // canonical when the SMILES parsed
  std::optional<properties::PropertyTriple> props;
  bool valid = false;
  std::string error;  // why the record is invalid
};

struct GenerationSet {
  std::vector<GenerationRecord> records;
  std::set<std::string> training_index;  // canonical SMILES
  // Optional seed properties, used for the bucket transitions.
  std::map<std::string, properties::PropertyTriple> seed_props;
};

// Builds a record from model output with <SMILES> tags. Malformed tags,
// unparseable SMILES, valence failures and predictor failures all give an
// invalid record. `props` wins over `predictor` when both are given.
GenerationRecord record_from_text(
    std::string seed_id, std::string_view output_text,
    std::optional<properties::PropertyTriple> props,
    const properties::PropertyPredictor *predictor);
GenerationRecord record_from_smiles(
    std::string seed_id, std::string_view smiles,
    std::optional<properties::PropertyTriple> props,
    const properties::PropertyPredictor *predictor);

// Strict comparison against the upper cut of every property.
bool high_quality(const properties::PropertyTriple &p,
                  const properties::BucketThresholds &t);

// Mergeable partial aggregate; every metric is a function of it.
class Tally {
public:
  explicit Tally(const properties::BucketThresholds &t = {}): t_(t) { }

  void add(const GenerationRecord &r);
  // Both tallies must use the same thresholds.
  void merge(const Tally &other);

  std::size_t total() const { return total_; }
  std::size_t valid() const { return valid_; }
  std::size_t high_quality_records() const { return hq_records_; }
  const std::set<std::string> &unique_valid() const { return unique_; }
  const std::map<std::string, std::set<std::string>> &per_seed() const {
    return per_seed_;
  }
  std::size_t max_seed_samples() const;

private:
  properties::BucketThresholds t_;
  std::size_t total_ = 0;
  std::size_t valid_ = 0;
  std::size_t hq_records_ = 0;
  std::set<std::string> unique_;
  // seed -> unique high-quality canonical SMILES (empty set still counts)
  std::map<std::string, std::set<std::string>> per_seed_;
  std::map<std::string, std::size_t> seed_samples_;
};

// Each throws EvalError on the empty cases listed next to it.
double validity(const GenerationSet &s);    // no records
double novelty(const GenerationSet &s,      // no valid records gives 0
               std::vector<std::string> *warnings = nullptr);
double uniqueness(const GenerationSet &s);  // no valid records
double hqsr(const GenerationSet &s,         // no records
            const properties::BucketThresholds &t = {});
double uhqs(const GenerationSet &s,         // no seeds
            const properties::BucketThresholds &t = {});
double hqsr_s(const GenerationSet &s,       // no seeds
              const properties::BucketThresholds &t = {});

struct TransitionMatrix {
  properties::Property property = properties::Property::kLogD;
  Eigen::Matrix3d counts = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d fractions = Eigen::Matrix3d::Zero();  // row-stochastic
  std::array<bool, 3> row_has_mass {};
};

using TriplePair =
    std::pair<properties::PropertyTriple, properties::PropertyTriple>;

// Rows are the bucket before, columns the bucket after. Throws on empty
// input.
TransitionMatrix transition_matrix(const std::vector<TriplePair> &pairs,
                                   properties::Property property,
                                   const properties::BucketThresholds &t = {});

struct EvalReport {
  double validity = 0;
  double novelty = 0;
  double uniqueness = 0;
  double hqsr = 0;
  double uhqs = 0;
  double hqsr_s = 0;
  std::size_t records = 0;
  std::size_t seeds = 0;
  std::size_t samples_per_seed = 0;  // largest per-seed sample count
  std::optional<std::array<TransitionMatrix, 3>> transitions;
  std::vector<std::string> warnings;
};

EvalReport evaluate(const GenerationSet &s,
                    const properties::BucketThresholds &t = {});

nlohmann::json report_json(const EvalReport &r);
// Aligned table: Val Nov Uni HQSR UHQS HQSR-S, UHQS shown as "4.42/10".
std::string report_table(const EvalReport &r, std::string_view label = "run");
std::string transition_csv(const TransitionMatrix &m);

}  // namespace pepforge::evalkit
