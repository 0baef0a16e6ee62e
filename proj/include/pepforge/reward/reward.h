//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <list>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "pepforge/chem/fingerprint.h"
#include "pepforge/peptide/peptide.h"
#include "pepforge/properties/triple.h"

namespace pepforge::reward {

class RewardError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct RewardConfig {
  // Indexed by properties::Property.
  std::array<double, 3> thresholds { 4.2, 1.63, 10.1 };
  std::array<double, 3> scales { 0.4, 0.3, 1.5 };
  double alpha = 10.0;
  double s0 = 0.6;
  double gamma = 1.0;
  double w_prop = 0.8;
  double w_sim = 0.2;
  std::size_t history_capacity = 100000;
  int fingerprint_radius = chem::kDefaultRadius;
  int fingerprint_bits = chem::kDefaultFingerprintBits;

  // Throws RewardError when an invariant does not hold.
  void validate() const;
};

// Numerically stable logistic function.
double sigmoid(double x);

// Per-property sigmoid((x_i - t_i) / k_i).
std::array<double, 3> property_terms(const properties::PropertyTriple &props,
                                     const RewardConfig &cfg);
// Mean of the three terms.
double property_desirability(const properties::PropertyTriple &props,
                             const RewardConfig &cfg);

double similarity_from_tanimoto(double s, const RewardConfig &cfg);
double similarity_factor(const chem::MolGraph &seed,
                         const chem::MolGraph &candidate,
                         const RewardConfig &cfg);
double similarity_factor(const peptide::Peptide &seed,
                         const peptide::Peptide &candidate,
                         const RewardConfig &cfg);

// Bounded LRU map from canonical SMILES to occurrence count. All members
// lock, so one history can be shared between scoring threads.
class GenerationHistory {
public:
  explicit GenerationHistory(std::size_t capacity = 100000);

  // Occurrences recorded so far (0 when unseen or evicted).
  int count(std::string_view key) const;
  // Returns the prior count, then increments it and marks the entry most
  // recently used; evicts the least recently used entry when full.
  int record(std::string_view key);

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  void clear();

private:
  using Entry = std::pair<std::string, int>;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<Entry> lru_;  // front is most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

// (1 / max(1, n + 1))^gamma for a prior count n.
double duplication_from_count(int n, double gamma);
// Looks up and records the candidate in one step.
double duplication_factor(std::string_view canonical,
                          GenerationHistory &history, const RewardConfig &cfg);

struct RewardBreakdown {
  std::array<double, 3> property_terms {};
  double prop_smooth = 0;
  double tanimoto = 0;
  double sim_fac = 0;
  int prior_count = 0;
  double dup_fac = 1;
  double total = 0;
};

// dup * (w_prop * prop + w_sim * sim)
double compose(double prop_smooth, double sim_fac, double dup_fac,
               const RewardConfig &cfg);

// Records the candidate in `history` exactly once.
RewardBreakdown score(const peptide::Peptide &seed,
                      const peptide::Peptide &candidate,
                      const properties::PropertyTriple &props,
                      GenerationHistory &history, const RewardConfig &cfg);
RewardBreakdown score(const chem::MolGraph &seed,
                      const chem::MolGraph &candidate,
                      std::string_view candidate_canonical,
                      const properties::PropertyTriple &props,
                      GenerationHistory &history, const RewardConfig &cfg);

// min(1, sqrt(raw / high)); throws RewardError for raw < 0 or high <= 0.
double sqrt_transform(double raw, double high);

// 1 / (1 + 10^(-k * 10 * (raw - (high + low) / 2 - shift) / (high - low)))
double reverse_sigmoid_shift(double raw, double low, double high,
                             double shift, double k);

}  // namespace pepforge::reward
