//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/reward/reward.h"

#include <algorithm>
#include <cmath>

namespace pepforge::reward {

using properties::Property;

void RewardConfig::validate() const {
  for (const double k: scales)
    if (!(k > 0))
      throw RewardError("property scales must be positive");
  for (const double t: thresholds)
    if (!std::isfinite(t))
      throw RewardError("property thresholds must be finite");
  if (!(alpha > 0))
    throw RewardError("alpha must be positive");
  if (!(gamma >= 0))
    throw RewardError("gamma must be non-negative");
  if (w_prop < 0 || w_sim < 0 || std::abs(w_prop + w_sim - 1.0) > 1e-12)
    throw RewardError("w_prop and w_sim must be non-negative and sum to 1");
  if (history_capacity == 0)
    throw RewardError("history_capacity must be positive");
}

double sigmoid(double x) {
  if (x >= 0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::array<double, 3> property_terms(const properties::PropertyTriple &props,
                                     const RewardConfig &cfg) {
  std::array<double, 3> out {};
  for (const Property p: properties::kAllProperties) {
    const int i = static_cast<int>(p);
    out[i] = sigmoid((props[p] - cfg.thresholds[i]) / cfg.scales[i]);
  }
  return out;
}

double property_desirability(const properties::PropertyTriple &props,
                             const RewardConfig &cfg) {
  const std::array<double, 3> t = property_terms(props, cfg);
  return (t[0] + t[1] + t[2]) / 3.0;
}

double similarity_from_tanimoto(double s, const RewardConfig &cfg) {
  return sigmoid(cfg.alpha * (s - cfg.s0));
}

namespace {
double tanimoto_of(const chem::MolGraph &a, const chem::MolGraph &b,
                   const RewardConfig &cfg) {
  return chem::tanimoto(
      chem::morgan_fingerprint(a, cfg.fingerprint_radius,
                               cfg.fingerprint_bits),
      chem::morgan_fingerprint(b, cfg.fingerprint_radius,
                               cfg.fingerprint_bits));
}
}  // namespace

double similarity_factor(const chem::MolGraph &seed,
                         const chem::MolGraph &candidate,
                         const RewardConfig &cfg) {
  return similarity_from_tanimoto(tanimoto_of(seed, candidate, cfg), cfg);
}

double similarity_factor(const peptide::Peptide &seed,
                         const peptide::Peptide &candidate,
                         const RewardConfig &cfg) {
  return similarity_factor(seed.assembled, candidate.assembled, cfg);
}

GenerationHistory::GenerationHistory(std::size_t capacity)
    : capacity_(capacity) {
  if (capacity_ == 0)
    throw RewardError("history capacity must be positive");
}

int GenerationHistory::count(std::string_view key) const {
  const std::lock_guard lock(mutex_);
  const auto it = index_.find(std::string(key));
  return it == index_.end() ? 0 : it->second->second;
}

int GenerationHistory::record(std::string_view key) {
  const std::lock_guard lock(mutex_);
  const std::string k(key);
  const auto it = index_.find(k);
  if (it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second++;
  }
  if (lru_.size() == capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  lru_.emplace_front(k, 1);
  index_.emplace(k, lru_.begin());
  return 0;
}

std::size_t GenerationHistory::size() const {
  const std::lock_guard lock(mutex_);
  return lru_.size();
}

void GenerationHistory::clear() {
  const std::lock_guard lock(mutex_);
  lru_.clear();
  index_.clear();
}

double duplication_from_count(int n, double gamma) {
  return std::pow(1.0 / std::max(1, n + 1), gamma);
}

double duplication_factor(std::string_view canonical,
                          GenerationHistory &history,
                          const RewardConfig &cfg) {
  return duplication_from_count(history.record(canonical), cfg.gamma);
}

double compose(double prop_smooth, double sim_fac, double dup_fac,
               const RewardConfig &cfg) {
  return dup_fac * (cfg.w_prop * prop_smooth + cfg.w_sim * sim_fac);
}

RewardBreakdown score(const chem::MolGraph &seed,
                      const chem::MolGraph &candidate,
                      std::string_view candidate_canonical,
                      const properties::PropertyTriple &props,
                      GenerationHistory &history, const RewardConfig &cfg) {
  RewardBreakdown b;
  b.property_terms = property_terms(props, cfg);
  b.prop_smooth = (b.property_terms[0] + b.property_terms[1]
                   + b.property_terms[2])
                  / 3.0;
  b.tanimoto = tanimoto_of(seed, candidate, cfg);
  b.sim_fac = similarity_from_tanimoto(b.tanimoto, cfg);
  b.prior_count = history.record(candidate_canonical);
  b.dup_fac = duplication_from_count(b.prior_count, cfg.gamma);
  b.total = compose(b.prop_smooth, b.sim_fac, b.dup_fac, cfg);
  return b;
}

RewardBreakdown score(const peptide::Peptide &seed,
                      const peptide::Peptide &candidate,
                      const properties::PropertyTriple &props,
                      GenerationHistory &history, const RewardConfig &cfg) {
  return score(seed.assembled, candidate.assembled, candidate.canonical, props,
               history, cfg);
}

double sqrt_transform(double raw, double high) {
  if (raw < 0)
    throw RewardError("sqrt_transform needs a non-negative raw score");
  if (!(high > 0))
    throw RewardError("sqrt_transform needs a positive high");
  return std::min(1.0, std::sqrt(raw / high));
}

double reverse_sigmoid_shift(double raw, double low, double high,
                             double shift, double k) {
  if (!(high > low))
    throw RewardError("reverse_sigmoid_shift needs high > low");
  if (k == 0)
    throw RewardError("reverse_sigmoid_shift needs k != 0");
  const double exponent =
      -k * (10.0 * (raw - (high + low) / 2.0 - shift) / (high - low));
  return 1.0 / (1.0 + std::pow(10.0, exponent));
}

}  // namespace pepforge::reward
