//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/smiles.h"
#include "support/metric_oracle.h"

namespace pepforge::evalkit {
namespace {

using properties::BucketThresholds;
using properties::Property;
using properties::PropertyTriple;
using testing::synthetic_record;

const BucketThresholds kT;

TEST(Validity, Ratios) {
  EXPECT_EQ(validity(testing::validity_set(10, 10)), 1.0);
  EXPECT_EQ(validity(testing::validity_set(876, 1000)), 0.876);
  EXPECT_EQ(validity(testing::validity_set(0, 10)), 0.0);
  EXPECT_THROW(validity(GenerationSet {}), EvalError);
}

TEST(Novelty, UniqueSetSemantics) {
  GenerationSet s = testing::uniqueness_set(4, 12);
  EXPECT_EQ(novelty(s), 1.0);
  s.training_index = { "m0", "m1" };
  EXPECT_EQ(novelty(s), 0.5);
  s.training_index = { "m0", "m1", "m2", "m3" };
  EXPECT_EQ(novelty(s), 0.0);

  std::vector<std::string> warnings;
  EXPECT_EQ(novelty(testing::validity_set(0, 3), &warnings), 0.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Uniqueness, Ratios) {
  EXPECT_EQ(uniqueness(testing::uniqueness_set(5, 5)), 1.0);
  EXPECT_DOUBLE_EQ(uniqueness(testing::uniqueness_set(1, 7)), 1.0 / 7);
  EXPECT_EQ(uniqueness(testing::uniqueness_set(300, 1000)), 0.3);
  EXPECT_THROW(uniqueness(testing::validity_set(0, 4)), EvalError);
}

TEST(Hqsr, StrictThresholds) {
  EXPECT_EQ(hqsr(testing::hqsr_set(5, 5, kT)), 1.0);
  EXPECT_EQ(hqsr(testing::hqsr_set(89, 100, kT)), 0.89);
  const PropertyTriple at { kT.logd.hi, kT.mrt.hi + 1, kT.sif.hi + 1 };
  EXPECT_FALSE(high_quality(at, kT));
  GenerationSet s;
  s.records.push_back(synthetic_record("a", "C", true, at));
  EXPECT_EQ(hqsr(s), 0.0);
  // Invalid attempts count in the denominator.
  s.records.push_back(synthetic_record("a", "CC", true, { 9, 9, 99 }));
  s.records.push_back(synthetic_record("a", "CCC", false, {}));
  EXPECT_DOUBLE_EQ(hqsr(s), 1.0 / 3);
}

TEST(Uhqs, DedupWithinSeed) {
  GenerationSet s;
  const PropertyTriple hq { 9, 9, 99 };
  for (int seed = 0; seed < 4; ++seed)
    for (int i = 0; i < 10; ++i)
      s.records.push_back(
          synthetic_record("s" + std::to_string(seed), "CC", true, hq));
  EXPECT_EQ(uhqs(s), 1.0);
  EXPECT_EQ(hqsr_s(s), 1.0);

  GenerationSet none = testing::validity_set(5, 5);
  EXPECT_EQ(uhqs(none), 0.0);
  EXPECT_EQ(hqsr_s(none), 0.0);
  EXPECT_THROW(uhqs(GenerationSet {}), EvalError);
  EXPECT_THROW(hqsr_s(GenerationSet {}), EvalError);
}

TEST(HqsrS, HalfOfSeeds) {
  GenerationSet s;
  s.records.push_back(synthetic_record("a", "C", true, { 9, 9, 99 }));
  s.records.push_back(synthetic_record("b", "C", true, { 0, 9, 99 }));
  EXPECT_EQ(hqsr_s(s), 0.5);
}

TEST(Report, TableShowsSamplesPerSeed) {
  GenerationSet s;
  const PropertyTriple hq { 9, 9, 99 };
  for (int i = 0; i < 10; ++i)
    s.records.push_back(synthetic_record("a", "m" + std::to_string(i % 4),
                                         true, hq));
  const EvalReport r = evaluate(s);
  EXPECT_EQ(r.samples_per_seed, 10u);
  const std::string table = report_table(r, "demo");
  EXPECT_NE(table.find("4.00/10"), std::string::npos) << table;
  EXPECT_NE(table.find("HQSR-S"), std::string::npos);
  const nlohmann::json j = report_json(r);
  EXPECT_EQ(j["uhqs"].get<double>(), 4.0);
  EXPECT_FALSE(j.contains("transitions"));
}

TEST(Report, TransitionsFromSeedProps) {
  GenerationSet s;
  s.seed_props["a"] = { 1, 0.1, 1 };
  s.records.push_back(synthetic_record("a", "C", true, { 9, 0.1, 5 }));
  s.records.push_back(synthetic_record("a", "CC", true, { 1, 0.1, 1 }));
  s.records.push_back(synthetic_record("b", "CCC", true, { 9, 9, 99 }));
  const EvalReport r = evaluate(s);
  ASSERT_TRUE(r.transitions);
  const TransitionMatrix &logd = (*r.transitions)[0];
  EXPECT_EQ(logd.counts.sum(), 2.0);
  EXPECT_DOUBLE_EQ(logd.fractions(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(logd.fractions(0, 2), 0.5);
  const std::string csv = transition_csv(logd);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "before\\after,low,medium,high,count");
  EXPECT_NE(csv.find("low,0.5,0,0.5,2"), std::string::npos) << csv;
}

TEST(Transition, IdentityAndExtremes) {
  Rng rng(3);
  std::vector<TriplePair> same;
  for (int i = 0; i < 60; ++i) {
    const PropertyTriple p = testing::random_triple(rng, kT);
    same.emplace_back(p, p);
  }
  for (const Property p: properties::kAllProperties) {
    const TransitionMatrix m = transition_matrix(same, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        EXPECT_EQ(m.fractions(i, j), m.row_has_mass[i] && i == j ? 1.0 : 0.0);
  }
  const std::vector<TriplePair> up = { { { 0, 0, 0 }, { 9, 9, 99 } },
                                       { { 1, 0, 0 }, { 8, 9, 99 } } };
  const TransitionMatrix m = transition_matrix(up, Property::kLogD);
  EXPECT_EQ(m.fractions.row(0), Eigen::RowVector3d(0, 0, 1));
  EXPECT_FALSE(m.row_has_mass[1]);
  EXPECT_EQ(m.fractions.row(1).sum(), 0.0);
  EXPECT_THROW(transition_matrix({}, Property::kMrt), EvalError);
}

TEST(Records, FromTextAndSmiles) {
  const properties::SurrogatePredictor predictor;
  GenerationRecord r =
      record_from_text("a", "<think>x</think><SMILES>OCC</SMILES>", std::nullopt,
                       &predictor);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(*r.smiles, chem::canonical_smiles(chem::parse_smiles("CCO")));
  EXPECT_TRUE(r.props);

  r = record_from_text("a", "CCO", std::nullopt, &predictor);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.error.empty());
  r = record_from_smiles("a", "C(C)(C)(C)(C)C", std::nullopt, &predictor);
  EXPECT_FALSE(r.valid);
  r = record_from_smiles("a", "C1CC", std::nullopt, &predictor);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.smiles);
  r = record_from_smiles("a", "CC", std::nullopt, nullptr);
  EXPECT_FALSE(r.valid);
  r = record_from_smiles("a", "CC", PropertyTriple { 1, 2, 3 }, nullptr);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.props->sif, 3);
}

// Property suite: ranges, oracle agreement, permutation and merge
// invariance, seed monotonicity.
TEST(EvalProperty, MatchesNaiveOracle) {
  Rng rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    GenerationSet s = testing::random_set(rng, 50, kT);
    const testing::NaiveMetrics o = testing::naive_metrics(s, kT);
    const EvalReport r = evaluate(s, kT);
    EXPECT_DOUBLE_EQ(r.validity, o.validity);
    EXPECT_DOUBLE_EQ(r.novelty, o.novelty);
    EXPECT_DOUBLE_EQ(r.uniqueness, o.uniqueness);
    EXPECT_DOUBLE_EQ(r.hqsr, o.hqsr);
    EXPECT_DOUBLE_EQ(r.uhqs, o.uhqs);
    EXPECT_DOUBLE_EQ(r.hqsr_s, o.hqsr_s);
    for (const double x: { r.validity, r.novelty, r.uniqueness, r.hqsr,
                           r.hqsr_s }) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_GE(r.uhqs, r.hqsr_s);

    std::vector<GenerationRecord> shuffled = s.records;
    rng.shuffle(std::span(shuffled));
    GenerationSet p = s;
    p.records = shuffled;
    const EvalReport rp = evaluate(p, kT);
    EXPECT_EQ(report_json(rp), report_json(r));

    const std::size_t cut = rng.below(s.records.size() + 1);
    Tally a(kT), b(kT), whole(kT);
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      (i < cut ? a : b).add(s.records[i]);
      whole.add(s.records[i]);
    }
    a.merge(b);
    EXPECT_EQ(a.valid(), whole.valid());
    EXPECT_EQ(a.unique_valid(), whole.unique_valid());
    EXPECT_EQ(a.per_seed(), whole.per_seed());
    EXPECT_EQ(a.high_quality_records(), whole.high_quality_records());

    // A record for an existing seed never lowers hqsr_s.
    GenerationSet grown = s;
    grown.records.push_back(synthetic_record(
        s.records[rng.below(s.records.size())].seed_id, "CCCC",
        rng.uniform() < 0.5, testing::random_triple(rng, kT)));
    EXPECT_GE(hqsr_s(grown, kT), r.hqsr_s);
  }
}

TEST(EvalProperty, HqsrCountInvariantUnderDedup) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    GenerationSet s;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i)
      s.records.push_back(synthetic_record("s", "m" + std::to_string(i), true,
                                           testing::random_triple(rng, kT)));
    ASSERT_EQ(uniqueness(s), 1.0);
    GenerationSet dedup = s;
    std::sort(dedup.records.begin(), dedup.records.end(),
              [](const auto &x, const auto &y) { return *x.smiles < *y.smiles; });
    EXPECT_DOUBLE_EQ(hqsr(s), hqsr(dedup));
  }
}

}  // namespace
}  // namespace pepforge::evalkit
