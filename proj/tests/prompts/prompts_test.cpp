//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/smiles.h"
#include "pepforge/peptide/peptide.h"
#include "pepforge/prompts/prompts.h"

namespace pepforge::prompts {
namespace {

using peptide::MonomerVocabulary;
using properties::ImprovementLabel;
using properties::Property;

const MonomerVocabulary &bundled() {
  static const MonomerVocabulary v =
      peptide::load_vocabulary(PEPFORGE_DATA_DIR "/monomers.tsv");
  return v;
}

const peptide::Peptide &example_seed() {
  static const peptide::Peptide p =
      peptide::make_peptide({ "dL", "dL", "L", "dL", "P", "Y" }, bundled());
  return p;
}

const peptide::PeptidePair &example_pair() {
  static const peptide::PeptidePair pair =
      peptide::mutate(example_seed(), 5, bundled().at("X2"), bundled());
  return pair;
}

std::size_t count_of(const std::string &text, const std::string &needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

const char *const kExampleThink =
    "At position 5, the monomer changed from N1[C@@H](CCC1)C(=O)O to "
    "[NH2+][C@@H](c1c(Sc2ccc(cc2)F)ccc(c1)C#N)C(=O)[O-] to increase "
    "lipophilicity (LogD), mean residence time (MRT_Rat), and SIF stability.";

TEST(Objective, PhrasesForEveryLabel) {
  ImprovementLabel l;
  l.improved = { true, false, false };
  EXPECT_EQ(objective_phrase(l), "increase lipophilicity (LogD)");
  l.improved = { false, true, true };
  EXPECT_EQ(objective_phrase(l),
            "increase mean residence time (MRT_Rat) and SIF stability");
  l.improved = { false, false, false };
  EXPECT_EQ(objective_phrase(l), objective_phrase_all());
  EXPECT_EQ(objective_phrase_all(),
            "increase lipophilicity (LogD), mean residence time (MRT_Rat), "
            "and SIF stability");
}

TEST(Objective, ThinkNamesEveryImprovedProperty) {
  const char *const names[] = { "LogD", "MRT_Rat", "SIF" };
  PairContext ctx = context_from_pair(example_pair(), bundled());
  for (int mask = 0; mask < 8; ++mask) {
    ImprovementLabel l;
    for (int p = 0; p < 3; ++p)
      l.improved[p] = (mask >> p) & 1;
    ctx.label = l;
    const CotSample s = build_prompt(ctx, {});
    for (int p = 0; p < 3; ++p) {
      const bool expected = mask == 0 || ((mask >> p) & 1);
      EXPECT_EQ(s.think.find(names[p]) != std::string::npos, expected)
          << mask << ": " << s.think;
    }
  }
}

TEST(Prompt, ExampleThinkMatchesWorkedExample) {
  PairContext ctx = context_from_pair(example_pair(), bundled());
  EXPECT_EQ(ctx.position, 5);
  const CotSample s =
      build_prompt(ctx, { PromptKind::kCot, ObjectiveMode::kAllThree });
  EXPECT_EQ(s.think, kExampleThink);
  EXPECT_EQ(s.answer_smiles, example_pair().mutated.canonical);
}

TEST(Prompt, KindsHaveExpectedTags) {
  const PairContext ctx = context_from_pair(example_pair(), bundled());
  const CotSample cot = build_prompt(ctx, { PromptKind::kCot });
  EXPECT_NE(cot.prompt.find("<think> and </think>"), std::string::npos);
  EXPECT_NE(cot.prompt.find("<SMILES> and </SMILES>"), std::string::npos);
  EXPECT_EQ(cot.target.rfind("<think>", 0), 0u);

  const CotSample plain = build_prompt(ctx, { PromptKind::kNonCot });
  EXPECT_EQ(plain.prompt.find("think"), std::string::npos);
  EXPECT_EQ(plain.target.find("think"), std::string::npos);
  EXPECT_TRUE(plain.think.empty());
  EXPECT_EQ(plain.target, "<SMILES>" + ctx.output_smiles + "</SMILES>");

  const CotSample shot = build_prompt(ctx, { PromptKind::kCotOneShot });
  EXPECT_EQ(count_of(shot.prompt, "Input SMILES"), 2u);
  EXPECT_NE(shot.prompt.find(kExampleThink), std::string::npos);
  // Example then query.
  EXPECT_LT(shot.prompt.find("(example)"), shot.prompt.find("(template)"));
}

TEST(Prompt, OneShotExampleIsTheWorkedPair) {
  const CotSample shot = build_prompt(
      context_from_pair(example_pair(), bundled()),
      { PromptKind::kCotOneShot });
  const std::size_t at = shot.prompt.find("Input SMILES (example):\n");
  ASSERT_NE(at, std::string::npos);
  const ParsedOutput in = parse_output(shot.prompt.substr(at, 400));
  ASSERT_TRUE(in.smiles);
  EXPECT_EQ(chem::canonical_smiles(chem::parse_smiles(*in.smiles)),
            example_seed().canonical);
}

TEST(Prompt, MissingMetadataThrows) {
  PairContext ctx = context_from_pair(example_pair(), bundled());
  ctx.position = 0;
  EXPECT_THROW(build_prompt(ctx, {}), PromptError);
  ctx = context_from_pair(example_pair(), bundled());
  ctx.incoming_smiles.clear();
  EXPECT_THROW(build_prompt(ctx, {}), PromptError);
  ctx = context_from_pair(example_pair(), bundled());
  ctx.output_smiles.clear();
  EXPECT_THROW(build_prompt(ctx, {}), PromptError);
  EXPECT_THROW(parse_kind("chain"), PromptError);
  EXPECT_EQ(parse_kind("cot_one_shot"), PromptKind::kCotOneShot);
}

TEST(Parse, WellFormedVariants) {
  ParsedOutput p = parse_output("<think> a b </think>\n<SMILES> CCO </SMILES>");
  EXPECT_TRUE(p.well_formed);
  EXPECT_EQ(p.think.value_or(""), "a b");
  EXPECT_EQ(p.smiles.value_or(""), "CCO");

  p = parse_output("<SMILES>CCO</SMILES>");
  EXPECT_TRUE(p.well_formed);
  EXPECT_FALSE(p.think);

  p = parse_output("CCO");
  EXPECT_FALSE(p.well_formed);
  EXPECT_FALSE(p.diagnostics.empty());

  p = parse_output("<SMILES>CCO</SMILES><SMILES>CC</SMILES>");
  EXPECT_FALSE(p.well_formed);

  p = parse_output("<SMILES>CCO");
  EXPECT_FALSE(p.well_formed);

  p = parse_output("<SMILES>  </SMILES>");
  EXPECT_FALSE(p.well_formed);

  p = parse_output("<smiles>CCO</smiles>");
  EXPECT_FALSE(p.well_formed);
}

TEST(Parse, TargetsRoundTrip) {
  const auto pairs = peptide::augment(example_seed(), bundled(), 30, 11);
  ASSERT_FALSE(pairs.empty());
  for (const auto &pair: pairs)
    for (const PromptKind k: { PromptKind::kCot, PromptKind::kNonCot,
                               PromptKind::kCotOneShot }) {
      const CotSample s = build_prompt(context_from_pair(pair, bundled()),
                                       { k });
      const ParsedOutput p = parse_output(s.target);
      ASSERT_TRUE(p.well_formed) << s.target;
      EXPECT_EQ(*p.smiles, pair.mutated.canonical);
      EXPECT_EQ(p.think.value_or(""), s.think);
      if (!s.think.empty()) {
        const auto claim = parse_claim(s.think);
        ASSERT_TRUE(claim);
        EXPECT_EQ(claim->position, pair.position);
      }
    }
}

TEST(Claim, BothVerbsAccepted) {
  auto c = parse_claim("At position 3, the monomer was replaced from NCC(=O)O "
                       "to N[C@@H](C)C(=O)O to increase SIF stability.");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->position, 3);
  EXPECT_EQ(c->leaving, "NCC(=O)O");
  EXPECT_EQ(c->incoming, "N[C@@H](C)C(=O)O");
  EXPECT_FALSE(parse_claim("I swapped something."));
}

std::string answer(const std::string &think, const std::string &smiles) {
  return "<think>" + think + "</think>\n<SMILES>" + smiles + "</SMILES>";
}

TEST(Audit, WorkedExampleIsFaithful) {
  const ParsedOutput p =
      parse_output(answer(kExampleThink, example_pair().mutated.canonical));
  const AuditReport r = audit_reasoning(p, example_seed(), bundled());
  EXPECT_TRUE(r.claim_found);
  EXPECT_TRUE(r.leaving_in_seed);
  EXPECT_TRUE(r.position_matches);
  EXPECT_TRUE(r.output_differs);
  EXPECT_TRUE(r.incoming_reflected);
  ASSERT_TRUE(r.expected_edit_match);
  EXPECT_TRUE(*r.expected_edit_match);
  EXPECT_FALSE(r.unexplained_changes);
  EXPECT_TRUE(r.faithful);
}

TEST(Audit, GlycineClaimVerified) {
  const peptide::Peptide seed =
      peptide::make_peptide({ "G", "L", "G", "F", "P" }, bundled());
  const auto pair = peptide::mutate(seed, 3, bundled().at("A"), bundled());
  const std::string think =
      think_text(3, "NCC(=O)O", "N[C@@H](C)C(=O)O", objective_phrase_all());
  const AuditReport r = audit_reasoning(
      parse_output(answer(think, pair.mutated.canonical)), seed, bundled());
  EXPECT_TRUE(r.leaving_in_seed);
  EXPECT_TRUE(r.position_matches);
  EXPECT_TRUE(r.output_differs);
  EXPECT_TRUE(r.faithful);
}

TEST(Audit, UnchangedOutputIsUnfaithful) {
  const AuditReport r = audit_reasoning(
      parse_output(answer(kExampleThink, example_seed().canonical)),
      example_seed(), bundled());
  EXPECT_TRUE(r.claim_found);
  EXPECT_FALSE(r.output_differs);
  EXPECT_FALSE(r.faithful);
}

TEST(Audit, ExtraChangesAreFlagged) {
  // Claims position 5 but the output also changes position 6.
  auto step = peptide::mutate(example_seed(), 5, bundled().at("X2"),
                              bundled());
  auto twice = peptide::mutate(step.mutated, 6, bundled().at("F"), bundled());
  const AuditReport r = audit_reasoning(
      parse_output(answer(kExampleThink, twice.mutated.canonical)),
      example_seed(), bundled());
  EXPECT_TRUE(r.position_matches);
  EXPECT_TRUE(r.unexplained_changes);
  EXPECT_FALSE(r.faithful);
}

TEST(Audit, WrongLeavingAndBadInput) {
  const std::string think = think_text(
      2, "NCC(=O)O", "N[C@@H](C)C(=O)O", objective_phrase_all());
  const AuditReport r = audit_reasoning(
      parse_output(answer(think, example_pair().mutated.canonical)),
      example_seed(), bundled());
  EXPECT_FALSE(r.leaving_in_seed);
  EXPECT_FALSE(r.faithful);

  const std::string bad = think_text(2, "C1CC", "NCC(=O)O", "x");
  EXPECT_THROW(audit_reasoning(parse_output(answer(bad, "CCO")),
                               example_seed(), bundled()),
               PromptError);
  EXPECT_THROW(audit_reasoning(parse_output("no tags"), example_seed(),
                               bundled()),
               PromptError);
}

}  // namespace
}  // namespace pepforge::prompts
