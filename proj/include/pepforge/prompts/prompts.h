//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pepforge/peptide/peptide.h"
#include "pepforge/properties/properties.h"

namespace pepforge::prompts {

class PromptError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class PromptKind { kCot, kNonCot, kCotOneShot };

// Which properties the think paragraph names. kImprovedSet uses the pair's
// improvement label and falls back to all three when it is empty.
enum class ObjectiveMode { kImprovedSet, kAllThree };

std::string_view kind_name(PromptKind k);
// Accepts "cot", "non_cot" and "cot_one_shot".
PromptKind parse_kind(std::string_view s);

struct PromptStyle {
  PromptKind kind = PromptKind::kCot;
  ObjectiveMode objective = ObjectiveMode::kImprovedSet;
};

// Everything a prompt needs from a peptide pair.
struct PairContext {
  int position = 0;  // 1-based
  std::string leaving_smiles;
  std::string incoming_smiles;
  std::string input_smiles;
  std::string output_smiles;
  std::optional<properties::ImprovementLabel> label;
};

// Uses the vocabulary SMILES of the two monomers and the canonical SMILES
// of both peptides.
PairContext context_from_pair(const peptide::PeptidePair &pair,
                              const peptide::MonomerVocabulary &vocab);

struct CotSample {
  std::string prompt;
  std::string target;  // what the model should answer
  std::string think;   // empty for non-CoT
  std::string answer_smiles;
  int position = 0;
  std::string leaving_smiles;
  std::string incoming_smiles;
};

// "increase lipophilicity (LogD), mean residence time (MRT_Rat), and SIF
// stability" or the subset named by `label`.
std::string objective_phrase(const properties::ImprovementLabel &label);
std::string objective_phrase_all();

std::string think_text(int position, std::string_view leaving,
                       std::string_view incoming, std::string_view objective);

// Throws PromptError when position or any SMILES is missing.
CotSample build_prompt(const PairContext &ctx, const PromptStyle &style);

struct ParsedOutput {
  std::optional<std::string> think;
  std::optional<std::string> smiles;
  bool well_formed = false;
  std::vector<std::string> diagnostics;
};

// First <think> span is optional; exactly one <SMILES> span is required.
// Tags are case sensitive; whitespace inside spans is trimmed.
ParsedOutput parse_output(std::string_view text);

// Edit claimed by a think paragraph.
struct EditClaim {
  int position = 0;
  std::string leaving;
  std::string incoming;
};

std::optional<EditClaim> parse_claim(std::string_view think);

struct AuditReport {
  bool claim_found = false;
  EditClaim claim;
  bool leaving_in_seed = false;   // leaving monomer occurs in the seed
  bool position_matches = false;  // ... at the claimed position
  bool output_valid = false;
  bool output_differs = false;
  bool incoming_reflected = false;  // fingerprint-difference heuristic
  // Set when the claimed edit could be rebuilt from the seed.
  std::optional<bool> expected_edit_match;
  bool unexplained_changes = false;
  bool faithful = false;
  std::vector<std::string> notes;
};

// Checks a think paragraph against the structural change from `seed` to
// the output SMILES. Throws PromptError when the output is not well formed
// or a SMILES in the claim does not parse.
AuditReport audit_reasoning(const ParsedOutput &parsed,
                            const peptide::Peptide &seed,
                            const peptide::MonomerVocabulary &vocab);

}  // namespace pepforge::prompts
