//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/prompts/prompts.h"

#include <algorithm>
#include <regex>
#include <sstream>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/fingerprint.h"
#include "pepforge/chem/smiles.h"
#include "pepforge/chem/valence.h"

namespace pepforge::prompts {

namespace {

constexpr std::string_view kBackgroundCot =
    "We are modifying peptides to meet specific ADMET property improvements "
    "by reasoning step-by-step. The required answer format is wrapped only "
    "within <SMILES> and </SMILES> HTML tags.";
constexpr std::string_view kBackgroundPlain =
    "We are modifying peptides to meet specific ADMET property improvements. "
    "The required answer format is wrapped only within <SMILES> and </SMILES> "
    "HTML tags.";
constexpr std::string_view kGuides =
    "Peptide Modify Guides: Increase lipophilicity (LogD), mean residence "
    "time (MRT_Rat), and SIF stability.";
constexpr std::string_view kGuidesLong =
    "Peptide Modify Guides: Increase lipophilicity (LogD), mean residence "
    "time in rat (MRT_Rat), and stability in simulated intestinal fluid "
    "(SIF).";
constexpr std::string_view kThinking =
    "Thinking Process Guides: Please enclose your step-by-step reasoning "
    "process within <think> and </think> HTML tags. This process should "
    "clearly explain how you modify the monomer in the original SMILES "
    "before providing the final SMILES.";
constexpr std::string_view kThinkingOneShot =
    "Thinking Process Guides: Please enclose your step-by-step reasoning "
    "process within <think> and </think> HTML tags. This process should "
    "clearly explain how you would modify the monomer in the original "
    "SMILES before providing the final SMILES.";

// Worked example shown in one-shot prompts.
constexpr std::string_view kExampleInput =
    "CC(C)C[C@@H]1NC(=O)[C@@H](CC(C)C)NC(=O)[C@@H](CC(C)C)NC(=O)"
    "[C@H](Cc2ccc(O)cc2)NC(=O)[C@@H]2CCCN2C(=O)[C@@H](CC(C)C)NC1=O";
constexpr std::string_view kExampleOutput =
    "CC(C)C[C@@H]1NC(=O)[C@@H](CC(C)C)NC(=O)[C@@H](CC(C)C)NC(=O)"
    "[C@H](Cc2ccc(O)cc2)NC(=O)[C@H](c2cc(C#N)ccc2Sc2ccc(F)cc2)NC(=O)"
    "[C@@H](CC(C)C)NC1=O";
constexpr std::string_view kExampleThink =
    "At position 5, the monomer changed from N1[C@@H](CCC1)C(=O)O to "
    "[NH2+][C@@H](c1c(Sc2ccc(cc2)F)ccc(c1)C#N)C(=O)[O-] to increase "
    "lipophilicity (LogD), mean residence time (MRT_Rat), and SIF stability.";

std::string_view property_phrase(properties::Property p) {
  switch (p) {
  case properties::Property::kLogD:
    return "lipophilicity (LogD)";
  case properties::Property::kMrt:
    return "mean residence time (MRT_Rat)";
  case properties::Property::kSif:
    return "SIF stability";
  }
  return "";
}

std::string wrap(std::string_view tag, std::string_view body) {
  std::string out;
  out.append("<").append(tag).append(">");
  out.append(body);
  out.append("</").append(tag).append(">");
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t count_of(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

std::string_view kind_name(PromptKind k) {
  switch (k) {
  case PromptKind::kCot:
    return "cot";
  case PromptKind::kNonCot:
    return "non_cot";
  case PromptKind::kCotOneShot:
    return "cot_one_shot";
  }
  return "";
}

PromptKind parse_kind(std::string_view s) {
  for (const PromptKind k:
       { PromptKind::kCot, PromptKind::kNonCot, PromptKind::kCotOneShot })
    if (kind_name(k) == s)
      return k;
  throw PromptError("unknown prompt kind '" + std::string(s) + "'");
}

PairContext context_from_pair(const peptide::PeptidePair &pair,
                              const peptide::MonomerVocabulary &vocab) {
  PairContext ctx;
  ctx.position = pair.position;
  ctx.leaving_smiles = vocab.at(pair.leaving).smiles;
  ctx.incoming_smiles = vocab.at(pair.incoming).smiles;
  ctx.input_smiles = pair.original.canonical;
  ctx.output_smiles = pair.mutated.canonical;
  if (pair.original_props && pair.mutated_props)
    ctx.label = properties::categorize_pair(pair);
  return ctx;
}

std::string objective_phrase(const properties::ImprovementLabel &label) {
  std::vector<std::string_view> parts;
  for (const properties::Property p: properties::kAllProperties)
    if (label.contains(p))
      parts.push_back(property_phrase(p));
  if (parts.empty())
    return objective_phrase_all();
  std::string out = "increase ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out += parts.size() == 2 ? " and " : (i + 1 == parts.size() ? ", and "
                                                                   : ", ");
    out += parts[i];
  }
  return out;
}

std::string objective_phrase_all() {
  properties::ImprovementLabel all;
  all.improved = { true, true, true };
  return objective_phrase(all);
}

std::string think_text(int position, std::string_view leaving,
                       std::string_view incoming, std::string_view objective) {
  std::ostringstream os;
  os << "At position " << position << ", the monomer changed from " << leaving
     << " to " << incoming << " to " << objective << ".";
  return os.str();
}

CotSample build_prompt(const PairContext &ctx, const PromptStyle &style) {
  if (ctx.position < 1)
    throw PromptError("pair has no mutation position");
  if (ctx.leaving_smiles.empty() || ctx.incoming_smiles.empty())
    throw PromptError("pair is missing monomer SMILES");
  if (ctx.input_smiles.empty() || ctx.output_smiles.empty())
    throw PromptError("pair is missing peptide SMILES");

  CotSample s;
  s.position = ctx.position;
  s.leaving_smiles = ctx.leaving_smiles;
  s.incoming_smiles = ctx.incoming_smiles;
  s.answer_smiles = ctx.output_smiles;

  const std::string answer = wrap("SMILES", ctx.output_smiles);
  const std::string input = wrap("SMILES", ctx.input_smiles);
  if (style.kind != PromptKind::kNonCot) {
    const std::string objective =
        style.objective == ObjectiveMode::kImprovedSet && ctx.label
            ? objective_phrase(*ctx.label)
            : objective_phrase_all();
    s.think = think_text(ctx.position, ctx.leaving_smiles,
                         ctx.incoming_smiles, objective);
  }

  std::ostringstream p;
  switch (style.kind) {
  case PromptKind::kCot:
    p << kBackgroundCot << "\n\n" << kGuides << "\n\n" << kThinking
      << "\n\nInput SMILES:\n" << input << "\n\nOutput example:\n";
    s.target = wrap("think", s.think) + "\n" + answer;
    break;
  case PromptKind::kNonCot:
    p << kBackgroundPlain << "\n\n" << kGuides << "\n\nInput SMILES:\n"
      << input << "\n\nOutput example:\n";
    s.target = answer;
    break;
  case PromptKind::kCotOneShot:
    p << kBackgroundCot << "\n\n" << kGuidesLong << "\n\n" << kThinkingOneShot
      << "\n\nInput SMILES (example):\n" << wrap("SMILES", kExampleInput)
      << "\n\nOutput (example):\n" << wrap("think", kExampleThink) << "\n"
      << wrap("SMILES", kExampleOutput) << "\n\nInput SMILES (template):\n"
      << input << "\n\nOutput (template):\n";
    s.target = wrap("think", s.think) + "\n" + answer;
    break;
  }
  s.prompt = p.str();
  return s;
}

ParsedOutput parse_output(std::string_view text) {
  ParsedOutput out;
  const auto think_open = text.find("<think>");
  if (think_open != std::string_view::npos) {
    const auto body = think_open + 7;
    const auto close = text.find("</think>", body);
    if (close == std::string_view::npos)
      out.diagnostics.push_back("unterminated <think> span");
    else
      out.think = trim(text.substr(body, close - body));
  }

  const std::size_t opens = count_of(text, "<SMILES>");
  const std::size_t closes = count_of(text, "</SMILES>");
  if (opens == 0) {
    out.diagnostics.push_back("no <SMILES> span");
  } else if (opens > 1 || closes > 1) {
    out.diagnostics.push_back("more than one <SMILES> span");
  } else {
    const auto body = text.find("<SMILES>") + 8;
    const auto close = text.find("</SMILES>", body);
    if (close == std::string_view::npos) {
      out.diagnostics.push_back("unterminated <SMILES> span");
    } else {
      out.smiles = trim(text.substr(body, close - body));
      if (out.smiles->empty())
        out.diagnostics.push_back("empty <SMILES> span");
    }
  }
  out.well_formed = out.smiles && !out.smiles->empty() && opens == 1
                    && closes == 1;
  return out;
}

std::optional<EditClaim> parse_claim(std::string_view think) {
  static const std::regex re(
      R"(At position\s+(\d+),\s*the monomer (?:changed|was replaced) from\s+(\S+)\s+to\s+(\S+)\s+to\b)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(think.begin(), think.end(), m, re))
    return std::nullopt;
  EditClaim c;
  c.position = std::stoi(m[1].str());
  c.leaving = m[2].str();
  c.incoming = m[3].str();
  return c;
}

namespace {

std::string monomer_key(std::string_view smiles, std::string_view role) {
  try {
    return chem::canonical_smiles(
        peptide::neutralize_amino_acid(chem::parse_smiles(smiles)));
  } catch (const chem::SmilesError &e) {
    throw PromptError(std::string(role) + " monomer in claim is not valid "
                      "SMILES: " + e.what());
  }
}

constexpr int kAuditRadius = 1;
constexpr int kAuditBits = 2048;

// Incoming residue as it looks inside a ring: its cyclic homodimer.
chem::MolGraph residue_context(const peptide::Monomer &m) {
  try {
    return peptide::assemble_cyclic({ &m, &m });
  } catch (const std::exception &) {
    return m.mol;
  }
}

}  // namespace

AuditReport audit_reasoning(const ParsedOutput &parsed,
                            const peptide::Peptide &seed,
                            const peptide::MonomerVocabulary &vocab) {
  if (!parsed.well_formed)
    throw PromptError("output is not well formed");
  AuditReport r;

  std::optional<chem::MolGraph> output;
  try {
    output = chem::parse_smiles(*parsed.smiles);
    r.output_valid = validate_valence(*output).valid;
  } catch (const chem::SmilesError &e) {
    r.notes.push_back(std::string("output SMILES does not parse: ")
                      + e.what());
  }
  if (r.output_valid)
    r.output_differs = chem::canonical_smiles(*output) != seed.canonical;
  else if (output)
    r.notes.push_back("output SMILES fails valence checks");

  const std::optional<EditClaim> claim =
      parsed.think ? parse_claim(*parsed.think) : std::nullopt;
  if (!claim) {
    r.notes.push_back("no edit claim in reasoning");
    return r;
  }
  r.claim_found = true;
  r.claim = *claim;

  const std::string leaving = monomer_key(claim->leaving, "leaving");
  monomer_key(claim->incoming, "incoming");
  const int n = static_cast<int>(seed.monomer_ids.size());
  for (int i = 0; i < n; ++i) {
    if (vocab.at(seed.monomer_ids[i]).canonical != leaving)
      continue;
    r.leaving_in_seed = true;
    if (i + 1 == claim->position)
      r.position_matches = true;
  }
  if (!r.leaving_in_seed)
    r.notes.push_back("leaving monomer does not occur in the seed");
  else if (!r.position_matches)
    r.notes.push_back("leaving monomer is not at the claimed position");
  if (!r.output_differs && r.output_valid)
    r.notes.push_back("output is identical to the seed");
  if (!r.output_valid)
    return r;

  std::optional<peptide::Monomer> incoming;
  try {
    incoming = peptide::make_monomer("claimed", claim->incoming, false);
  } catch (const peptide::PeptideError &e) {
    r.notes.push_back(std::string("incoming monomer unusable: ") + e.what());
  }

  if (incoming) {
    const chem::Fingerprint fs =
        chem::morgan_fingerprint(seed.assembled, kAuditRadius, kAuditBits);
    const chem::Fingerprint fo =
        chem::morgan_fingerprint(*output, kAuditRadius, kAuditBits);
    const chem::Fingerprint fi = chem::morgan_fingerprint(
        residue_context(*incoming), kAuditRadius, kAuditBits);
    std::vector<std::uint32_t> novel;
    std::set_difference(fi.bits.begin(), fi.bits.end(), fs.bits.begin(),
                        fs.bits.end(), std::back_inserter(novel));
    if (novel.empty()) {
      r.incoming_reflected = r.output_differs;
    } else {
      std::vector<std::uint32_t> hit;
      std::set_intersection(novel.begin(), novel.end(), fo.bits.begin(),
                            fo.bits.end(), std::back_inserter(hit));
      r.incoming_reflected = 2 * hit.size() >= novel.size();
    }
    if (!r.incoming_reflected)
      r.notes.push_back("incoming monomer is not visible in the output");

    if (r.position_matches) {
      try {
        const peptide::PeptidePair expected =
            peptide::mutate(seed, claim->position, *incoming, vocab);
        r.expected_edit_match =
            expected.mutated.canonical == chem::canonical_smiles(*output);
      } catch (const peptide::PeptideError &e) {
        r.notes.push_back(std::string("claimed edit cannot be rebuilt: ")
                          + e.what());
      }
    }
  }

  r.unexplained_changes = r.expected_edit_match == false;
  if (r.unexplained_changes)
    r.notes.push_back("output differs from the claimed edit");
  r.faithful = r.leaving_in_seed && r.position_matches && r.output_differs
               && r.incoming_reflected && !r.unexplained_changes;
  return r;
}

}  // namespace pepforge::prompts
