//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pepforge/chem/mol_graph.h"
#include "pepforge/peptide/monomer.h"
#include "pepforge/properties/triple.h"

namespace pepforge::peptide {

class HelmError: public PeptideError {
public:
  using PeptideError::PeptideError;
};

enum class Topology { kHeadToTailCyclic };

struct Peptide {
  std::vector<std::string> monomer_ids;
  Topology topology = Topology::kHeadToTailCyclic;
  chem::MolGraph assembled;
  std::string canonical;
};

struct PeptidePair {
  Peptide original;
  Peptide mutated;
  int position = 0;  // 1-based
  std::string leaving;
  std::string incoming;
  std::optional<properties::PropertyTriple> original_props;
  std::optional<properties::PropertyTriple> mutated_props;
};

// Head-to-tail condensation: the carboxyl carbon of monomer i bonds to the
// amine nitrogen of monomer i+1 (mod n) and loses its hydroxyl oxygen.
// Throws PeptideError for fewer than two monomers, an amine without a free
// hydrogen, or a product failing valence.
chem::MolGraph assemble_cyclic(const std::vector<const Monomer *> &monomers);

Peptide make_peptide(std::vector<std::string> ids,
                     const MonomerVocabulary &vocab);

// HELM subset: one PEPTIDE polymer plus the single n:R2-1:R1 connection.
Peptide parse_helm(std::string_view text, const MonomerVocabulary &vocab);
std::string to_helm(const std::vector<std::string> &ids);

PeptidePair mutate(const Peptide &peptide, int position,
                   const Monomer &incoming, const MonomerVocabulary &vocab);

// Draws k mutations at positions 2..n with uniformly sampled incoming
// monomers. Failed assemblies are redrawn (bounded), identity mutations are
// dropped and mutated peptides are unique by canonical SMILES.
std::vector<PeptidePair> augment(const Peptide &seed,
                                 const MonomerVocabulary &vocab, int k,
                                 std::uint64_t rng_seed);

inline constexpr int kAugmentRetries = 16;

}  // namespace pepforge::peptide
