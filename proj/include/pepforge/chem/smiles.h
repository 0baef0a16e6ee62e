//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pepforge/chem/mol_graph.h"

namespace pepforge::chem {

class SmilesError: public std::runtime_error {
public:
  SmilesError(const std::string &what, std::size_t offset);

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Parses the SMILES subset documented in docs/smiles_grammar.md. E/Z bond
// marks are stripped (a warning is appended) and read as single bonds.
MolGraph parse_smiles(std::string_view text);
MolGraph parse_smiles(std::string_view text,
                      std::vector<std::string> &warnings);

// Writes a SMILES string visiting atoms in increasing `ranks` order.
// `ranks` must be a permutation of [0, num_atoms). Chiral atoms flagged in
// `fixed_tag` are written as '@' whatever their stored tag; this is for
// centers whose two configurations are equivalent.
std::string write_smiles(const MolGraph &mol, std::span<const int> ranks,
                         std::span<const bool> fixed_tag = {});

}  // namespace pepforge::chem
