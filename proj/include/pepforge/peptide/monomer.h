//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pepforge/chem/mol_graph.h"

namespace pepforge::peptide {

class PeptideError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Backbone attachment atoms of a free amino acid.
struct Attachments {
  int n_attach = -1;  // amine nitrogen that receives the acyl bond
  int c_attach = -1;  // carboxyl carbon
  int leaving = -1;   // hydroxyl oxygen removed on condensation
};

// c_attach is the carbon of the last carboxylic acid in atom order;
// n_attach is the nitrogen with at least one hydrogen closest to the alpha
// carbon (ties go to the lower index). Aromatic nitrogens never qualify.
// Throws PeptideError when either is missing.
Attachments detect_attachments(const chem::MolGraph &mol);
Attachments detect_attachments(std::string_view smiles);

// Zwitterion written as [NH3+]...C(=O)[O-] (or with the charge on a
// secondary amine) is rewritten to the neutral amino acid. Other charges are
// left alone.
chem::MolGraph neutralize_amino_acid(const chem::MolGraph &mol);

struct Monomer {
  std::string id;
  std::string smiles;     // as supplied
  chem::MolGraph mol;     // neutral form used for assembly
  std::string canonical;  // canonical SMILES of `mol`
  Attachments attach;
  bool natural = false;
};

// Parses, neutralizes and validates; throws PeptideError with the id.
Monomer make_monomer(std::string id, std::string_view smiles, bool natural);

class MonomerVocabulary {
public:
  // Throws PeptideError on a duplicate id.
  void add(Monomer m);

  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  bool contains(std::string_view id) const;

  // Throws PeptideError naming the id when absent.
  const Monomer &at(std::string_view id) const;
  // Insertion order; sampling indexes into this.
  const Monomer &at(std::size_t index) const;

  // Id of the monomer with this canonical SMILES, or empty.
  std::string find_canonical(std::string_view canonical) const;

  const std::vector<std::string> &ids() const { return order_; }

private:
  std::map<std::string, Monomer, std::less<>> entries_;
  std::vector<std::string> order_;
  std::map<std::string, std::string, std::less<>> by_canonical_;
};

// Tab-separated `id<TAB>smiles<TAB>natural_flag`; blank lines and lines
// starting with '#' are skipped. natural_flag is 1/0 or true/false.
MonomerVocabulary read_vocabulary(std::istream &in);
MonomerVocabulary load_vocabulary(const std::string &path);

}  // namespace pepforge::peptide
