//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/peptide/monomer.h"

#include <deque>
#include <fstream>
#include <sstream>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/smiles.h"
#include "pepforge/chem/valence.h"

namespace pepforge::peptide {

using chem::Atom;
using chem::BondOrder;
using chem::Element;
using chem::MolGraph;

namespace {

bool is_hydroxyl_o(const MolGraph &mol, int o) {
  const Atom &a = mol.atom(o);
  return a.element == Element::kO && a.charge == 0 && !a.aromatic
         && mol.degree(o) == 1 && mol.total_hydrogens(o) >= 1;
}

// Returns the hydroxyl oxygen when `c` is a carboxylic acid carbon.
int carboxyl_hydroxyl(const MolGraph &mol, int c) {
  const Atom &a = mol.atom(c);
  if (a.element != Element::kC || a.aromatic)
    return -1;
  bool carbonyl = false;
  int hydroxyl = -1;
  for (const int bi: mol.incident_bonds(c)) {
    const chem::Bond &b = mol.bond(bi);
    const int o = b.other(c);
    if (mol.atom(o).element != Element::kO || mol.degree(o) != 1)
      continue;
    if (b.order == BondOrder::kDouble)
      carbonyl = true;
    else if (b.order == BondOrder::kSingle && is_hydroxyl_o(mol, o))
      hydroxyl = o;
  }
  return carbonyl ? hydroxyl : -1;
}

bool eligible_amine(const MolGraph &mol, int n) {
  const Atom &a = mol.atom(n);
  return a.element == Element::kN && !a.aromatic
         && mol.total_hydrogens(n) >= 1;
}

bool is_carboxylate_o(const MolGraph &mol, int o) {
  const Atom &a = mol.atom(o);
  if (a.element != Element::kO || a.charge != -1 || mol.degree(o) != 1)
    return false;
  const int c = mol.neighbors(o)[0];
  if (mol.atom(c).element != Element::kC)
    return false;
  for (const int bi: mol.incident_bonds(c)) {
    const chem::Bond &b = mol.bond(bi);
    if (b.order == BondOrder::kDouble
        && mol.atom(b.other(c)).element == Element::kO)
      return true;
  }
  return false;
}

}  // namespace

Attachments detect_attachments(const MolGraph &mol) {
  Attachments out;
  for (int i = mol.num_atoms() - 1; i >= 0 && out.c_attach < 0; --i) {
    const int o = carboxyl_hydroxyl(mol, i);
    if (o >= 0) {
      out.c_attach = i;
      out.leaving = o;
    }
  }
  if (out.c_attach < 0)
    throw PeptideError("no carboxylic acid group");

  int alpha = out.c_attach;
  for (const int v: mol.neighbors(out.c_attach)) {
    if (mol.atom(v).element != Element::kO) {
      alpha = v;
      break;
    }
  }

  // BFS from the alpha carbon; nodes of equal depth are compared by index.
  std::vector<int> depth(mol.num_atoms(), -1);
  std::deque<int> queue { alpha };
  depth[alpha] = 0;
  int best_depth = -1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (best_depth >= 0 && depth[u] > best_depth)
      break;
    if (eligible_amine(mol, u)) {
      if (out.n_attach < 0 || u < out.n_attach)
        out.n_attach = u;
      best_depth = depth[u];
    }
    for (const int v: mol.neighbors(u)) {
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (out.n_attach < 0)
    throw PeptideError("no amine nitrogen with a free hydrogen");
  return out;
}

Attachments detect_attachments(std::string_view smiles) {
  return detect_attachments(neutralize_amino_acid(chem::parse_smiles(smiles)));
}

MolGraph neutralize_amino_acid(const MolGraph &mol) {
  MolGraph out = mol;
  bool has_carboxylate = false;
  for (int i = 0; i < mol.num_atoms(); ++i)
    has_carboxylate = has_carboxylate || is_carboxylate_o(mol, i);
  if (!has_carboxylate)
    return out;

  for (int i = 0; i < mol.num_atoms(); ++i) {
    Atom &a = out.mutable_atom(i);
    if (is_carboxylate_o(mol, i)) {
      a.charge = 0;
      a.explicit_h.reset();
    } else if (a.element == Element::kN && a.charge == 1 && !a.aromatic
               && a.explicit_h.value_or(0) >= 1) {
      a.charge = 0;
      a.explicit_h = 3 - mol.valence_sum(i);
    }
  }
  return out;
}

Monomer make_monomer(std::string id, std::string_view smiles, bool natural) {
  Monomer m;
  m.id = std::move(id);
  m.smiles = std::string(smiles);
  m.natural = natural;
  try {
    m.mol = neutralize_amino_acid(chem::parse_smiles(smiles));
    const chem::ValenceReport report = chem::validate_valence(m.mol);
    if (!report.valid)
      throw PeptideError("valence: " + report.problems.front().message);
    m.attach = detect_attachments(m.mol);
  } catch (const std::exception &e) {
    throw PeptideError("monomer " + m.id + ": " + e.what());
  }
  m.canonical = chem::canonical_smiles(m.mol);
  return m;
}

void MonomerVocabulary::add(Monomer m) {
  if (entries_.count(m.id))
    throw PeptideError("duplicate monomer id " + m.id);
  by_canonical_.emplace(m.canonical, m.id);
  order_.push_back(m.id);
  std::string key = m.id;
  entries_.emplace(std::move(key), std::move(m));
}

bool MonomerVocabulary::contains(std::string_view id) const {
  return entries_.find(id) != entries_.end();
}

const Monomer &MonomerVocabulary::at(std::string_view id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end())
    throw PeptideError("unknown monomer " + std::string(id));
  return it->second;
}

const Monomer &MonomerVocabulary::at(std::size_t index) const {
  return entries_.find(order_.at(index))->second;
}

std::string MonomerVocabulary::find_canonical(
    std::string_view canonical) const {
  const auto it = by_canonical_.find(canonical);
  return it == by_canonical_.end() ? std::string() : it->second;
}

MonomerVocabulary read_vocabulary(std::istream &in) {
  MonomerVocabulary vocab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');)
      fields.push_back(f);
    auto fail = [&](const std::string &why) {
      throw PeptideError("vocabulary line " + std::to_string(line_no) + ": "
                         + why);
    };
    if (fields.size() != 3)
      fail("expected 3 tab-separated fields");
    bool natural = false;
    if (fields[2] == "1" || fields[2] == "true")
      natural = true;
    else if (fields[2] != "0" && fields[2] != "false")
      fail("natural flag must be 1, 0, true or false");
    try {
      vocab.add(make_monomer(fields[0], fields[1], natural));
    } catch (const PeptideError &e) {
      fail(e.what());
    }
  }
  return vocab;
}

MonomerVocabulary load_vocabulary(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw PeptideError("cannot open vocabulary " + path);
  return read_vocabulary(in);
}

}  // namespace pepforge::peptide
