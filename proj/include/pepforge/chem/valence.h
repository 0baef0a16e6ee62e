//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pepforge/chem/mol_graph.h"

namespace pepforge::chem {

// Allowed total valences (bond orders + hydrogens) for an element carrying a
// formal charge. A charged atom behaves like the isoelectronic neutral group
// member: N+ like C, O- like F, C- like N and so on. P and S keep their
// expanded valences. Empty when the charge leaves no valid state.
std::span<const int> allowed_valences(Element element, int charge);

// Hydrogens an unbracketed atom receives under the valence model.
int default_implicit_hydrogens(Element element, bool aromatic,
                               int valence_sum, bool has_aromatic_bond);

struct AtomDiagnostic {
  int atom;
  int valence;  // bond orders + hydrogens
  std::string message;
};

struct ValenceReport {
  bool valid = true;
  std::vector<AtomDiagnostic> problems;
  std::vector<int> implicit_hydrogens;

  explicit operator bool() const { return valid; }
};

ValenceReport validate_valence(const MolGraph &mol);

}  // namespace pepforge::chem
