//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/chem/valence.h"

#include <algorithm>
#include <cstdlib>

namespace pepforge::chem {
namespace {
int valence_electrons(Element e) {
  switch (e) {
  case Element::kH:
    return 1;
  case Element::kB:
    return 3;
  case Element::kC:
    return 4;
  case Element::kN:
  case Element::kP:
    return 5;
  case Element::kO:
  case Element::kS:
    return 6;
  default:
    return 7;
  }
}

bool expanded_octet(Element e) {
  return e == Element::kP || e == Element::kS;
}
}  // namespace

std::span<const int> allowed_valences(Element element, int charge) {
  static constexpr int kSingle[] = { 0, 1, 2, 3, 4 };
  static constexpr int kPnictogen[] = { 3, 5 };
  static constexpr int kChalcogen[] = { 2, 4, 6 };
  if (charge < -4 || charge > 4)
    return {};
  if (element == Element::kH) {
    const int v = 1 - std::abs(charge);
    return v >= 0 ? std::span<const int>(kSingle + v, 1)
                  : std::span<const int>();
  }

  const int eff = valence_electrons(element) - charge;
  if (eff < 0 || eff > 8)
    return {};
  if (expanded_octet(element)) {
    if (eff == 5)
      return kPnictogen;
    if (eff == 6)
      return kChalcogen;
  }
  return { kSingle + (eff <= 4 ? eff : 8 - eff), 1 };
}

int default_implicit_hydrogens(Element element, bool aromatic,
                               int valence_sum, bool has_aromatic_bond) {
  const std::span<const int> allowed = allowed_valences(element, 0);
  if (allowed.empty())
    return 0;

  if (aromatic && has_aromatic_bond) {
    // Only the default valence applies to aromatic atoms; try with the pi
    // electron first, then without (pyrrole-type N, furan O, thiophene S).
    const int base = allowed.front();
    if (valence_sum + 1 <= base)
      return base - valence_sum - 1;
    return std::max(0, base - valence_sum);
  }

  for (const int v: allowed)
    if (v >= valence_sum)
      return v - valence_sum;
  return 0;
}

ValenceReport validate_valence(const MolGraph &mol) {
  ValenceReport report;
  report.implicit_hydrogens.resize(mol.num_atoms());

  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    report.implicit_hydrogens[i] = mol.implicit_hydrogens(i);

    const int h = mol.total_hydrogens(i);
    const int valence = mol.valence_sum(i) + h;
    const std::span<const int> allowed = allowed_valences(a.element, a.charge);
    auto fits = [&](int v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    };

    bool ok = fits(valence);
    if (!ok && a.aromatic && mol.has_aromatic_bond(i))
      ok = fits(valence + 1);

    if (!ok) {
      std::string msg = std::string(symbol(a.element));
      if (a.charge != 0)
        msg += (a.charge > 0 ? "+" : "") + std::to_string(a.charge);
      msg += " with valence " + std::to_string(valence);
      msg += allowed.empty() ? " (charge not supported)"
                             : " exceeds or misses the allowed valences";
      report.problems.push_back({ i, valence, std::move(msg) });
    }
    if (a.isotope && *a.isotope <= 0)
      report.problems.push_back({ i, valence, "non-positive isotope" });
    if (a.explicit_h && *a.explicit_h < 0)
      report.problems.push_back({ i, valence, "negative hydrogen count" });
  }

  if (mol.num_atoms() == 0)
    report.problems.push_back({ -1, 0, "empty molecule" });
  report.valid = report.problems.empty();
  return report;
}

}  // namespace pepforge::chem
