//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pepforge::chem {

enum class Element : std::uint8_t { kH, kB, kC, kN, kO, kF, kP, kS, kCl, kBr, kI };

std::string_view symbol(Element e);
int atomic_number(Element e);
std::optional<Element> element_from_symbol(std::string_view sym);

constexpr bool is_halogen(Element e) {
  return e == Element::kF || e == Element::kCl || e == Element::kBr
         || e == Element::kI;
}

// Tetrahedral tag as written in SMILES. Interpreted against the atom's
// stereo reference order (see MolGraph::stereo_order).
enum class Chirality : std::uint8_t {
  kNone,
  kCounterClockwise,  // @
  kClockwise,         // @@
};

constexpr Chirality invert(Chirality c) {
  switch (c) {
  case Chirality::kCounterClockwise:
    return Chirality::kClockwise;
  case Chirality::kClockwise:
    return Chirality::kCounterClockwise;
  default:
    return c;
  }
}

struct Atom {
  Element element = Element::kC;
  int charge = 0;
  // Present iff the atom was written in brackets.
  std::optional<int> explicit_h;
  Chirality chirality = Chirality::kNone;
  bool aromatic = false;
  std::optional<int> isotope;

  bool bracketed() const { return explicit_h.has_value(); }
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Contribution of a bond to its endpoints' valence. Aromatic bonds count as
// one; the delocalized electron is accounted per atom by the valence model.
constexpr int valence_contribution(BondOrder o) {
  return o == BondOrder::kAromatic ? 1 : static_cast<int>(o);
}

struct Bond {
  int begin;
  int end;
  BondOrder order;

  int other(int atom) const { return atom == begin ? end : begin; }
};

class MolGraphError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Placeholder for the implicit hydrogen of a bracket atom inside a stereo
// reference order.
inline constexpr int kImplicitHydrogen = -1;

class MolGraph {
public:
  int add_atom(const Atom &atom);

  // Throws MolGraphError on self loops, out-of-range indices or a second
  // bond between the same pair.
  int add_bond(int a, int b, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  Atom &mutable_atom(int i) { return atoms_[i]; }

  const std::vector<Bond> &bonds() const { return bonds_; }
  const Bond &bond(int i) const { return bonds_[i]; }

  // Bond indices incident to an atom, in insertion order.
  std::span<const int> incident_bonds(int atom) const {
    return adjacency_[atom];
  }

  // Returns -1 when the atoms are not bonded.
  int find_bond(int a, int b) const;

  std::vector<int> neighbors(int atom) const;
  int degree(int atom) const {
    return static_cast<int>(adjacency_[atom].size());
  }
  int valence_sum(int atom) const;
  bool has_aromatic_bond(int atom) const;

  int implicit_hydrogens(int atom) const;
  int total_hydrogens(int atom) const;

  int heavy_atom_count() const;
  int net_charge() const;
  int num_components() const;

  // Bond is in a ring iff it is not a bridge.
  std::vector<bool> ring_bonds() const;
  std::vector<bool> ring_atoms() const;
  // Cyclomatic number: bonds - atoms + components.
  int ring_count() const;

  // Neighbor order the chirality tag refers to: atom indices in SMILES
  // order, with kImplicitHydrogen standing for a bracket hydrogen. Empty for
  // atoms without a tag.
  std::span<const int> stereo_order(int atom) const {
    return stereo_order_[atom];
  }
  void set_stereo_order(int atom, std::vector<int> order);

  // Drops chirality tags that cannot describe a tetrahedral center (fewer
  // than three or more than four references). Returns the number dropped.
  int prune_stereo();

  // Copy with the given atoms removed; indices are compacted in order and
  // stereo references are remapped. A chiral atom that loses a reference
  // loses its tag.
  MolGraph without_atoms(std::span<const int> removed) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> stereo_order_;
};

}  // namespace pepforge::chem
