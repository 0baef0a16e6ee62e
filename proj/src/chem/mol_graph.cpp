//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/chem/mol_graph.h"

#include <algorithm>
#include <array>
#include <functional>
#include <utility>

#include "pepforge/chem/valence.h"

namespace pepforge::chem {
namespace {
struct ElementInfo {
  Element element;
  std::string_view symbol;
  int z;
};

constexpr std::array<ElementInfo, 11> kElements { {
    { Element::kH, "H", 1 },
    { Element::kB, "B", 5 },
    { Element::kC, "C", 6 },
    { Element::kN, "N", 7 },
    { Element::kO, "O", 8 },
    { Element::kF, "F", 9 },
    { Element::kP, "P", 15 },
    { Element::kS, "S", 16 },
    { Element::kCl, "Cl", 17 },
    { Element::kBr, "Br", 35 },
    { Element::kI, "I", 53 },
} };
}  // namespace

std::string_view symbol(Element e) {
  return kElements[static_cast<int>(e)].symbol;
}

int atomic_number(Element e) {
  return kElements[static_cast<int>(e)].z;
}

std::optional<Element> element_from_symbol(std::string_view sym) {
  for (const auto &info: kElements)
    if (info.symbol == sym)
      return info.element;
  return std::nullopt;
}

int MolGraph::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  stereo_order_.emplace_back();
  return num_atoms() - 1;
}

int MolGraph::add_bond(int a, int b, BondOrder order) {
  if (a < 0 || b < 0 || a >= num_atoms() || b >= num_atoms())
    throw MolGraphError("bond references a missing atom");
  if (a == b)
    throw MolGraphError("bond endpoints must differ");
  if (find_bond(a, b) >= 0)
    throw MolGraphError("duplicate bond between atoms "
                        + std::to_string(a) + " and " + std::to_string(b));
  bonds_.push_back({ a, b, order });
  const int idx = num_bonds() - 1;
  adjacency_[a].push_back(idx);
  adjacency_[b].push_back(idx);
  return idx;
}

int MolGraph::find_bond(int a, int b) const {
  for (const int bi: adjacency_[a])
    if (bonds_[bi].other(a) == b)
      return bi;
  return -1;
}

std::vector<int> MolGraph::neighbors(int atom) const {
  std::vector<int> out;
  out.reserve(adjacency_[atom].size());
  for (const int bi: adjacency_[atom])
    out.push_back(bonds_[bi].other(atom));
  return out;
}

int MolGraph::valence_sum(int atom) const {
  int sum = 0;
  for (const int bi: adjacency_[atom])
    sum += valence_contribution(bonds_[bi].order);
  return sum;
}

bool MolGraph::has_aromatic_bond(int atom) const {
  return std::any_of(adjacency_[atom].begin(), adjacency_[atom].end(),
                     [&](int bi) {
                       return bonds_[bi].order == BondOrder::kAromatic;
                     });
}

int MolGraph::implicit_hydrogens(int atom) const {
  const Atom &a = atoms_[atom];
  if (a.bracketed())
    return 0;
  return default_implicit_hydrogens(a.element, a.aromatic, valence_sum(atom),
                                    has_aromatic_bond(atom));
}

int MolGraph::total_hydrogens(int atom) const {
  const Atom &a = atoms_[atom];
  return a.bracketed() ? *a.explicit_h : implicit_hydrogens(atom);
}

int MolGraph::heavy_atom_count() const {
  return static_cast<int>(
      std::count_if(atoms_.begin(), atoms_.end(),
                    [](const Atom &a) { return a.element != Element::kH; }));
}

int MolGraph::net_charge() const {
  int q = 0;
  for (const Atom &a: atoms_)
    q += a.charge;
  return q;
}

int MolGraph::num_components() const {
  std::vector<int> comp(num_atoms(), -1);
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < num_atoms(); ++s) {
    if (comp[s] >= 0)
      continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const int bi: adjacency_[u]) {
        const int v = bonds_[bi].other(u);
        if (comp[v] < 0) {
          comp[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

std::vector<bool> MolGraph::ring_bonds() const {
  // Bridge finding (Tarjan), iterative to survive long chains.
  const int n = num_atoms();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> ring(num_bonds(), true);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0)
      continue;
    disc[s] = low[s] = timer++;
    stack.push_back({ s, -1, 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next < adjacency_[f.atom].size()) {
        const int bi = adjacency_[f.atom][f.next++];
        if (bi == f.parent_bond)
          continue;
        const int v = bonds_[bi].other(f.atom);
        if (disc[v] < 0) {
          disc[v] = low[v] = timer++;
          stack.push_back({ v, bi, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[v]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int p = stack.back().atom;
          low[p] = std::min(low[p], low[done.atom]);
          if (low[done.atom] > disc[p])
            ring[done.parent_bond] = false;
        }
      }
    }
  }
  return ring;
}

std::vector<bool> MolGraph::ring_atoms() const {
  const std::vector<bool> rb = ring_bonds();
  std::vector<bool> out(num_atoms(), false);
  for (int i = 0; i < num_bonds(); ++i) {
    if (rb[i]) {
      out[bonds_[i].begin] = true;
      out[bonds_[i].end] = true;
    }
  }
  return out;
}

int MolGraph::ring_count() const {
  return num_bonds() - num_atoms() + num_components();
}

void MolGraph::set_stereo_order(int atom, std::vector<int> order) {
  stereo_order_[atom] = std::move(order);
}

int MolGraph::prune_stereo() {
  int dropped = 0;
  for (int i = 0; i < num_atoms(); ++i) {
    if (atoms_[i].chirality == Chirality::kNone) {
      stereo_order_[i].clear();
      continue;
    }
    const auto refs = stereo_order_[i].size();
    if (refs < 3 || refs > 4) {
      atoms_[i].chirality = Chirality::kNone;
      stereo_order_[i].clear();
      ++dropped;
    }
  }
  return dropped;
}

MolGraph MolGraph::without_atoms(std::span<const int> removed) const {
  std::vector<int> remap(num_atoms(), 0);
  for (const int r: removed)
    remap[r] = -1;

  MolGraph out;
  for (int i = 0; i < num_atoms(); ++i)
    if (remap[i] >= 0)
      remap[i] = out.add_atom(atoms_[i]);

  for (const Bond &b: bonds_)
    if (remap[b.begin] >= 0 && remap[b.end] >= 0)
      out.add_bond(remap[b.begin], remap[b.end], b.order);

  for (int i = 0; i < num_atoms(); ++i) {
    if (remap[i] < 0 || stereo_order_[i].empty())
      continue;
    std::vector<int> order;
    bool lost = false;
    for (const int ref: stereo_order_[i]) {
      if (ref == kImplicitHydrogen) {
        order.push_back(ref);
      } else if (remap[ref] >= 0) {
        order.push_back(remap[ref]);
      } else {
        lost = true;
      }
    }
    if (lost) {
      out.atoms_[remap[i]].chirality = Chirality::kNone;
    } else {
      out.stereo_order_[remap[i]] = std::move(order);
    }
  }
  return out;
}

}  // namespace pepforge::chem
