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

// Parity of the permutation taking `from` to `to` (same elements, any
// order). Returns true for odd permutations.
bool odd_permutation(std::span<const int> from, std::span<const int> to);

// Tag the atom would carry if its references were listed as `order`.
Chirality chirality_for_order(const MolGraph &mol, int atom,
                              std::span<const int> order);

// Rank-relative stereo label: 0 when the atom has no tag or its references
// are not fully distinguished by `ranks`; otherwise 1 (@) or 2 (@@) for the
// references listed in increasing rank order, hydrogen first.
int stereo_label(const MolGraph &mol, int atom, std::span<const int> ranks);

struct CanonicalRanking {
  std::vector<int> ranks;          // permutation of [0, n)
  std::vector<int> stereo_labels;  // per atom, see stereo_label()
};

// Iterative neighborhood refinement with stereo labels folded in once they
// are defined; remaining ties broken at the smallest atom index. The
// returned labels are those known before any tie was broken.
CanonicalRanking canonical_ranking(const MolGraph &mol);

// When a tagged center sits on symmetry-equivalent references (ring cis/trans
// pairs, or a center that is not stereogenic at all) every tie-break choice
// is tried and the smallest string kept. Past a few thousand choices such
// centers are written with a fixed '@' and their relative configuration is
// lost.
std::string canonical_smiles(const MolGraph &mol);

}  // namespace pepforge::chem
