//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/chem/fingerprint.h"

#include <algorithm>
#include <utility>

#include "pepforge/chem/canonical.h"
#include "pepforge/util/hash.h"

namespace pepforge::chem {

Fingerprint morgan_fingerprint(const MolGraph &mol, int radius, int n_bits) {
  if (radius < 0)
    throw FingerprintError("fingerprint radius must be non-negative");
  if (n_bits < 64)
    throw FingerprintError("fingerprint needs at least 64 bits");

  const int n = mol.num_atoms();
  const std::vector<bool> ring = mol.ring_atoms();
  // Stereo labels need the ranking; skip it for molecules without centers.
  bool chiral = false;
  for (const Atom &a: mol.atoms())
    chiral = chiral || a.chirality != Chirality::kNone;
  std::vector<int> labels(n, 0);
  if (chiral)
    labels = canonical_ranking(mol).stereo_labels;

  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atom(i);
    std::uint64_t h = kHashSeed;
    h = hash_combine(h, atomic_number(a.element));
    h = hash_combine(h, static_cast<std::uint64_t>(a.charge + 8));
    h = hash_combine(h, mol.degree(i));
    h = hash_combine(h, mol.total_hydrogens(i));
    h = hash_combine(h, a.aromatic ? 1 : 0);
    h = hash_combine(h, ring[i] ? 1 : 0);
    h = hash_combine(h, labels[i]);
    ids[i] = h;
  }

  std::vector<std::uint32_t> bits;
  bits.reserve(static_cast<std::size_t>(n) * (radius + 1));
  auto emit = [&] {
    for (const std::uint64_t id: ids)
      bits.push_back(static_cast<std::uint32_t>(id % n_bits));
  };
  emit();

  std::vector<std::uint64_t> next(n);
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const int bi: mol.incident_bonds(i)) {
        const Bond &b = mol.bond(bi);
        env.emplace_back(static_cast<int>(b.order), ids[b.other(i)]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = hash_combine(kHashSeed, r);
      h = hash_combine(h, ids[i]);
      for (const auto &[order, id]: env)
        h = hash_combine(hash_combine(h, order), id);
      next[i] = h;
    }
    ids.swap(next);
    emit();
  }

  std::sort(bits.begin(), bits.end());
  bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
  return { std::move(bits), n_bits, radius };
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.n_bits != b.n_bits)
    throw FingerprintError("tanimoto on fingerprints of different sizes");
  if (a.bits.empty() && b.bits.empty())
    return 1.0;

  std::size_t common = 0;
  auto ia = a.bits.begin();
  auto ib = b.bits.begin();
  while (ia != a.bits.end() && ib != b.bits.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t total = a.bits.size() + b.bits.size() - common;
  return static_cast<double>(common) / static_cast<double>(total);
}

}  // namespace pepforge::chem
