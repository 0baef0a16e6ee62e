//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/chem/canonical.h"

#include <algorithm>
#include <memory>
#include <numeric>
#include <tuple>
#include <utility>

#include "pepforge/chem/smiles.h"

namespace pepforge::chem {

bool odd_permutation(std::span<const int> from, std::span<const int> to) {
  const std::size_t n = from.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::find(from.begin(), from.end(), to[i]);
    perm[i] = static_cast<std::size_t>(it - from.begin());
  }
  std::vector<bool> seen(n, false);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i])
      continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = perm[j])
      seen[j] = true;
  }
  return (n - cycles) % 2 == 1;
}

Chirality chirality_for_order(const MolGraph &mol, int atom,
                              std::span<const int> order) {
  const Chirality tag = mol.atom(atom).chirality;
  const std::span<const int> ref = mol.stereo_order(atom);
  if (tag == Chirality::kNone || ref.size() != order.size())
    return Chirality::kNone;
  std::vector<int> a(ref.begin(), ref.end()), b(order.begin(), order.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
    return Chirality::kNone;
  return odd_permutation(ref, order) ? invert(tag) : tag;
}

int stereo_label(const MolGraph &mol, int atom, std::span<const int> ranks) {
  const std::span<const int> ref = mol.stereo_order(atom);
  if (mol.atom(atom).chirality == Chirality::kNone || ref.empty())
    return 0;

  auto key = [&](int r) { return r == kImplicitHydrogen ? -1 : ranks[r]; };
  std::vector<int> sorted(ref.begin(), ref.end());
  std::sort(sorted.begin(), sorted.end(),
            [&](int a, int b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (key(sorted[i - 1]) == key(sorted[i]))
      return 0;

  const Chirality c = chirality_for_order(mol, atom, sorted);
  return c == Chirality::kCounterClockwise ? 1 : 2;
}

namespace {
// Dense rank of `keys`; returns the number of distinct classes.
template <class Key>
int dense_rank(const std::vector<Key> &keys, std::vector<int> &classes) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  classes.assign(n, 0);
  int cls = 0;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && keys[idx[k - 1]] < keys[idx[k]])
      ++cls;
    classes[idx[k]] = cls;
  }
  return n == 0 ? 0 : cls + 1;
}

int bond_code(BondOrder o) {
  return static_cast<int>(o);
}

// Tie-break search is exhaustive only when a tagged center cannot be
// labeled from the symmetry classes; this caps the number of leaves.
constexpr double kMaxSearchLeaves = 4096;

class Ranker {
public:
  explicit Ranker(const MolGraph &mol): mol_(mol), n_(mol.num_atoms()) { }

  // Refinement and stereo folding up to the first tie; labels recorded
  // here are the symmetry-invariant ones.
  void start() {
    initial();
    settle();
    labels_.resize(n_);
    for (int i = 0; i < n_; ++i)
      labels_[i] = stereo_label(mol_, i, classes_);
  }

  CanonicalRanking finish_greedy() {
    while (count_ < n_) {
      split(first_in(lowest_tied()));
      settle();
    }
    return { classes_, labels_ };
  }

  bool undefined_stereo() const {
    for (int i = 0; i < n_; ++i)
      if (mol_.atom(i).chirality != Chirality::kNone && labels_[i] == 0)
        return true;
    return false;
  }

  // Upper bound on leaves of the full tie-break tree.
  double search_size() const {
    std::vector<int> size(n_, 0);
    for (const int c: classes_)
      ++size[c];
    double leaves = 1;
    for (const int k: size)
      for (int f = 2; f <= k && leaves <= kMaxSearchLeaves; ++f)
        leaves *= f;
    return leaves;
  }

  // Tries every tie-break choice and keeps the smallest string.
  std::string search() {
    if (count_ == n_)
      return write_smiles(mol_, classes_);
    const int target = lowest_tied();
    std::string best;
    const std::vector<int> saved = classes_;
    const int saved_count = count_;
    for (int i = 0; i < n_; ++i) {
      if (saved[i] != target)
        continue;
      classes_ = saved;
      count_ = saved_count;
      split(i);
      settle();
      std::string s = search();
      if (best.empty() || s < best)
        best = std::move(s);
    }
    return best;
  }

  const std::vector<int> &labels() const { return labels_; }

private:
  void settle() {
    refine();
    fold_stereo();
  }

  void initial() {
    const std::vector<bool> ring = mol_.ring_atoms();
    using Key = std::tuple<int, int, int, int, int, int, int>;
    std::vector<Key> keys(n_);
    for (int i = 0; i < n_; ++i) {
      const Atom &a = mol_.atom(i);
      keys[i] = { mol_.degree(i),
                  atomic_number(a.element),
                  a.isotope.value_or(0),
                  a.charge,
                  mol_.total_hydrogens(i),
                  a.aromatic ? 1 : 0,
                  ring[i] ? 1 : 0 };
    }
    count_ = dense_rank(keys, classes_);
  }

  // Splits classes by the multiset of (bond order, neighbor class) until
  // the partition is stable. Environments live in one flat buffer.
  void refine() {
    if (offsets_.empty()) {
      offsets_.assign(n_ + 1, 0);
      for (int i = 0; i < n_; ++i)
        offsets_[i + 1] =
            offsets_[i] + static_cast<int>(mol_.incident_bonds(i).size());
      env_.assign(offsets_[n_], 0);
      order_.resize(n_);
    }
    std::vector<int> next(n_);
    for (;;) {
      for (int i = 0; i < n_; ++i) {
        int *out = env_.data() + offsets_[i];
        for (const int bi: mol_.incident_bonds(i)) {
          const Bond &b = mol_.bond(bi);
          *out++ = bond_code(b.order) * (n_ + 1) + classes_[b.other(i)];
        }
        std::sort(env_.data() + offsets_[i], out);
      }
      std::iota(order_.begin(), order_.end(), 0);
      auto less = [&](int a, int b) {
        if (classes_[a] != classes_[b])
          return classes_[a] < classes_[b];
        return std::lexicographical_compare(
            env_.begin() + offsets_[a], env_.begin() + offsets_[a + 1],
            env_.begin() + offsets_[b], env_.begin() + offsets_[b + 1]);
      };
      std::sort(order_.begin(), order_.end(), less);
      int cls = 0;
      for (int k = 0; k < n_; ++k) {
        if (k > 0 && less(order_[k - 1], order_[k]))
          ++cls;
        next[order_[k]] = cls;
      }
      const int count = n_ == 0 ? 0 : cls + 1;
      classes_.swap(next);
      if (count == count_)
        return;
      count_ = count;
    }
  }

  void fold_stereo() {
    for (;;) {
      std::vector<std::pair<int, int>> keys(n_);
      for (int i = 0; i < n_; ++i)
        keys[i] = { classes_[i], stereo_label(mol_, i, classes_) };
      std::vector<int> next;
      const int count = dense_rank(keys, next);
      classes_ = std::move(next);
      if (count == count_)
        return;
      count_ = count;
      refine();
    }
  }

  int lowest_tied() const {
    std::vector<int> size(n_, 0);
    for (const int c: classes_)
      ++size[c];
    for (int c = 0; c < n_; ++c)
      if (size[c] > 1)
        return c;
    return -1;
  }

  int first_in(int cls) const {
    for (int i = 0; i < n_; ++i)
      if (classes_[i] == cls)
        return i;
    return -1;
  }

  // Moves every member of `chosen`'s class except `chosen` one step up.
  void split(int chosen) {
    const int target = classes_[chosen];
    std::vector<std::pair<int, int>> keys(n_);
    for (int i = 0; i < n_; ++i)
      keys[i] = { classes_[i], classes_[i] == target && i != chosen ? 1 : 0 };
    count_ = dense_rank(keys, classes_);
  }

  const MolGraph &mol_;
  int n_;
  std::vector<int> classes_;
  std::vector<int> labels_;
  int count_ = 0;
  std::vector<int> offsets_, env_, order_;
};
}  // namespace

CanonicalRanking canonical_ranking(const MolGraph &mol) {
  Ranker ranker(mol);
  ranker.start();
  return ranker.finish_greedy();
}

std::string canonical_smiles(const MolGraph &mol) {
  Ranker ranker(mol);
  ranker.start();
  if (!ranker.undefined_stereo())
    return write_smiles(mol, ranker.finish_greedy().ranks);
  if (ranker.search_size() <= kMaxSearchLeaves)
    return ranker.search();

  // Too symmetric to search: write undefined centers with a fixed tag.
  const std::vector<int> labels = ranker.labels();
  const CanonicalRanking ranking = ranker.finish_greedy();
  const int n = mol.num_atoms();
  const std::unique_ptr<bool[]> fixed(new bool[n]);
  for (int i = 0; i < n; ++i)
    fixed[i] = mol.atom(i).chirality != Chirality::kNone && labels[i] == 0;
  return write_smiles(mol, ranking.ranks, std::span<const bool>(fixed.get(), n));
}

}  // namespace pepforge::chem
