//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/chem/smiles.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/valence.h"

namespace pepforge::chem {

SmilesError::SmilesError(const std::string &what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      offset_(offset) { }

namespace {
constexpr int kUnfilled = -2;

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

class Parser {
public:
  Parser(std::string_view text, std::vector<std::string> &warnings)
      : text_(text), warnings_(warnings) { }

  MolGraph run() {
    if (text_.empty())
      throw SmilesError("empty SMILES", 0);

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      switch (c) {
      case '(':
        open_branch();
        break;
      case ')':
        close_branch();
        break;
      case '.':
        if (pending_)
          throw SmilesError("bond before '.'", pos_);
        if (!branches_.empty())
          throw SmilesError("'.' inside a branch", pos_);
        prev_ = -1;
        ++pos_;
        break;
      case '-':
      case '=':
      case '#':
      case ':':
      case '/':
      case '\\':
        read_bond();
        break;
      case '%':
        read_ring_percent();
        break;
      case '[':
        read_bracket_atom();
        break;
      default:
        if (is_digit(c)) {
          ring_closure(c - '0', pos_);
          ++pos_;
        } else {
          read_organic_atom();
        }
        break;
      }
    }

    if (pending_)
      throw SmilesError("dangling bond", pending_offset_);
    if (!branches_.empty())
      throw SmilesError("unclosed branch", branches_.back().offset);
    if (!rings_.empty())
      throw SmilesError("unclosed ring " + std::to_string(rings_.begin()->first),
                        rings_.begin()->second.offset);

    for (int i = 0; i < mol_.num_atoms(); ++i)
      if (mol_.atom(i).chirality != Chirality::kNone)
        mol_.set_stereo_order(i, order_[i]);
    if (const int dropped = mol_.prune_stereo(); dropped > 0)
      warnings_.push_back("dropped " + std::to_string(dropped)
                          + " chirality tag(s) without a tetrahedral center");
    return std::move(mol_);
  }

private:
  struct Branch {
    int atom;
    int atoms_at_open;
    std::size_t offset;
  };

  struct RingOpen {
    int atom;
    std::optional<BondOrder> order;
    std::size_t slot;
    std::size_t offset;
  };

  BondOrder default_order(int a, int b) const {
    return mol_.atom(a).aromatic && mol_.atom(b).aromatic ? BondOrder::kAromatic
                                                          : BondOrder::kSingle;
  }

  void open_branch() {
    if (prev_ < 0)
      throw SmilesError("branch without a preceding atom", pos_);
    if (pending_)
      throw SmilesError("bond before '('", pos_);
    branches_.push_back({ prev_, mol_.num_atoms(), pos_ });
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty())
      throw SmilesError("unmatched ')'", pos_);
    if (pending_)
      throw SmilesError("dangling bond before ')'", pending_offset_);
    if (mol_.num_atoms() == branches_.back().atoms_at_open)
      throw SmilesError("empty branch", pos_);
    prev_ = branches_.back().atom;
    branches_.pop_back();
    ++pos_;
  }

  void read_bond() {
    if (pending_)
      throw SmilesError("consecutive bond symbols", pos_);
    const char c = text_[pos_];
    switch (c) {
    case '-':
      pending_ = BondOrder::kSingle;
      break;
    case '=':
      pending_ = BondOrder::kDouble;
      break;
    case '#':
      pending_ = BondOrder::kTriple;
      break;
    case ':':
      pending_ = BondOrder::kAromatic;
      break;
    default:
      if (!warned_ez_) {
        warnings_.push_back("E/Z bond marks stripped");
        warned_ez_ = true;
      }
      pending_ = BondOrder::kSingle;
      break;
    }
    pending_offset_ = pos_;
    ++pos_;
  }

  void read_ring_percent() {
    const std::size_t start = pos_;
    if (pos_ + 2 >= text_.size() || !is_digit(text_[pos_ + 1])
        || !is_digit(text_[pos_ + 2]))
      throw SmilesError("malformed %nn ring closure", start);
    const int digit = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
    pos_ += 3;
    ring_closure(digit, start);
  }

  void ring_closure(int digit, std::size_t offset) {
    if (prev_ < 0)
      throw SmilesError("ring closure without a preceding atom", offset);

    auto it = rings_.find(digit);
    if (it == rings_.end()) {
      rings_[digit] = { prev_, pending_, order_[prev_].size(), offset };
      order_[prev_].push_back(kUnfilled);
      pending_.reset();
      return;
    }

    const RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == prev_)
      throw SmilesError("ring closure to the same atom", offset);
    if (pending_ && open.order && *pending_ != *open.order)
      throw SmilesError("conflicting ring closure bond orders", offset);

    const BondOrder order = pending_   ? *pending_
                            : open.order ? *open.order
                                         : default_order(open.atom, prev_);
    if (mol_.find_bond(open.atom, prev_) >= 0)
      throw SmilesError("duplicate bond via ring closure", offset);
    mol_.add_bond(open.atom, prev_, order);
    order_[prev_].push_back(open.atom);
    order_[open.atom][open.slot] = prev_;
    pending_.reset();
  }

  void attach(const Atom &atom) {
    const int idx = mol_.add_atom(atom);
    order_.emplace_back();
    if (prev_ >= 0) {
      const BondOrder order = pending_ ? *pending_ : default_order(prev_, idx);
      mol_.add_bond(prev_, idx, order);
      order_[idx].push_back(prev_);
      order_[prev_].push_back(idx);
    } else if (pending_) {
      throw SmilesError("bond without a preceding atom", pending_offset_);
    }
    if (atom.explicit_h.value_or(0) > 0)
      order_[idx].push_back(kImplicitHydrogen);
    pending_.reset();
    prev_ = idx;
  }

  void read_organic_atom() {
    const std::size_t start = pos_;
    const char c = text_[pos_];
    Atom atom;
    auto take = [&](Element e, bool aromatic, std::size_t len) {
      atom.element = e;
      atom.aromatic = aromatic;
      pos_ += len;
    };
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    switch (c) {
    case 'B':
      if (next == 'r')
        take(Element::kBr, false, 2);
      else
        take(Element::kB, false, 1);
      break;
    case 'C':
      if (next == 'l')
        take(Element::kCl, false, 2);
      else
        take(Element::kC, false, 1);
      break;
    case 'N':
      take(Element::kN, false, 1);
      break;
    case 'O':
      take(Element::kO, false, 1);
      break;
    case 'P':
      take(Element::kP, false, 1);
      break;
    case 'S':
      take(Element::kS, false, 1);
      break;
    case 'F':
      take(Element::kF, false, 1);
      break;
    case 'I':
      take(Element::kI, false, 1);
      break;
    case 'b':
      take(Element::kB, true, 1);
      break;
    case 'c':
      take(Element::kC, true, 1);
      break;
    case 'n':
      take(Element::kN, true, 1);
      break;
    case 'o':
      take(Element::kO, true, 1);
      break;
    case 'p':
      take(Element::kP, true, 1);
      break;
    case 's':
      take(Element::kS, true, 1);
      break;
    case '*':
      throw SmilesError("wildcard atoms are not supported", start);
    case '>':
      throw SmilesError("reactions are not supported", start);
    default:
      if (std::isalpha(static_cast<unsigned char>(c)))
        throw SmilesError("unsupported element '" + std::string(1, c) + "'",
                          start);
      throw SmilesError("unexpected character '" + std::string(1, c) + "'",
                        start);
    }
    attach(atom);
  }

  int read_number() {
    int value = 0;
    bool any = false;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 999)
        throw SmilesError("number too large", pos_);
      any = true;
      ++pos_;
    }
    return any ? value : -1;
  }

  void read_bracket_atom() {
    const std::size_t start = pos_++;
    auto at_end = [&] {
      if (pos_ >= text_.size())
        throw SmilesError("unmatched '['", start);
    };

    Atom atom;
    at_end();
    if (const int iso = read_number(); iso >= 0) {
      if (iso == 0)
        throw SmilesError("isotope must be positive", start + 1);
      atom.isotope = iso;
    }

    at_end();
    const std::size_t sym_at = pos_;
    std::string sym(1, text_[pos_++]);
    if (std::islower(static_cast<unsigned char>(sym[0]))) {
      if (pos_ < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_])))
        throw SmilesError("unsupported aromatic element '" + sym
                              + text_[pos_] + "'",
                          sym_at);
      static const std::set<std::string> kAromatic { "b", "c", "n",
                                                     "o", "p", "s" };
      if (!kAromatic.count(sym))
        throw SmilesError("unsupported element '" + sym + "'", sym_at);
      atom.aromatic = true;
      sym[0] = static_cast<char>(std::toupper(sym[0]));
    } else if (std::isupper(static_cast<unsigned char>(sym[0]))) {
      if (pos_ < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_])))
        sym += text_[pos_++];
    } else if (sym[0] == '*') {
      throw SmilesError("wildcard atoms are not supported", sym_at);
    } else {
      throw SmilesError("expected element symbol", sym_at);
    }
    const auto element = element_from_symbol(sym);
    if (!element)
      throw SmilesError("unsupported element '" + sym + "'", sym_at);
    atom.element = *element;

    at_end();
    if (text_[pos_] == '@') {
      ++pos_;
      atom.chirality = Chirality::kCounterClockwise;
      if (pos_ < text_.size() && text_[pos_] == '@') {
        ++pos_;
        atom.chirality = Chirality::kClockwise;
      }
      if (pos_ < text_.size()
          && (text_[pos_] == 'T' || text_[pos_] == 'S' || text_[pos_] == 'A'
              || text_[pos_] == 'O'))
        throw SmilesError("only @ and @@ chirality is supported", pos_);
    }

    at_end();
    int h = 0;
    if (text_[pos_] == 'H') {
      ++pos_;
      const int n = read_number();
      h = n >= 0 ? n : 1;
    }
    atom.explicit_h = h;

    at_end();
    if (text_[pos_] == '+' || text_[pos_] == '-') {
      const char sign = text_[pos_];
      const std::size_t charge_at = pos_;
      int magnitude = 1;
      ++pos_;
      if (const int n = read_number(); n >= 0) {
        magnitude = n;
      } else {
        while (pos_ < text_.size() && text_[pos_] == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      if (magnitude > 4)
        throw SmilesError("charge outside [-4, 4]", charge_at);
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }

    at_end();
    if (text_[pos_] == ':') {
      ++pos_;
      if (read_number() < 0)
        throw SmilesError("malformed atom class", pos_);
      warnings_.push_back("atom class ignored");
    }

    at_end();
    if (text_[pos_] != ']')
      throw SmilesError("unexpected character in bracket atom", pos_);
    ++pos_;
    attach(atom);
  }

  std::string_view text_;
  std::vector<std::string> &warnings_;
  std::size_t pos_ = 0;
  MolGraph mol_;
  std::vector<std::vector<int>> order_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::size_t pending_offset_ = 0;
  std::vector<Branch> branches_;
  std::map<int, RingOpen> rings_;
  bool warned_ez_ = false;
};

// ---------------------------------------------------------------------------
// Writer

class Writer {
public:
  Writer(const MolGraph &mol, std::span<const int> ranks,
         std::span<const bool> fixed_tag)
      : mol_(mol), ranks_(ranks), fixed_tag_(fixed_tag), n_(mol.num_atoms()) {
    if (static_cast<int>(ranks.size()) != n_)
      throw MolGraphError("rank vector does not match atom count");
    // Per-atom lists live in flat buffers; an atom's children and ring
    // partners never outnumber its neighbors.
    offset_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i)
      offset_[i + 1] =
          offset_[i] + static_cast<int>(mol.incident_bonds(i).size());
    nbrs_.resize(offset_[n_]);
    for (int i = 0; i < n_; ++i) {
      int *out = nbrs_.data() + offset_[i];
      for (const int bi: mol.incident_bonds(i))
        *out++ = mol.bond(bi).other(i);
      std::sort(nbrs_.data() + offset_[i], out,
                [&](int a, int b) { return ranks_[a] < ranks_[b]; });
    }
  }

  std::string run() {
    visited_.assign(n_, false);
    parent_.assign(n_, -1);
    kids_.resize(offset_[n_]);
    kid_count_.assign(n_, 0);
    rings_.resize(offset_[n_]);
    ring_count_.assign(n_, 0);
    ring_marked_.assign(mol_.num_bonds(), false);
    ring_digit_.assign(mol_.num_bonds(), -1);

    std::vector<int> by_rank(n_);
    for (int i = 0; i < n_; ++i)
      by_rank[ranks_[i]] = i;

    std::string out;
    out.reserve(4 * static_cast<std::size_t>(n_));
    for (const int start: by_rank) {
      if (visited_[start])
        continue;
      discover(start);
      if (!out.empty())
        out += '.';
      emit(start, out);
    }
    return out;
  }

private:
  std::span<int> kids(int u) {
    return { kids_.data() + offset_[u], static_cast<std::size_t>(kid_count_[u]) };
  }
  std::span<int> rings(int u) {
    return { rings_.data() + offset_[u],
             static_cast<std::size_t>(ring_count_[u]) };
  }

  void discover(int root) {
    // Iterative DFS keeping the recursive visiting order.
    struct Frame {
      int atom;
      int next;
    };
    std::vector<Frame> stack { { root, offset_[root] } };
    visited_[root] = true;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const int u = f.atom;
      if (f.next == offset_[u + 1]) {
        stack.pop_back();
        continue;
      }
      const int v = nbrs_[f.next++];
      if (v == parent_[u])
        continue;
      const int bi = mol_.find_bond(u, v);
      if (visited_[v]) {
        if (!ring_marked_[bi]) {
          ring_marked_[bi] = true;
          rings_[offset_[v] + ring_count_[v]++] = u;
          rings_[offset_[u] + ring_count_[u]++] = v;
        }
        continue;
      }
      visited_[v] = true;
      parent_[v] = u;
      kids_[offset_[u] + kid_count_[u]++] = v;
      stack.push_back({ v, offset_[v] });
    }
  }

  const char *bond_symbol(int a, int b) const {
    const BondOrder order = mol_.bond(mol_.find_bond(a, b)).order;
    const bool both_aromatic = mol_.atom(a).aromatic && mol_.atom(b).aromatic;
    switch (order) {
    case BondOrder::kSingle:
      return both_aromatic ? "-" : "";
    case BondOrder::kDouble:
      return "=";
    case BondOrder::kTriple:
      return "#";
    case BondOrder::kAromatic:
      return both_aromatic ? "" : ":";
    }
    return "";
  }

  void atom_token(int u, const std::vector<int> &order,
                  std::string &out) const {
    const Atom &a = mol_.atom(u);
    Chirality tag = Chirality::kNone;
    if (a.chirality != Chirality::kNone) {
      tag = !fixed_tag_.empty() && fixed_tag_[u]
                ? Chirality::kCounterClockwise
                : chirality_for_order(mol_, u, order);
    }

    const int h = mol_.total_hydrogens(u);
    const int default_h = default_implicit_hydrogens(
        a.element, a.aromatic, mol_.valence_sum(u), mol_.has_aromatic_bond(u));
    const bool bracket = a.element == Element::kH || a.charge != 0
                         || a.isotope.has_value() || tag != Chirality::kNone
                         || h != default_h;

    if (bracket) {
      out += '[';
      if (a.isotope)
        out += std::to_string(*a.isotope);
    }
    const std::size_t at = out.size();
    out += symbol(a.element);
    if (a.aromatic)
      out[at] = static_cast<char>(std::tolower(out[at]));
    if (!bracket)
      return;

    if (tag == Chirality::kCounterClockwise)
      out += '@';
    else if (tag == Chirality::kClockwise)
      out += "@@";
    if (h > 0) {
      out += 'H';
      if (h > 1)
        out += std::to_string(h);
    }
    if (a.charge != 0) {
      out += a.charge > 0 ? '+' : '-';
      if (std::abs(a.charge) > 1)
        out += std::to_string(std::abs(a.charge));
    }
    out += ']';
  }

  int allocate_digit() {
    for (int d = 1; d < 100; ++d) {
      if (!digit_used_[d]) {
        digit_used_[d] = true;
        return d;
      }
    }
    throw MolGraphError("more than 99 open ring closures");
  }

  static void digit_text(int d, std::string &out) {
    if (d >= 10)
      out += '%';
    out += std::to_string(d);
  }

  void emit(int u, std::string &out) {
    const std::span<int> rings = this->rings(u);
    std::sort(rings.begin(), rings.end(),
              [&](int a, int b) { return ranks_[a] < ranks_[b]; });

    // Neighbor order as written; only chiral atoms need it.
    order_.clear();
    if (mol_.atom(u).chirality != Chirality::kNone) {
      if (parent_[u] >= 0)
        order_.push_back(parent_[u]);
      if (mol_.total_hydrogens(u) > 0)
        order_.push_back(kImplicitHydrogen);
      order_.insert(order_.end(), rings.begin(), rings.end());
      const std::span<int> k = kids(u);
      order_.insert(order_.end(), k.begin(), k.end());
    }
    atom_token(u, order_, out);

    for (const int r: rings) {
      const int bi = mol_.find_bond(u, r);
      if (ring_digit_[bi] < 0) {
        const int d = allocate_digit();
        ring_digit_[bi] = d;
        out += bond_symbol(u, r);
        digit_text(d, out);
      } else {
        const int d = ring_digit_[bi];
        digit_text(d, out);
        digit_used_[d] = false;
      }
    }

    const std::span<int> kids = this->kids(u);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool last = k + 1 == kids.size();
      if (!last)
        out += '(';
      out += bond_symbol(u, kids[k]);
      emit(kids[k], out);
      if (!last)
        out += ')';
    }
  }

  const MolGraph &mol_;
  std::span<const int> ranks_;
  std::span<const bool> fixed_tag_;
  int n_;
  std::vector<int> offset_, nbrs_;
  std::vector<bool> visited_;
  std::vector<int> parent_;
  std::vector<int> kids_, kid_count_, rings_, ring_count_;
  std::vector<bool> ring_marked_;
  std::vector<int> ring_digit_;
  std::array<bool, 100> digit_used_ {};
  std::vector<int> order_;
};
}  // namespace

MolGraph parse_smiles(std::string_view text) {
  std::vector<std::string> warnings;
  return parse_smiles(text, warnings);
}

MolGraph parse_smiles(std::string_view text,
                      std::vector<std::string> &warnings) {
  return Parser(text, warnings).run();
}

std::string write_smiles(const MolGraph &mol, std::span<const int> ranks,
                         std::span<const bool> fixed_tag) {
  return Writer(mol, ranks, fixed_tag).run();
}

}  // namespace pepforge::chem
