//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/peptide/peptide.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/valence.h"
#include "pepforge/util/rng.h"

namespace pepforge::peptide {

using chem::MolGraph;

MolGraph assemble_cyclic(const std::vector<const Monomer *> &monomers) {
  const int n = static_cast<int>(monomers.size());
  if (n < 2)
    throw PeptideError("a cyclic peptide needs at least two monomers");

  MolGraph mol;
  std::vector<int> offset(n);
  for (int i = 0; i < n; ++i) {
    const MolGraph &m = monomers[i]->mol;
    offset[i] = mol.num_atoms();
    for (const chem::Atom &a: m.atoms())
      mol.add_atom(a);
    for (const chem::Bond &b: m.bonds())
      mol.add_bond(b.begin + offset[i], b.end + offset[i], b.order);
    for (int a = 0; a < m.num_atoms(); ++a) {
      if (m.stereo_order(a).empty())
        continue;
      std::vector<int> order;
      for (const int r: m.stereo_order(a))
        order.push_back(r == chem::kImplicitHydrogen ? r : r + offset[i]);
      mol.set_stereo_order(a + offset[i], std::move(order));
    }
  }

  std::vector<int> leaving;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const int c = offset[i] + monomers[i]->attach.c_attach;
    const int o = offset[i] + monomers[i]->attach.leaving;
    const int nn = offset[j] + monomers[j]->attach.n_attach;
    leaving.push_back(o);

    chem::Atom &na = mol.mutable_atom(nn);
    if (na.explicit_h) {
      if (*na.explicit_h == 0)
        throw PeptideError("monomer " + monomers[j]->id
                           + " has no free amine hydrogen");
      --*na.explicit_h;
    } else if (mol.implicit_hydrogens(nn) == 0) {
      throw PeptideError("monomer " + monomers[j]->id
                         + " has no free amine hydrogen");
    }
    if (na.chirality != chem::Chirality::kNone) {
      std::vector<int> order(mol.stereo_order(nn).begin(),
                             mol.stereo_order(nn).end());
      const auto h = std::find(order.begin(), order.end(),
                               chem::kImplicitHydrogen);
      if (h != order.end())
        *h = c;
      else
        order.push_back(c);
      mol.set_stereo_order(nn, std::move(order));
    }
    if (mol.atom(c).chirality != chem::Chirality::kNone) {
      std::vector<int> order(mol.stereo_order(c).begin(),
                             mol.stereo_order(c).end());
      std::replace(order.begin(), order.end(), o, nn);
      mol.set_stereo_order(c, std::move(order));
    }
    mol.add_bond(c, nn, chem::BondOrder::kSingle);
  }
  mol.prune_stereo();

  MolGraph out = mol.without_atoms(leaving);
  const chem::ValenceReport report = chem::validate_valence(out);
  if (!report.valid)
    throw PeptideError("assembled peptide fails valence: "
                       + report.problems.front().message);
  return out;
}

Peptide make_peptide(std::vector<std::string> ids,
                     const MonomerVocabulary &vocab) {
  std::vector<const Monomer *> monomers;
  for (const std::string &id: ids)
    monomers.push_back(&vocab.at(id));
  Peptide p;
  p.assembled = assemble_cyclic(monomers);
  p.canonical = chem::canonical_smiles(p.assembled);
  p.monomer_ids = std::move(ids);
  return p;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out(1);
  for (const char c: s) {
    if (c == sep)
      out.emplace_back();
    else
      out.back() += c;
  }
  return out;
}

bool valid_polymer_name(const std::string &name) {
  if (name.size() <= 7 || name.compare(0, 7, "PEPTIDE") != 0)
    return false;
  return std::all_of(name.begin() + 7, name.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

std::vector<std::string> parse_monomer_list(const std::string &body) {
  std::vector<std::string> ids;
  std::size_t i = 0;
  while (i < body.size()) {
    std::string id;
    if (body[i] == '[') {
      const std::size_t close = body.find(']', i);
      if (close == std::string::npos)
        throw HelmError("unclosed '[' in monomer list");
      id = body.substr(i + 1, close - i - 1);
      i = close + 1;
    } else if (std::isalpha(static_cast<unsigned char>(body[i]))) {
      id = body.substr(i, 1);
      ++i;
    } else {
      throw HelmError(std::string("unexpected '") + body[i]
                      + "' in monomer list");
    }
    if (id.empty())
      throw HelmError("empty monomer symbol");
    ids.push_back(id);
    if (i < body.size()) {
      if (body[i] != '.')
        throw HelmError("monomers must be separated by '.'");
      ++i;
      if (i == body.size())
        throw HelmError("trailing '.' in monomer list");
    }
  }
  return ids;
}

struct Endpoint {
  int index;
  std::string group;
};

Endpoint parse_endpoint(const std::string &s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos || colon == 0)
    throw HelmError("connection endpoint must be index:Rn, got " + s);
  const std::string idx = s.substr(0, colon);
  if (!std::all_of(idx.begin(), idx.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw HelmError("bad monomer index " + idx);
  return { std::stoi(idx), s.substr(colon + 1) };
}

}  // namespace

Peptide parse_helm(std::string_view text, const MonomerVocabulary &vocab) {
  const std::vector<std::string> sections = split(trim(text), '$');
  if (sections.size() == 1)
    throw HelmError("topology unsupported: no connection section");
  if (sections.size() != 5)
    throw HelmError("expected polymer, connection, group, annotation and "
                    "version sections");
  if (!sections[2].empty() || !sections[3].empty())
    throw HelmError("polymer groups and annotations are not supported");
  if (!sections[4].empty() && sections[4] != "V2.0")
    throw HelmError("unsupported HELM version " + sections[4]);

  const std::string &poly = sections[0];
  if (poly.find('|') != std::string::npos)
    throw HelmError("only a single polymer is supported");
  const std::size_t open = poly.find('{');
  if (open == std::string::npos || poly.back() != '}')
    throw HelmError("polymer must be written NAME{...}");
  const std::string name = poly.substr(0, open);
  if (!valid_polymer_name(name))
    throw HelmError("polymer name must be PEPTIDE<n>, got " + name);
  std::vector<std::string> ids =
      parse_monomer_list(poly.substr(open + 1, poly.size() - open - 2));
  const int n = static_cast<int>(ids.size());
  if (n < 2)
    throw HelmError("a cyclic peptide needs at least two monomers");

  const std::string &conn = sections[1];
  if (conn.empty())
    throw HelmError("topology unsupported: no connection section");
  if (conn.find('|') != std::string::npos)
    throw HelmError("only one connection is supported");
  const std::vector<std::string> parts = split(conn, ',');
  if (parts.size() != 3)
    throw HelmError("connection must be SOURCE,TARGET,a:Rx-b:Ry");
  if (parts[0] != name || parts[1] != name)
    throw HelmError("connection must join " + name + " to itself");
  const std::size_t dash = parts[2].find('-');
  if (dash == std::string::npos)
    throw HelmError("connection must be a:Rx-b:Ry");
  const Endpoint a = parse_endpoint(parts[2].substr(0, dash));
  const Endpoint b = parse_endpoint(parts[2].substr(dash + 1));
  const bool forward = a.index == n && a.group == "R2" && b.index == 1
                       && b.group == "R1";
  const bool backward = b.index == n && b.group == "R2" && a.index == 1
                        && a.group == "R1";
  if (!forward && !backward)
    throw HelmError("topology unsupported: connection is not "
                    + std::to_string(n) + ":R2-1:R1");

  for (const std::string &id: ids)
    if (!vocab.contains(id))
      throw HelmError("unknown monomer " + id);
  return make_peptide(std::move(ids), vocab);
}

std::string to_helm(const std::vector<std::string> &ids) {
  std::string out = "PEPTIDE1{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0)
      out += '.';
    if (ids[i].size() == 1)
      out += ids[i];
    else
      out += '[' + ids[i] + ']';
  }
  out += "}$PEPTIDE1,PEPTIDE1," + std::to_string(ids.size()) + ":R2-1:R1$$$";
  return out;
}

PeptidePair mutate(const Peptide &peptide, int position,
                   const Monomer &incoming, const MonomerVocabulary &vocab) {
  const int n = static_cast<int>(peptide.monomer_ids.size());
  if (position < 1 || position > n)
    throw PeptideError("position " + std::to_string(position)
                       + " outside 1.." + std::to_string(n));
  std::vector<const Monomer *> monomers;
  for (const std::string &id: peptide.monomer_ids)
    monomers.push_back(&vocab.at(id));
  monomers[position - 1] = &incoming;

  PeptidePair pair;
  pair.original = peptide;
  pair.position = position;
  pair.leaving = peptide.monomer_ids[position - 1];
  pair.incoming = incoming.id;
  pair.mutated.monomer_ids = peptide.monomer_ids;
  pair.mutated.monomer_ids[position - 1] = incoming.id;
  pair.mutated.assembled = assemble_cyclic(monomers);
  pair.mutated.canonical = chem::canonical_smiles(pair.mutated.assembled);
  return pair;
}

std::vector<PeptidePair> augment(const Peptide &seed,
                                 const MonomerVocabulary &vocab, int k,
                                 std::uint64_t rng_seed) {
  std::vector<PeptidePair> out;
  const int n = static_cast<int>(seed.monomer_ids.size());
  if (k < 1 || vocab.empty() || n < 2)
    return out;

  Rng rng(rng_seed);
  std::set<std::string> seen { seed.canonical };
  for (int draw = 0; draw < k; ++draw) {
    for (int attempt = 0; attempt < kAugmentRetries; ++attempt) {
      const int position = 2 + static_cast<int>(rng.below(n - 1));
      const Monomer &incoming = vocab.at(rng.below(vocab.size()));
      if (incoming.id == seed.monomer_ids[position - 1])
        break;
      try {
        PeptidePair pair = mutate(seed, position, incoming, vocab);
        if (seen.insert(pair.mutated.canonical).second)
          out.push_back(std::move(pair));
        break;
      } catch (const PeptideError &) {
        continue;
      }
    }
  }
  return out;
}

}  // namespace pepforge::peptide
