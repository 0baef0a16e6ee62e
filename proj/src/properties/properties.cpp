//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/properties/properties.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "pepforge/util/rng.h"

namespace pepforge::properties {

using chem::Element;
using chem::MolGraph;

std::string_view key(Property p) {
  switch (p) {
  case Property::kLogD:
    return "logd";
  case Property::kMrt:
    return "mrt";
  default:
    return "sif";
  }
}

std::string_view display_name(Property p) {
  switch (p) {
  case Property::kLogD:
    return "LogD";
  case Property::kMrt:
    return "MRT";
  default:
    return "SIF";
  }
}

namespace {

using Signature = std::tuple<Element, int, bool>;

Signature signature(const MolGraph &mol, int i) {
  return { mol.atom(i).element, mol.degree(i), mol.atom(i).aromatic };
}

const std::set<Signature> &natural_signatures() {
  static const std::set<Signature> sigs = [] {
    static const char *const kNatural[] = {
      "N[C@@H](C)C(=O)O",          "N[C@@H](CCCNC(=N)N)C(=O)O",
      "N[C@@H](CC(N)=O)C(=O)O",    "N[C@@H](CC(=O)O)C(=O)O",
      "N[C@@H](CS)C(=O)O",         "N[C@@H](CCC(=O)O)C(=O)O",
      "N[C@@H](CCC(N)=O)C(=O)O",   "NCC(=O)O",
      "N[C@@H](Cc1c[nH]cn1)C(=O)O", "N[C@@H]([C@@H](C)CC)C(=O)O",
      "N[C@@H](CC(C)C)C(=O)O",     "N[C@@H](CCCCN)C(=O)O",
      "N[C@@H](CCSC)C(=O)O",       "N[C@@H](Cc1ccccc1)C(=O)O",
      "N1[C@@H](CCC1)C(=O)O",      "N[C@@H](CO)C(=O)O",
      "N[C@@H]([C@@H](C)O)C(=O)O", "N[C@@H](Cc1c[nH]c2ccccc12)C(=O)O",
      "N[C@@H](Cc1ccc(O)cc1)C(=O)O", "N[C@@H](C(C)C)C(=O)O",
    };
    std::vector<peptide::Monomer> monomers;
    for (const char *s: kNatural)
      monomers.push_back(peptide::make_monomer(s, s, true));
    std::vector<const peptide::Monomer *> ptrs;
    for (const auto &m: monomers)
      ptrs.push_back(&m);
    const MolGraph cyclo = peptide::assemble_cyclic(ptrs);
    std::set<Signature> out;
    for (int i = 0; i < cyclo.num_atoms(); ++i)
      out.insert(signature(cyclo, i));
    return out;
  }();
  return sigs;
}

bool is_carbonyl_carbon(const MolGraph &mol, int c) {
  if (mol.atom(c).element != Element::kC)
    return false;
  for (const int bi: mol.incident_bonds(c)) {
    const chem::Bond &b = mol.bond(bi);
    if (b.order == chem::BondOrder::kDouble
        && mol.atom(b.other(c)).element == Element::kO)
      return true;
  }
  return false;
}

bool is_methyl(const MolGraph &mol, int c) {
  return mol.atom(c).element == Element::kC && !mol.atom(c).aromatic
         && mol.degree(c) == 1 && mol.total_hydrogens(c) == 3;
}

}  // namespace

Descriptors compute_descriptors(const MolGraph &mol) {
  Descriptors d;
  const std::set<Signature> &natural = natural_signatures();
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const chem::Atom &a = mol.atom(i);
    if (a.element == Element::kC && !a.aromatic)
      ++d.aliphatic_carbons;
    if (a.aromatic)
      ++d.aromatic_atoms;
    if (chem::is_halogen(a.element))
      ++d.halogens;
    if (a.element == Element::kN || a.element == Element::kO) {
      ++d.hbond_acceptors;
      if (mol.total_hydrogens(i) > 0)
        ++d.hbond_donors;
    }
    if (a.element == Element::kN && !a.aromatic) {
      bool amide = false, methyl = false;
      for (const int v: mol.neighbors(i)) {
        amide = amide || is_carbonyl_carbon(mol, v);
        methyl = methyl || is_methyl(mol, v);
      }
      if (amide && methyl)
        ++d.n_methyl_amides;
    }
    if (!natural.count(signature(mol, i)))
      ++d.non_natural_atoms;
  }
  d.rings = mol.ring_count();
  return d;
}

double softplus(double x) {
  // log(1 + e^x) without overflow for large x.
  return x > 30 ? x : std::log1p(std::exp(x));
}

PropertyTriple surrogate_from_descriptors(const Descriptors &d,
                                          const SurrogateCoefficients &c) {
  PropertyTriple t;
  t.logd = c.logd_intercept + c.logd_aliphatic * d.aliphatic_carbons
           + c.logd_aromatic * d.aromatic_atoms
           + c.logd_halogen * d.halogens - c.logd_donor * d.hbond_donors
           - c.logd_acceptor * d.hbond_acceptors;
  t.mrt = softplus(c.mrt_intercept + c.mrt_n_methyl * d.n_methyl_amides
                   + c.mrt_logd * t.logd + c.mrt_ring * d.rings);
  t.sif = softplus(c.sif_intercept + c.sif_n_methyl * d.n_methyl_amides
                   + c.sif_non_natural * d.non_natural_atoms
                   + c.sif_logd * t.logd);
  return t;
}

PropertyTriple SurrogatePredictor::predict(const MolGraph &mol) const {
  return surrogate_from_descriptors(compute_descriptors(mol), coef_);
}

PropertyTriple surrogate_predict(const MolGraph &mol,
                                 const SurrogateCoefficients &c) {
  return SurrogatePredictor(c).predict(mol);
}

PropertyTriple predict(const MolGraph &mol,
                       const PropertyPredictor &predictor) {
  const PropertyTriple t = predictor.predict(mol);
  for (const Property p: kAllProperties)
    if (!std::isfinite(t[p]))
      throw PredictorError(std::string("predictor returned non-finite ")
                           + std::string(display_name(p)));
  if (t.mrt < 0 || t.sif < 0)
    throw PredictorError("predictor returned a negative time");
  return t;
}

PropertyTriple predict(const peptide::Peptide &p,
                       const PropertyPredictor &predictor) {
  return predict(p.assembled, predictor);
}

std::string_view bucket_name(Bucket b) {
  switch (b) {
  case Bucket::kLow:
    return "low";
  case Bucket::kMedium:
    return "medium";
  default:
    return "high";
  }
}

const Cuts &BucketThresholds::operator[](Property p) const {
  switch (p) {
  case Property::kLogD:
    return logd;
  case Property::kMrt:
    return mrt;
  default:
    return sif;
  }
}

void BucketThresholds::validate() const {
  for (const Property p: kAllProperties) {
    const Cuts &c = (*this)[p];
    if (!(c.lo < c.hi))
      throw std::invalid_argument(std::string(key(p))
                                  + " thresholds need lo < hi");
  }
}

Bucket bucketize(double x, Property p, const BucketThresholds &t) {
  const Cuts &c = t[p];
  if (x < c.lo)
    return Bucket::kLow;
  if (x > c.hi)
    return Bucket::kHigh;
  return Bucket::kMedium;
}

Arity ImprovementLabel::arity() const {
  return static_cast<Arity>(std::count(improved.begin(), improved.end(),
                                       true));
}

std::string ImprovementLabel::group() const {
  std::string out;
  for (const Property p: kAllProperties) {
    if (!contains(p))
      continue;
    if (!out.empty())
      out += '+';
    out += key(p);
  }
  return out.empty() ? "none" : out;
}

ImprovementLabel categorize(const PropertyTriple &original,
                            const PropertyTriple &mutated,
                            const BucketThresholds &t) {
  ImprovementLabel label;
  for (const Property p: kAllProperties) {
    label.improved[static_cast<int>(p)] =
        bucketize(mutated[p], p, t) == Bucket::kHigh
        && bucketize(original[p], p, t) != Bucket::kHigh;
  }
  return label;
}

ImprovementLabel categorize_pair(const peptide::PeptidePair &pair,
                                 const BucketThresholds &t) {
  if (!pair.original_props || !pair.mutated_props)
    throw std::invalid_argument("pair is missing property annotations");
  return categorize(*pair.original_props, *pair.mutated_props, t);
}

Splits build_splits(const std::vector<ImprovementLabel> &labels,
                    const std::vector<std::string> &seed_keys,
                    const SplitConfig &config, std::uint64_t rng_seed) {
  if (labels.size() != seed_keys.size())
    throw std::invalid_argument("labels and seed keys differ in length");
  if (config.test_seed_fraction < 0 || config.test_seed_fraction > 1)
    throw std::invalid_argument("test_seed_fraction must lie in [0, 1]");

  Rng rng(rng_seed);
  Splits out;

  std::vector<std::string> seeds(seed_keys.begin(), seed_keys.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  rng.shuffle(std::span<std::string>(seeds));
  std::size_t n_test = static_cast<std::size_t>(
      std::llround(config.test_seed_fraction * seeds.size()));
  if (config.test_seed_fraction > 0 && n_test == 0 && seeds.size() > 1)
    n_test = 1;
  const std::set<std::string> test_seeds(seeds.begin(),
                                         seeds.begin() + n_test);

  std::vector<std::size_t> triples;
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::size_t> test_pool;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool held_out = test_seeds.count(seed_keys[i]) > 0;
    const Arity arity = labels[i].arity();
    if (held_out) {
      if (arity != Arity::kTriple)
        test_pool.push_back(i);
    } else if (arity == Arity::kTriple) {
      triples.push_back(i);
    } else if (arity != Arity::kNone) {
      groups[labels[i].group()].push_back(i);
    }
  }

  out.sft = triples;
  for (const std::string &g: config.groups) {
    std::vector<std::size_t> members = groups[g];
    rng.shuffle(std::span<std::size_t>(members));
    if (members.size() > config.cap_per_group)
      members.resize(config.cap_per_group);
    out.sft.insert(out.sft.end(), members.begin(), members.end());
  }

  out.rl_pool = out.sft;
  rng.shuffle(std::span<std::size_t>(out.rl_pool));
  if (out.rl_pool.size() > config.rl_pool_size)
    out.rl_pool.resize(config.rl_pool_size);

  out.test = test_pool;
  rng.shuffle(std::span<std::size_t>(out.test));
  if (out.test.size() > config.test_size)
    out.test.resize(config.test_size);

  if (triples.empty())
    out.warnings.push_back("no triple-improvement pairs; sft holds sampled "
                           "groups only");
  if (out.rl_pool.size() < config.rl_pool_size) {
    out.short_of_target = true;
    out.warnings.push_back("rl_pool has " + std::to_string(out.rl_pool.size())
                           + " of " + std::to_string(config.rl_pool_size));
  }
  if (out.test.size() < config.test_size) {
    out.short_of_target = true;
    out.warnings.push_back("test has " + std::to_string(out.test.size())
                           + " of " + std::to_string(config.test_size));
  }
  return out;
}

}  // namespace pepforge::properties
