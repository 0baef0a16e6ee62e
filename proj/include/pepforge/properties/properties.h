//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pepforge/chem/mol_graph.h"
#include "pepforge/peptide/peptide.h"
#include "pepforge/properties/triple.h"

namespace pepforge::properties {

class PredictorError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PropertyPredictor {
public:
  virtual ~PropertyPredictor() = default;
  // Implementations must be safe to call concurrently.
  virtual PropertyTriple predict(const chem::MolGraph &mol) const = 0;
};

// Graph descriptors feeding the surrogate.
struct Descriptors {
  int aliphatic_carbons = 0;  // non-aromatic carbon
  int aromatic_atoms = 0;
  int halogens = 0;
  int hbond_donors = 0;     // N or O bearing hydrogen
  int hbond_acceptors = 0;  // all N and O
  int n_methyl_amides = 0;  // amide N carrying a methyl
  int rings = 0;            // cyclomatic number
  int non_natural_atoms = 0;
};

// Signature of an atom for the non-natural proxy: an atom counts when its
// (element, degree, aromatic) combination never occurs in a cyclic peptide
// of the 20 natural amino acids.
Descriptors compute_descriptors(const chem::MolGraph &mol);

// Stand-in for a learned QSAR model. The values are not chemically
// validated; they only give a deterministic, structure-dependent landscape.
struct SurrogateCoefficients {
  // logd = c + aliphatic*C + aromatic*A + halogen*X - donor*D - acceptor*Q
  double logd_intercept = 2.2;
  double logd_aliphatic = 0.11;
  double logd_aromatic = 0.12;
  double logd_halogen = 0.5;
  double logd_donor = 0.25;
  double logd_acceptor = 0.1;
  // mrt = softplus(c + nme*M + logd*L + ring*R)
  double mrt_intercept = -2.1;
  double mrt_n_methyl = 0.5;
  double mrt_logd = 0.65;
  double mrt_ring = 0.04;
  // sif = softplus(c + nme*M + non_natural*U + logd*L)
  double sif_intercept = 0.6;
  double sif_n_methyl = 1.2;
  double sif_non_natural = 0.8;
  double sif_logd = 1.6;
};

double softplus(double x);

PropertyTriple surrogate_from_descriptors(const Descriptors &d,
                                          const SurrogateCoefficients &c);

class SurrogatePredictor: public PropertyPredictor {
public:
  explicit SurrogatePredictor(SurrogateCoefficients c = {}): coef_(c) { }
  PropertyTriple predict(const chem::MolGraph &mol) const override;
  const SurrogateCoefficients &coefficients() const { return coef_; }

private:
  SurrogateCoefficients coef_;
};

PropertyTriple surrogate_predict(const chem::MolGraph &mol,
                                 const SurrogateCoefficients &c = {});

// Runs the predictor and checks the result; non-finite values or negative
// times raise PredictorError.
PropertyTriple predict(const peptide::Peptide &p,
                       const PropertyPredictor &predictor);
PropertyTriple predict(const chem::MolGraph &mol,
                       const PropertyPredictor &predictor);

enum class Bucket { kLow = 0, kMedium = 1, kHigh = 2 };

std::string_view bucket_name(Bucket b);

struct Cuts {
  double lo;
  double hi;
};

struct BucketThresholds {
  Cuts logd { 3.0, 4.2 };
  Cuts mrt { 0.56, 1.63 };
  Cuts sif { 3.4, 10.1 };

  const Cuts &operator[](Property p) const;
  // Throws std::invalid_argument unless lo < hi for every property.
  void validate() const;
};

// low: x < lo; medium: lo <= x <= hi; high: x > hi.
Bucket bucketize(double x, Property p, const BucketThresholds &t = {});

enum class Arity { kNone = 0, kSingle = 1, kDual = 2, kTriple = 3 };

struct ImprovementLabel {
  std::array<bool, 3> improved {};  // indexed by Property

  Arity arity() const;
  bool contains(Property p) const {
    return improved[static_cast<int>(p)];
  }
  // "logd+sif" style key; "none" for the empty set.
  std::string group() const;
  bool operator==(const ImprovementLabel &) const = default;
};

// A property counts only when it moves into the high bucket.
ImprovementLabel categorize(const PropertyTriple &original,
                            const PropertyTriple &mutated,
                            const BucketThresholds &t = {});

// Throws std::invalid_argument when either annotation is missing.
ImprovementLabel categorize_pair(const peptide::PeptidePair &pair,
                                 const BucketThresholds &t = {});

struct SplitConfig {
  std::size_t cap_per_group = 4000;
  std::size_t rl_pool_size = 600;
  std::size_t test_size = 1880;
  // Share of distinct seed peptides held out for the test set.
  double test_seed_fraction = 0.2;
  std::vector<std::string> groups = { "logd+mrt", "logd+sif", "mrt+sif",
                                      "logd", "mrt", "sif" };
};

struct Splits {
  std::vector<std::size_t> sft;      // indices into the input
  std::vector<std::size_t> rl_pool;  // subset of sft
  std::vector<std::size_t> test;
  bool short_of_target = false;
  std::vector<std::string> warnings;
};

// `seed_keys[i]` identifies the original peptide of pair i (its canonical
// SMILES). Seeds are partitioned first, so sft and test never share one.
Splits build_splits(const std::vector<ImprovementLabel> &labels,
                    const std::vector<std::string> &seed_keys,
                    const SplitConfig &config, std::uint64_t rng_seed);

}  // namespace pepforge::properties
