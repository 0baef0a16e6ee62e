//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "pepforge/chem/fingerprint.h"
#include "pepforge/chem/smiles.h"

namespace pepforge::chem {
namespace {

Fingerprint fp(const char *smiles, int radius = kDefaultRadius) {
  return morgan_fingerprint(parse_smiles(smiles), radius,
                            kDefaultFingerprintBits);
}

Fingerprint from_bits(std::vector<std::uint32_t> bits) {
  return { std::move(bits), kDefaultFingerprintBits, kDefaultRadius };
}

TEST(Fingerprint, MethaneRadiusZeroSetsOneBit) {
  EXPECT_EQ(fp("C", 0).count(), 1u);
  // One identifier per atom per radius.
  EXPECT_EQ(fp("C", 2).count(), 3u);
}

TEST(Fingerprint, EthaneHasTwoEnvironments) {
  // Both carbons are equivalent: one atom id at r0, one at r1.
  EXPECT_EQ(fp("CC", 1).count(), 2u);
}

TEST(Fingerprint, OrderInvariant) {
  EXPECT_EQ(fp("OCC"), fp("CCO"));
  EXPECT_EQ(fp("N[C@@H](C)C(=O)O"), fp("C[C@H](N)C(=O)O"));
}

TEST(Fingerprint, SensitiveToElementAndStereo) {
  EXPECT_NE(fp("CCO"), fp("CCN"));
  EXPECT_NE(fp("N[C@@H](C)C(=O)O"), fp("N[C@H](C)C(=O)O"));
}

TEST(Fingerprint, RejectsBadArguments) {
  const MolGraph mol = parse_smiles("C");
  EXPECT_THROW(morgan_fingerprint(mol, -1, 2048), FingerprintError);
  EXPECT_THROW(morgan_fingerprint(mol, 2, 32), FingerprintError);
}

TEST(Tanimoto, HandComputedValues) {
  EXPECT_DOUBLE_EQ(tanimoto(from_bits({ 1, 2, 3 }), from_bits({ 2, 3, 4 })),
                   0.5);
  EXPECT_DOUBLE_EQ(tanimoto(from_bits({ 1 }), from_bits({ 2 })), 0.0);
  EXPECT_DOUBLE_EQ(tanimoto(from_bits({}), from_bits({})), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto(from_bits({ 5, 9 }), from_bits({ 5, 9 })), 1.0);
}

TEST(Tanimoto, SizeMismatchThrows) {
  Fingerprint a = from_bits({ 1 });
  Fingerprint b = from_bits({ 1 });
  b.n_bits = 1024;
  EXPECT_THROW(tanimoto(a, b), FingerprintError);
}

TEST(Tanimoto, SymmetricAndBounded) {
  const char *mols[] = { "CCO", "c1ccccc1", "NCC(=O)O", "O=C1CNC(=O)CN1",
                         "CC(C)C[C@@H](N)C(=O)O" };
  for (const char *x: mols) {
    for (const char *y: mols) {
      const double s = tanimoto(fp(x), fp(y));
      EXPECT_DOUBLE_EQ(s, tanimoto(fp(y), fp(x)));
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
      if (std::string(x) == y)
        EXPECT_DOUBLE_EQ(s, 1.0);
    }
  }
}

}  // namespace
}  // namespace pepforge::chem
