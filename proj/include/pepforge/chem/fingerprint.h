//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pepforge/chem/mol_graph.h"

namespace pepforge::chem {

inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultFingerprintBits = 2048;

struct Fingerprint {
  std::vector<std::uint32_t> bits;  // sorted, unique, each < n_bits
  int n_bits = kDefaultFingerprintBits;
  int radius = kDefaultRadius;

  bool operator==(const Fingerprint &) const = default;
  std::size_t count() const { return bits.size(); }
};

class FingerprintError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Circular (ECFP-style) environments up to `radius` bonds, each hashed into
// [0, n_bits). Throws FingerprintError for radius < 0 or n_bits < 64.
Fingerprint morgan_fingerprint(const MolGraph &mol,
                               int radius = kDefaultRadius,
                               int n_bits = kDefaultFingerprintBits);

// |a & b| / |a | b|; 1.0 when both are empty. Throws FingerprintError on
// mismatched sizes.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace pepforge::chem
