//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <string_view>

namespace pepforge::properties {

enum class Property { kLogD = 0, kMrt = 1, kSif = 2 };

inline constexpr std::array<Property, 3> kAllProperties = {
  Property::kLogD, Property::kMrt, Property::kSif
};

// Short key used in configs and JSON ("logd", "mrt", "sif").
std::string_view key(Property p);
// Display name ("LogD", "MRT", "SIF").
std::string_view display_name(Property p);

// LogD at pH 7 (unitless), rat MRT in hours, SIF half-life in hours.
struct PropertyTriple {
  double logd = 0;
  double mrt = 0;
  double sif = 0;

  double operator[](Property p) const {
    switch (p) {
    case Property::kLogD:
      return logd;
    case Property::kMrt:
      return mrt;
    default:
      return sif;
    }
  }

  bool operator==(const PropertyTriple &) const = default;
};

}  // namespace pepforge::properties
