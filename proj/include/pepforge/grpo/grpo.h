//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace pepforge::grpo {

class GrpoError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kStdFloor = 1e-8;

// Group-relative advantages: (R - mean) / std with the population standard
// deviation. A group whose std falls below kStdFloor gets all zeros.
template <class Derived>
Eigen::VectorXd advantages(const Eigen::MatrixBase<Derived> &rewards) {
  static_assert(Derived::ColsAtCompileTime == 1
                    || Derived::RowsAtCompileTime == 1,
                "rewards must be a vector");
  const Eigen::Index g = rewards.size();
  if (g < 2)
    throw GrpoError("advantages need a group of at least two rewards");
  if (!rewards.allFinite())
    throw GrpoError("rewards must be finite");
  const Eigen::VectorXd r = rewards.template cast<double>();
  const Eigen::VectorXd centered = r.array() - r.mean();
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(g));
  if (sd < kStdFloor)
    return Eigen::VectorXd::Zero(g);
  return centered / sd;
}

struct GrpoConfig {
  double epsilon = 0.2;
  double beta = 1e-3;

  // Throws GrpoError unless 0 < epsilon < 1 and beta >= 0.
  void validate() const;
};

// Per-sequence token log-probabilities under the current, behaviour and
// reference policies, plus the group's rewards.
struct RolloutGroup {
  Eigen::VectorXd rewards;
  std::vector<Eigen::VectorXd> logp_theta;
  std::vector<Eigen::VectorXd> logp_old;
  std::vector<Eigen::VectorXd> logp_ref;

  // Throws GrpoError on misaligned lengths, empty sequences or non-finite
  // log-probabilities.
  void validate() const;
};

// min(r * A, clip(r, 1 - eps, 1 + eps) * A)
double clipped_term(double ratio, double advantage, double epsilon);

// exp(d) - d - 1 with d = logp_ref - logp_theta.
double kl_estimate(double logp_theta, double logp_ref);

// Mean over tokens, then over sequences, of clipped_term - beta * KL, with
// r = exp(logp_theta - logp_old).
double surrogate_objective(const RolloutGroup &group,
                           const Eigen::VectorXd &adv, const GrpoConfig &cfg);

// Mean per-sequence KL estimate (diagnostic).
double mean_kl(const RolloutGroup &group);

// Gradient of surrogate_objective with respect to each logp_theta entry.
// At a clip boundary the unclipped branch is used.
std::vector<Eigen::VectorXd> objective_gradient(const RolloutGroup &group,
                                                const Eigen::VectorXd &adv,
                                                const GrpoConfig &cfg);

}  // namespace pepforge::grpo
