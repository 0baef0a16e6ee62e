//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>

#include "pepforge/grpo/grpo.h"
#include "pepforge/util/rng.h"
#include "support/softmax_toy.h"

namespace pepforge::grpo {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x: v)
    out[i++] = x;
  return out;
}

TEST(Advantages, Examples) {
  const Eigen::VectorXd a = advantages(vec({ 1, 2, 3 }));
  EXPECT_NEAR(a[0], -1.224744871391589, 1e-12);
  EXPECT_NEAR(a[1], 0.0, 1e-15);
  EXPECT_NEAR(a[2], 1.224744871391589, 1e-12);
  EXPECT_TRUE(advantages(vec({ 0.4, 0.4, 0.4 })).isZero(0));
  const Eigen::VectorXd b = advantages(vec({ 0, 1 }));
  EXPECT_DOUBLE_EQ(b[0], -1.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
}

TEST(Advantages, Errors) {
  EXPECT_THROW(advantages(vec({ 1 })), GrpoError);
  EXPECT_THROW(advantages(vec({ 1, NAN })), GrpoError);
}

TEST(Advantages, ShiftScaleInvariantAndZeroSum) {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int g = 2 + static_cast<int>(rng.below(15));
    Eigen::VectorXd r(g);
    for (int i = 0; i < g; ++i)
      r[i] = rng.uniform();
    const double shift = rng.uniform() * 10 - 5;
    const double scale = 0.1 + rng.uniform() * 10;
    const Eigen::VectorXd a = advantages(r);
    const Eigen::VectorXd b = advantages(((r.array() + shift) * scale).matrix());
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(std::abs(a.sum()), 1e-9);
    // Population std of the advantages is one.
    EXPECT_NEAR(a.squaredNorm() / g, 1.0, 1e-9);
  }
}

TEST(ClippedTerm, Examples) {
  EXPECT_DOUBLE_EQ(clipped_term(2.0, 1.0, 0.2), 1.2);
  EXPECT_DOUBLE_EQ(clipped_term(0.5, -1.0, 0.2), -0.8);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.8 + 0.4 * rng.uniform();
    const double a = rng.uniform() * 4 - 2;
    EXPECT_DOUBLE_EQ(clipped_term(r, a, 0.2), r * a);
  }
}

TEST(Kl, Estimator) {
  EXPECT_EQ(kl_estimate(-1.3, -1.3), 0.0);
  EXPECT_NEAR(kl_estimate(0.0, 1.0), std::exp(1.0) - 2.0, 1e-15);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double a = -5 * rng.uniform();
    const double b = -5 * rng.uniform();
    if (a != b)
      EXPECT_GT(kl_estimate(a, b), 0.0);
  }
}

RolloutGroup identical_group(int g, int t, Rng &rng) {
  RolloutGroup grp;
  grp.rewards.resize(g);
  for (int i = 0; i < g; ++i) {
    grp.rewards[i] = rng.uniform();
    Eigen::VectorXd lp(t);
    for (int k = 0; k < t; ++k)
      lp[k] = -3 * rng.uniform();
    grp.logp_theta.push_back(lp);
    grp.logp_old.push_back(lp);
    grp.logp_ref.push_back(lp);
  }
  return grp;
}

TEST(Objective, IdentityPoliciesGiveMeanAdvantage) {
  Rng rng(6);
  const RolloutGroup grp = identical_group(5, 7, rng);
  const Eigen::VectorXd adv = advantages(grp.rewards);
  EXPECT_NEAR(surrogate_objective(grp, adv, GrpoConfig()), 0.0, 1e-12);
  EXPECT_EQ(mean_kl(grp), 0.0);
}

TEST(Objective, HandComputedGroup) {
  RolloutGroup grp;
  grp.logp_theta = { vec({ std::log(0.5), std::log(0.2) }), vec({ -1.0 }) };
  grp.logp_old = { vec({ std::log(0.25), std::log(0.2) }), vec({ -1.0 }) };
  grp.logp_ref = { vec({ std::log(0.5), std::log(0.2) }), vec({ -2.0 }) };
  const Eigen::VectorXd adv = vec({ 1.0, -1.0 });
  GrpoConfig cfg;
  cfg.beta = 0.1;
  // Sequence 1: r = (2, 1) -> (1.2 + 1) / 2, no KL.
  // Sequence 2: r = 1 -> -1, KL = e^-1 + 1 - 1.
  const double expected =
      ((1.2 + 1.0) / 2 + (-1.0 - 0.1 * std::exp(-1.0))) / 2;
  EXPECT_NEAR(surrogate_objective(grp, adv, cfg), expected, 1e-12);
}

TEST(Objective, Validation) {
  Rng rng(7);
  RolloutGroup grp = identical_group(3, 4, rng);
  const Eigen::VectorXd adv = advantages(grp.rewards);
  GrpoConfig bad;
  bad.epsilon = 1.5;
  EXPECT_THROW(surrogate_objective(grp, adv, bad), GrpoError);
  EXPECT_THROW(surrogate_objective(grp, vec({ 1, 2 }), GrpoConfig()),
               GrpoError);
  grp.logp_old[1] = vec({ 0, 0 });
  EXPECT_THROW(surrogate_objective(grp, adv, GrpoConfig()), GrpoError);
  grp = identical_group(3, 4, rng);
  grp.logp_ref[2][1] = INFINITY;
  EXPECT_THROW(surrogate_objective(grp, adv, GrpoConfig()), GrpoError);
}

TEST(Gradient, SoftmaxToyMatchesFiniteDifferences) {
  Rng rng(21);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const testing::SoftmaxToy toy = testing::random_toy(rng);
    if (toy.near_kink())
      continue;
    EXPECT_LT(toy.relative_error(), 1e-4) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

}  // namespace
}  // namespace pepforge::grpo
