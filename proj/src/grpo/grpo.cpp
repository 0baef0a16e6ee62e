//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/grpo/grpo.h"

#include <algorithm>
#include <string>

namespace pepforge::grpo {

void GrpoConfig::validate() const {
  if (!(epsilon > 0 && epsilon < 1))
    throw GrpoError("epsilon must lie in (0, 1)");
  if (!(beta >= 0))
    throw GrpoError("beta must be non-negative");
}

void RolloutGroup::validate() const {
  const std::size_t g = logp_theta.size();
  if (g < 2)
    throw GrpoError("a rollout group needs at least two sequences");
  if (logp_old.size() != g || logp_ref.size() != g)
    throw GrpoError("policies disagree on the number of sequences");
  if (rewards.size() != 0 && static_cast<std::size_t>(rewards.size()) != g)
    throw GrpoError("rewards and sequences differ in count");
  for (std::size_t i = 0; i < g; ++i) {
    const Eigen::Index t = logp_theta[i].size();
    if (t == 0)
      throw GrpoError("sequence " + std::to_string(i) + " is empty");
    if (logp_old[i].size() != t || logp_ref[i].size() != t)
      throw GrpoError("sequence " + std::to_string(i)
                      + " has misaligned token log-probs");
    if (!logp_theta[i].allFinite() || !logp_old[i].allFinite()
        || !logp_ref[i].allFinite())
      throw GrpoError("sequence " + std::to_string(i)
                      + " has non-finite log-probs");
  }
}

double clipped_term(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_estimate(double logp_theta, double logp_ref) {
  const double d = logp_ref - logp_theta;
  // expm1 keeps precision near d = 0.
  return std::expm1(d) - d;
}

namespace {
void check(const RolloutGroup &group, const Eigen::VectorXd &adv,
           const GrpoConfig &cfg) {
  cfg.validate();
  group.validate();
  if (static_cast<std::size_t>(adv.size()) != group.logp_theta.size())
    throw GrpoError("advantages and sequences differ in count");
}
}  // namespace

double surrogate_objective(const RolloutGroup &group,
                           const Eigen::VectorXd &adv, const GrpoConfig &cfg) {
  check(group, adv, cfg);
  const std::size_t g = group.logp_theta.size();
  double total = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const Eigen::VectorXd &th = group.logp_theta[i];
    const Eigen::ArrayXd ratio = (th - group.logp_old[i]).array().exp();
    double seq = 0;
    for (Eigen::Index t = 0; t < th.size(); ++t)
      seq += clipped_term(ratio[t], adv[i], cfg.epsilon)
             - cfg.beta * kl_estimate(th[t], group.logp_ref[i][t]);
    total += seq / static_cast<double>(th.size());
  }
  return total / static_cast<double>(g);
}

double mean_kl(const RolloutGroup &group) {
  group.validate();
  double total = 0;
  for (std::size_t i = 0; i < group.logp_theta.size(); ++i) {
    double seq = 0;
    for (Eigen::Index t = 0; t < group.logp_theta[i].size(); ++t)
      seq += kl_estimate(group.logp_theta[i][t], group.logp_ref[i][t]);
    total += seq / static_cast<double>(group.logp_theta[i].size());
  }
  return total / static_cast<double>(group.logp_theta.size());
}

std::vector<Eigen::VectorXd> objective_gradient(const RolloutGroup &group,
                                                const Eigen::VectorXd &adv,
                                                const GrpoConfig &cfg) {
  check(group, adv, cfg);
  const std::size_t g = group.logp_theta.size();
  std::vector<Eigen::VectorXd> grad(g);
  for (std::size_t i = 0; i < g; ++i) {
    const Eigen::VectorXd &th = group.logp_theta[i];
    const double scale = 1.0 / (static_cast<double>(th.size()) * g);
    grad[i].resize(th.size());
    for (Eigen::Index t = 0; t < th.size(); ++t) {
      const double r = std::exp(th[t] - group.logp_old[i][t]);
      const double a = adv[i];
      const double clipped =
          std::clamp(r, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon);
      // The clipped branch is flat in theta.
      const double policy = r * a <= clipped * a ? r * a : 0.0;
      const double d = group.logp_ref[i][t] - th[t];
      grad[i][t] = scale * (policy + cfg.beta * std::expm1(d));
    }
  }
  return grad;
}

}  // namespace pepforge::grpo
