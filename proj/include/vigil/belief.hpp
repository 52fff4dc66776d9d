#pragma once

#include <stdexcept>

namespace vigil {

// Two-point posterior over the human's awareness of the robot.
struct Belief {
  double p_unaware = 0.5;
  double p_aware = 0.5;
};

// One Bayes step given the likelihood of the observed human action under each
// hypothesis. Both likelihoods exactly zero means the observation is
// impossible under the model; that is a configuration bug, not a state worth
// continuing from.
inline Belief update_belief(const Belief& prior, double lik_unaware, double lik_aware) {
  const double num_u = prior.p_unaware * lik_unaware;
  const double num_a = prior.p_aware * lik_aware;
  const double z = num_u + num_a;
  if (z == 0.0) throw std::domain_error("belief update: observation has zero likelihood under both hypotheses");
  return Belief{num_u / z, num_a / z};
}

}  // namespace vigil
