#pragma once

#include <cstddef>
#include <vector>

#include "clg/algebra.hpp"
#include "clg/model.hpp"

namespace clg {

// Brute-force reference: one multivariate Gaussian over all continuous
// variables for every configuration of all discrete variables.
struct JointComponent {
  std::vector<std::size_t> configuration;  // states of JointMixture::discrete
  double weight = 0.0;
  std::vector<double> mean;               // over JointMixture::continuous
  std::vector<std::vector<double>> covariance;
};

struct JointMixture {
  std::vector<VariableId> discrete;
  std::vector<std::size_t> discrete_states;
  std::vector<VariableId> continuous;
  std::vector<JointComponent> components;  // zero-weight configurations dropped
};

// Throws DataError when the discrete configuration space exceeds the guard.
JointMixture enumerate_joint(const Network& net, std::size_t max_configurations = 1'000'000);

// Filters on discrete evidence, then conditions every component on each
// continuous observation in turn and reweights by its likelihood. Throws
// DegenerateError when the evidence has probability zero.
JointMixture condition(const JointMixture& joint, const Evidence& evidence);

std::vector<double> oracle_discrete(const JointMixture& joint, VariableId x);
// One component per discrete configuration.
GaussianMixture oracle_continuous(const JointMixture& joint, VariableId y);

}  // namespace clg
