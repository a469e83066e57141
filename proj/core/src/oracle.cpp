#include "clg/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "clg/error.hpp"

namespace clg {
namespace {

std::size_t position(const std::vector<VariableId>& v, VariableId x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw DataError("variable not in the joint mixture");
  return static_cast<std::size_t>(it - v.begin());
}

// Row-major index (last fastest) of the parents' states in `states`.
std::size_t parent_index(const Network& net, const std::vector<VariableId>& parents,
                         const std::vector<std::size_t>& states_by_id) {
  std::size_t index = 0;
  for (VariableId p : parents) index = index * net.state_count(p) + states_by_id[p];
  return index;
}

}  // namespace

JointMixture enumerate_joint(const Network& net, std::size_t max_configurations) {
  JointMixture joint;
  joint.discrete = net.discrete_ids();
  joint.continuous = net.continuous_ids();
  for (VariableId x : joint.discrete) joint.discrete_states.push_back(net.state_count(x));
  std::size_t total = 1;
  for (VariableId x : joint.discrete) {
    total *= net.state_count(x);
    if (total > max_configurations) throw DataError("discrete configuration space too large for the oracle");
  }
  std::vector<VariableId> cont_order;
  for (VariableId v : net.topological_order())
    if (net.is_continuous(v)) cont_order.push_back(v);

  const std::size_t m = joint.continuous.size();
  std::vector<std::size_t> states(net.size(), 0);
  std::vector<std::size_t> config(joint.discrete.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t k = joint.discrete.size(); k-- > 0;) {
      const std::size_t n = net.state_count(joint.discrete[k]);
      config[k] = rest % n;
      rest /= n;
      states[joint.discrete[k]] = config[k];
    }
    double weight = 1.0;
    for (const auto& cpt : net.cpts)
      weight *= cpt.table[parent_index(net, cpt.tail, states) * net.state_count(cpt.head) + states[cpt.head]];
    if (weight <= 0.0) continue;

    JointComponent c;
    c.configuration = config;
    c.weight = weight;
    c.mean.assign(m, 0.0);
    c.covariance.assign(m, std::vector<double>(m, 0.0));
    std::vector<std::size_t> done;
    for (VariableId y : cont_order) {
      const ClgSpec* spec = net.density_of(y);
      const std::size_t i = parent_index(net, spec->discrete_tail, states);
      const std::size_t py = position(joint.continuous, y);
      std::vector<std::size_t> pz;
      for (VariableId z : spec->continuous_tail) pz.push_back(position(joint.continuous, z));
      const auto& beta = spec->beta[i];
      double mean = spec->alpha[i];
      for (std::size_t k = 0; k < pz.size(); ++k) mean += beta[k] * c.mean[pz[k]];
      c.mean[py] = mean;
      for (std::size_t w : done) {
        double cov = 0.0;
        for (std::size_t k = 0; k < pz.size(); ++k) cov += beta[k] * c.covariance[pz[k]][w];
        c.covariance[py][w] = c.covariance[w][py] = cov;
      }
      double var = spec->sigma2[i];
      for (std::size_t k = 0; k < pz.size(); ++k)
        for (std::size_t l = 0; l < pz.size(); ++l) var += beta[k] * beta[l] * c.covariance[pz[k]][pz[l]];
      c.covariance[py][py] = var;
      done.push_back(py);
    }
    joint.components.push_back(std::move(c));
  }
  double sum = 0.0;
  for (const auto& c : joint.components) sum += c.weight;
  for (auto& c : joint.components) c.weight /= sum;
  return joint;
}

JointMixture condition(const JointMixture& joint, const Evidence& evidence) {
  JointMixture out;
  out.discrete = joint.discrete;
  out.discrete_states = joint.discrete_states;
  out.continuous = joint.continuous;
  for (const auto& c : joint.components) {
    bool keep = true;
    for (const auto& [x, s] : evidence.discrete)
      keep = keep && c.configuration[position(joint.discrete, x)] == s;
    if (keep) out.components.push_back(c);
  }
  for (const auto& [y, value] : evidence.continuous) {
    const std::size_t py = position(joint.continuous, y);
    for (auto& c : out.components) {
      const double v = c.covariance[py][py];
      if (!(v > 0.0)) throw DegenerateError("continuous evidence on a variable with zero variance is undefined");
      const double r = value - c.mean[py];
      c.weight *= normal_pdf(value, c.mean[py], v);
      const std::vector<double> k = c.covariance[py];
      for (std::size_t a = 0; a < k.size(); ++a) {
        c.mean[a] += k[a] * r / v;
        for (std::size_t b = 0; b < k.size(); ++b) c.covariance[a][b] -= k[a] * k[b] / v;
      }
      c.mean[py] = value;
      c.covariance[py][py] = 0.0;
    }
  }
  std::erase_if(out.components, [](const JointComponent& c) { return !(c.weight > 0.0); });
  double sum = 0.0;
  for (const auto& c : out.components) sum += c.weight;
  if (!(sum > 0.0)) throw DegenerateError("the evidence has probability zero");
  for (auto& c : out.components) c.weight /= sum;
  return out;
}

std::vector<double> oracle_discrete(const JointMixture& joint, VariableId x) {
  const std::size_t px = position(joint.discrete, x);
  std::vector<double> table(joint.discrete_states[px], 0.0);
  for (const auto& c : joint.components) table[c.configuration[px]] += c.weight;
  return table;
}

GaussianMixture oracle_continuous(const JointMixture& joint, VariableId y) {
  const std::size_t py = position(joint.continuous, y);
  GaussianMixture mixture;
  mixture.conditioning = joint.discrete;
  for (const auto& c : joint.components)
    mixture.components.push_back({c.weight, c.mean[py], std::max(0.0, c.covariance[py][py]), c.configuration});
  return mixture;
}

}  // namespace clg
