#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clg {

using VariableId = std::uint32_t;

enum class VariableKind { discrete, continuous };

struct Variable {
  VariableId id = 0;
  std::string name;
  VariableKind kind = VariableKind::discrete;
  std::vector<std::string> states;  // empty for continuous variables

  bool is_discrete() const { return kind == VariableKind::discrete; }
  bool is_continuous() const { return kind == VariableKind::continuous; }
  std::size_t state_count() const { return states.size(); }
};

// P(head | tail). Flat table laid out row-major over [tail..., head] with
// the last variable fastest, so every consecutive block of state_count(head)
// entries is one conditional distribution.
struct CptSpec {
  VariableId head = 0;
  std::vector<VariableId> tail;
  std::vector<double> table;
};

// L(Y | I = i, Z = z) = N(alpha(i) + beta(i) z, sigma2(i)).
// Tables indexed by the configuration i of discrete_tail (row-major, last
// fastest); a single entry when discrete_tail is empty.
struct ClgSpec {
  VariableId head = 0;
  std::vector<VariableId> discrete_tail;
  std::vector<VariableId> continuous_tail;
  std::vector<double> alpha;
  std::vector<std::vector<double>> beta;  // beta[i].size() == continuous_tail.size()
  std::vector<double> sigma2;
};

// A CLG Bayesian network. Immutable once built; share freely between
// propagation sessions.
struct Network {
  std::vector<Variable> variables;             // variables[i].id == i
  std::vector<std::vector<VariableId>> parents;  // parents[i], in declaration order
  std::vector<CptSpec> cpts;
  std::vector<ClgSpec> densities;

  std::size_t size() const { return variables.size(); }
  const Variable& variable(VariableId id) const { return variables.at(id); }
  bool is_discrete(VariableId id) const { return variables.at(id).is_discrete(); }
  bool is_continuous(VariableId id) const { return variables.at(id).is_continuous(); }
  std::size_t state_count(VariableId id) const { return variables.at(id).state_count(); }

  std::optional<VariableId> find(const std::string& name) const;
  const CptSpec* cpt_of(VariableId id) const;
  const ClgSpec* density_of(VariableId id) const;

  std::vector<VariableId> discrete_ids() const;
  std::vector<VariableId> continuous_ids() const;
  std::vector<std::vector<VariableId>> children() const;

  // Parents-before-children order; ties broken by smallest id. Throws
  // DataError on a cycle.
  std::vector<VariableId> topological_order() const;
};

struct Evidence {
  std::map<VariableId, std::size_t> discrete;
  std::map<VariableId, double> continuous;

  bool empty() const { return discrete.empty() && continuous.empty(); }
  std::size_t size() const { return discrete.size() + continuous.size(); }
  bool contains(VariableId id) const {
    return discrete.contains(id) || continuous.contains(id);
  }
};

struct Violation {
  std::string code;  // e.g. "cpt-not-normalized"
  std::optional<VariableId> variable;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Lists every violated network invariant. An empty report means the network
// can be compiled and enumerated.
ValidationReport validate_network(const Network& net);

// Throws DataError naming the first problem when evidence refers to unknown
// variables, uses the wrong kind, or is out of range.
void check_evidence(const Network& net, const Evidence& evidence);

}  // namespace clg
