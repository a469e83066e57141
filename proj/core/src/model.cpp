#include "clg/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "clg/error.hpp"

namespace clg {

std::optional<VariableId> Network::find(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return v.id;
  return std::nullopt;
}

const CptSpec* Network::cpt_of(VariableId id) const {
  for (const auto& c : cpts)
    if (c.head == id) return &c;
  return nullptr;
}

const ClgSpec* Network::density_of(VariableId id) const {
  for (const auto& d : densities)
    if (d.head == id) return &d;
  return nullptr;
}

std::vector<VariableId> Network::discrete_ids() const {
  std::vector<VariableId> out;
  for (const auto& v : variables)
    if (v.is_discrete()) out.push_back(v.id);
  return out;
}

std::vector<VariableId> Network::continuous_ids() const {
  std::vector<VariableId> out;
  for (const auto& v : variables)
    if (v.is_continuous()) out.push_back(v.id);
  return out;
}

std::vector<std::vector<VariableId>> Network::children() const {
  std::vector<std::vector<VariableId>> out(size());
  for (VariableId c = 0; c < parents.size(); ++c)
    for (VariableId p : parents[c]) out.at(p).push_back(c);
  return out;
}

std::vector<VariableId> Network::topological_order() const {
  std::vector<std::size_t> indegree(size(), 0);
  for (VariableId c = 0; c < parents.size(); ++c) indegree[c] = parents[c].size();
  const auto kids = children();
  std::priority_queue<VariableId, std::vector<VariableId>, std::greater<>> ready;
  for (VariableId v = 0; v < size(); ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<VariableId> order;
  while (!ready.empty()) {
    const VariableId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VariableId c : kids[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() != size()) throw DataError("network graph has a cycle");
  return order;
}

namespace {

std::size_t configurations(const Network& net, const std::vector<VariableId>& vars) {
  std::size_t n = 1;
  for (VariableId v : vars) n *= net.state_count(v);
  return n;
}

bool same_members(std::vector<VariableId> a, std::vector<VariableId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  auto add = [&](std::string code, std::optional<VariableId> var, std::string msg) {
    report.push_back({std::move(code), var, std::move(msg)});
  };
  const std::size_t n = net.size();
  if (net.parents.size() != n) {
    add("parents-size", std::nullopt, "parent list count differs from variable count");
    return report;
  }

  std::set<std::string> names;
  for (VariableId i = 0; i < n; ++i) {
    const auto& v = net.variables[i];
    if (v.id != i) add("variable-id-mismatch", i, "variable ids must be contiguous from 0");
    if (!names.insert(v.name).second) add("duplicate-name", i, "duplicate variable name " + v.name);
    if (v.is_discrete()) {
      if (v.states.size() < 2) add("too-few-states", i, v.name + " needs at least 2 states");
      std::set<std::string> labels(v.states.begin(), v.states.end());
      if (labels.size() != v.states.size()) add("duplicate-state-label", i, v.name + " has duplicate state labels");
    }
  }

  bool structure_ok = true;
  for (VariableId c = 0; c < n; ++c) {
    std::set<VariableId> seen;
    for (VariableId p : net.parents[c]) {
      if (p >= n) {
        add("unknown-parent", c, "parent id out of range");
        structure_ok = false;
        continue;
      }
      if (p == c) add("self-loop", c, net.variables[c].name + " is its own parent");
      if (!seen.insert(p).second) add("duplicate-parent", c, "duplicate parent of " + net.variables[c].name);
      if (net.variables[c].is_discrete() && net.variables[p].is_continuous())
        add("discrete-with-continuous-parent", c,
            net.variables[c].name + " is discrete but has continuous parent " + net.variables[p].name);
    }
  }
  if (!structure_ok) return report;
  try {
    (void)net.topological_order();
  } catch (const DataError&) {
    add("cycle", std::nullopt, "graph is not acyclic");
  }

  std::vector<int> cpt_count(n, 0), density_count(n, 0);
  for (const auto& cpt : net.cpts) {
    if (cpt.head >= n) {
      add("unknown-head", std::nullopt, "cpt head out of range");
      continue;
    }
    const auto& head = net.variables[cpt.head];
    ++cpt_count[cpt.head];
    if (!head.is_discrete()) {
      add("cpt-on-continuous", cpt.head, head.name + " is continuous but has a cpt");
      continue;
    }
    if (!same_members(cpt.tail, net.parents[cpt.head]) ||
        std::any_of(cpt.tail.begin(), cpt.tail.end(), [&](VariableId t) { return t >= n; })) {
      add("cpt-parent-mismatch", cpt.head, "cpt tail of " + head.name + " differs from its parents");
      continue;
    }
    const std::size_t rows = configurations(net, cpt.tail);
    const std::size_t hs = head.state_count();
    if (cpt.table.size() != rows * hs) {
      add("cpt-size", cpt.head, "cpt of " + head.name + " has wrong length");
      continue;
    }
    bool negative = false, normalized = true;
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < hs; ++s) {
        const double p = cpt.table[r * hs + s];
        if (!(p >= 0.0) || !std::isfinite(p)) negative = true;
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) normalized = false;
    }
    if (negative) add("cpt-negative", cpt.head, "cpt of " + head.name + " has a negative or non-finite entry");
    if (!normalized) add("cpt-not-normalized", cpt.head, "cpt column of " + head.name + " does not sum to 1");
  }

  for (const auto& d : net.densities) {
    if (d.head >= n) {
      add("unknown-head", std::nullopt, "density head out of range");
      continue;
    }
    const auto& head = net.variables[d.head];
    ++density_count[d.head];
    if (!head.is_continuous()) {
      add("density-on-discrete", d.head, head.name + " is discrete but has a density");
      continue;
    }
    std::vector<VariableId> all = d.discrete_tail;
    all.insert(all.end(), d.continuous_tail.begin(), d.continuous_tail.end());
    bool kinds_ok = std::all_of(d.discrete_tail.begin(), d.discrete_tail.end(),
                                [&](VariableId t) { return t < n && net.variables[t].is_discrete(); }) &&
                    std::all_of(d.continuous_tail.begin(), d.continuous_tail.end(),
                                [&](VariableId t) { return t < n && net.variables[t].is_continuous(); });
    if (!kinds_ok || !same_members(all, net.parents[d.head])) {
      add("density-parent-mismatch", d.head, "density tail of " + head.name + " differs from its parents");
      continue;
    }
    const std::size_t rows = configurations(net, d.discrete_tail);
    if (d.alpha.size() != rows || d.sigma2.size() != rows || d.beta.size() != rows) {
      add("density-size", d.head, "density tables of " + head.name + " have wrong length");
      continue;
    }
    for (const auto& b : d.beta) {
      if (b.size() != d.continuous_tail.size()) {
        add("beta-arity-mismatch", d.head, "beta of " + head.name + " does not match its continuous parents");
        break;
      }
    }
    for (double s : d.sigma2) {
      if (!(s >= 0.0) || !std::isfinite(s)) {
        add("negative-variance", d.head, "sigma2 of " + head.name + " must be non-negative");
        break;
      }
    }
    bool finite = std::all_of(d.alpha.begin(), d.alpha.end(), [](double x) { return std::isfinite(x); });
    for (const auto& b : d.beta)
      finite = finite && std::all_of(b.begin(), b.end(), [](double x) { return std::isfinite(x); });
    if (!finite) add("non-finite", d.head, "density of " + head.name + " has non-finite coefficients");
  }

  for (VariableId i = 0; i < n; ++i) {
    const auto& v = net.variables[i];
    const int have = v.is_discrete() ? cpt_count[i] : density_count[i];
    if (have == 0) add(v.is_discrete() ? "missing-cpt" : "missing-density", i, v.name + " has no parameters");
    if (have > 1) add("duplicate-spec", i, v.name + " has more than one parameter table");
  }
  return report;
}

void check_evidence(const Network& net, const Evidence& evidence) {
  for (const auto& [id, state] : evidence.discrete) {
    if (id >= net.size()) throw DataError("evidence on unknown variable id " + std::to_string(id));
    const auto& v = net.variables[id];
    if (!v.is_discrete()) throw DataError("discrete evidence on continuous variable " + v.name);
    if (state >= v.state_count()) throw DataError("evidence state out of range for " + v.name);
  }
  for (const auto& [id, value] : evidence.continuous) {
    if (id >= net.size()) throw DataError("evidence on unknown variable id " + std::to_string(id));
    const auto& v = net.variables[id];
    if (!v.is_continuous()) throw DataError("continuous evidence on discrete variable " + v.name);
    if (!std::isfinite(value)) throw DataError("non-finite evidence value for " + v.name);
    if (evidence.discrete.contains(id)) throw DataError("variable " + v.name + " observed twice");
  }
}

}  // namespace clg
