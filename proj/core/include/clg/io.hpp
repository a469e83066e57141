#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clg/algebra.hpp"
#include "clg/model.hpp"

namespace clg {

// JSON network files:
//   {"variables": [{"name", "kind": "discrete"|"continuous", "states"?}],
//    "edges": [[parent, child], ...],
//    "cpts": {child: [flat table]},
//    "densities": {child: {"alpha": [...], "beta": [[...], ...], "sigma2": [...]}}}
// Parent order is edge order. Tables are row-major over the parents, last
// fastest; a CPT has the head fastest of all.

// Schema-level parse. Throws DataError on malformed JSON, unknown names or
// wrong kinds; model-level problems are left to validate_network.
Network parse_network(const std::string& text);
// parse_network followed by validate_network; violations become a DataError.
Network load_network(const std::string& text);
Network load_network_file(const std::string& path);
std::string read_file(const std::string& path);

// Canonical form: variables in id order, edges grouped by child.
std::string serialize_network(const Network& net);

std::string format_violation(const Network& net, const Violation& v);

// "NAME=label" for discrete variables, "NAME=real" for continuous ones.
void add_evidence(const Network& net, Evidence& evidence, const std::string& item);
Evidence parse_evidence(const Network& net, const std::vector<std::string>& items);

struct QueryResult {
  std::vector<std::pair<VariableId, std::vector<double>>> discrete;
  std::vector<std::pair<VariableId, GaussianMixture>> continuous;
};

// JSON with every number printed to 12 significant digits. Mixtures are
// collapsed and sorted so that equal posteriors print identically.
std::string format_query_result(const Network& net, const QueryResult& result);

// "%.12g" with a fixed C locale.
std::string format_number(double x);

}  // namespace clg
