#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clg/model.hpp"

namespace clg {

// An ordered set of discrete variables with their state counts. Tables over
// a domain are row-major with the last variable fastest.
struct Domain {
  std::vector<VariableId> vars;
  std::vector<std::size_t> states;

  std::size_t arity() const { return vars.size(); }
  std::size_t size() const;  // product of state counts, 1 when empty
  bool contains(VariableId v) const;
  std::size_t position(VariableId v) const;  // throws if absent
  std::size_t states_of(VariableId v) const { return states[position(v)]; }

  // Domain sorted by id, duplicates merged.
  static Domain sorted_union(const Domain& a, const Domain& b);
  Domain without(VariableId v) const;
  Domain sorted() const;

  bool operator==(const Domain&) const = default;
};

// For every configuration of `outer` (in table order) the index of the
// corresponding configuration of `inner`. Every variable of `inner` must be
// in `outer`.
std::vector<std::size_t> embed_indices(const Domain& outer, const Domain& inner);

// Decodes a flat table index into per-variable states.
std::vector<std::size_t> decode_index(const Domain& domain, std::size_t index);
std::size_t encode_index(const Domain& domain, std::span<const std::size_t> states);

}  // namespace clg
