#include "clg/domain.hpp"

#include <algorithm>
#include <numeric>

#include "clg/error.hpp"

namespace clg {

std::size_t Domain::size() const {
  return std::accumulate(states.begin(), states.end(), std::size_t{1},
                         std::multiplies<>());
}

bool Domain::contains(VariableId v) const {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

std::size_t Domain::position(VariableId v) const {
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end()) throw InternalError("variable not in domain");
  return static_cast<std::size_t>(it - vars.begin());
}

Domain Domain::sorted() const {
  std::vector<std::size_t> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
  Domain out;
  for (std::size_t i : order) {
    if (!out.vars.empty() && out.vars.back() == vars[i]) continue;
    out.vars.push_back(vars[i]);
    out.states.push_back(states[i]);
  }
  return out;
}

Domain Domain::sorted_union(const Domain& a, const Domain& b) {
  Domain joined = a;
  joined.vars.insert(joined.vars.end(), b.vars.begin(), b.vars.end());
  joined.states.insert(joined.states.end(), b.states.begin(), b.states.end());
  return joined.sorted();
}

Domain Domain::without(VariableId v) const {
  Domain out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == v) continue;
    out.vars.push_back(vars[i]);
    out.states.push_back(states[i]);
  }
  return out;
}

std::vector<std::size_t> embed_indices(const Domain& outer, const Domain& inner) {
  // stride of each outer variable inside the inner table (0 when absent)
  const std::size_t n = outer.arity();
  std::vector<std::size_t> inner_stride(n, 0);
  {
    std::size_t stride = 1;
    for (std::size_t k = inner.arity(); k-- > 0;) {
      const auto v = inner.vars[k];
      auto it = std::find(outer.vars.begin(), outer.vars.end(), v);
      if (it == outer.vars.end()) throw InternalError("embed_indices: inner not a subset");
      inner_stride[static_cast<std::size_t>(it - outer.vars.begin())] = stride;
      stride *= inner.states[k];
    }
  }
  const std::size_t total = outer.size();
  std::vector<std::size_t> result(total);
  std::vector<std::size_t> counter(n, 0);
  std::size_t index = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    result[flat] = index;
    for (std::size_t k = n; k-- > 0;) {
      ++counter[k];
      index += inner_stride[k];
      if (counter[k] < outer.states[k]) break;
      index -= inner_stride[k] * counter[k];
      counter[k] = 0;
    }
  }
  return result;
}

std::vector<std::size_t> decode_index(const Domain& domain, std::size_t index) {
  std::vector<std::size_t> out(domain.arity());
  for (std::size_t k = domain.arity(); k-- > 0;) {
    out[k] = index % domain.states[k];
    index /= domain.states[k];
  }
  return out;
}

std::size_t encode_index(const Domain& domain, std::span<const std::size_t> states) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < domain.arity(); ++k) index = index * domain.states[k] + states[k];
  return index;
}

}  // namespace clg
