#include "clg/jtree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "clg/error.hpp"

namespace clg {
namespace {

bool subset(const std::vector<VariableId>& a, const std::vector<VariableId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<VariableId> intersect(const std::vector<VariableId>& a, const std::vector<VariableId>& b) {
  std::vector<VariableId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t fill_in(const std::vector<std::set<VariableId>>& adj, VariableId v) {
  std::size_t missing = 0;
  for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
    for (auto b = std::next(a); b != adj[v].end(); ++b)
      if (!adj[*a].contains(*b)) ++missing;
  return missing;
}

}  // namespace

bool Clique::contains(VariableId v) const { return std::binary_search(members.begin(), members.end(), v); }

const Separator& StrongJunctionTree::separator_above(std::size_t clique) const {
  const auto& c = cliques.at(clique);
  if (!c.parent_separator) throw InternalError("root clique has no parent separator");
  return separators.at(*c.parent_separator);
}

std::vector<std::size_t> StrongJunctionTree::path_to_root(std::size_t clique) const {
  std::vector<std::size_t> path{clique};
  while (cliques.at(path.back()).parent) path.push_back(*cliques[path.back()].parent);
  return path;
}

std::optional<std::size_t> StrongJunctionTree::covering_clique(const std::vector<VariableId>& vars) const {
  std::vector<VariableId> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& c : cliques)
    if (subset(sorted, c.members)) return c.id;
  return std::nullopt;
}

StrongJunctionTree compile(const Network& net) {
  const std::size_t n = net.size();
  StrongJunctionTree tree;
  if (n == 0) return tree;

  std::vector<std::set<VariableId>> adj(n);
  for (VariableId v = 0; v < n; ++v) {
    const auto& pa = net.parents[v];
    for (std::size_t i = 0; i < pa.size(); ++i) {
      adj[v].insert(pa[i]);
      adj[pa[i]].insert(v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) {
        adj[pa[i]].insert(pa[j]);
        adj[pa[j]].insert(pa[i]);
      }
    }
  }

  // Elimination cliques in creation order.
  std::vector<std::vector<VariableId>> members;
  std::vector<VariableId> eliminated_at;  // step -> variable
  std::vector<std::size_t> step_of(n);
  std::vector<bool> gone(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    const bool continuous_left = std::any_of(
        net.variables.begin(), net.variables.end(), [&](const Variable& x) { return !gone[x.id] && x.is_continuous(); });
    std::optional<VariableId> best;
    std::size_t best_fill = 0;
    for (VariableId v = 0; v < n; ++v) {
      if (gone[v] || net.is_continuous(v) != continuous_left) continue;
      const std::size_t f = fill_in(adj, v);
      if (!best || f < best_fill) {
        best = v;
        best_fill = f;
      }
    }
    const VariableId v = *best;
    std::vector<VariableId> clique(adj[v].begin(), adj[v].end());
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    for (VariableId a : adj[v])
      for (VariableId b : adj[v])
        if (a != b) adj[a].insert(b);
    for (VariableId a : adj[v]) adj[a].erase(v);
    adj[v].clear();
    gone[v] = true;
    step_of[v] = step;
    eliminated_at.push_back(v);
    members.push_back(std::move(clique));
  }
  tree.elimination_order = eliminated_at;

  // Parent of clique t: clique of the earliest-eliminated other member.
  std::vector<std::optional<std::size_t>> parent(n);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::optional<std::size_t> p;
    for (VariableId u : members[t])
      if (u != eliminated_at[t] && (!p || step_of[u] < *p)) p = step_of[u];
    parent[t] = p;
    if (p) children[*p].push_back(t);
  }

  // Merge non-maximal cliques into a child that contains them.
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> merged_into(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(children[u].begin(), children[u].end());
    auto it = std::find_if(children[u].begin(), children[u].end(),
                           [&](std::size_t c) { return subset(members[u], members[c]); });
    if (it == children[u].end()) continue;
    const std::size_t heir = *it;
    alive[u] = false;
    merged_into[u] = heir;
    parent[heir] = parent[u];
    if (parent[u]) std::replace(children[*parent[u]].begin(), children[*parent[u]].end(), u, heir);
    for (std::size_t c : children[u])
      if (c != heir) {
        parent[c] = heir;
        children[heir].push_back(c);
      }
    children[u].clear();
  }

  // Root is the clique that absorbed the last elimination step; other
  // components hang below it through empty separators.
  std::size_t root = n - 1;
  while (!alive[root]) root = merged_into[root];
  for (std::size_t t = 0; t < n; ++t) {
    if (alive[t] && t != root && !parent[t]) {
      parent[t] = root;
      children[root].push_back(t);
    }
  }

  std::vector<std::size_t> new_id(n);
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t t = queue.front();
    queue.pop_front();
    Clique c;
    c.id = tree.cliques.size();
    new_id[t] = c.id;
    c.members = members[t];
    if (parent[t]) {
      c.parent = new_id[*parent[t]];
      Separator s;
      s.id = tree.separators.size();
      s.parent_clique = *c.parent;
      s.child_clique = c.id;
      s.members = intersect(c.members, tree.cliques[*c.parent].members);
      c.parent_separator = s.id;
      tree.cliques[*c.parent].children.push_back(c.id);
      tree.separators.push_back(std::move(s));
    }
    tree.cliques.push_back(std::move(c));
    auto kids = children[t];
    std::sort(kids.rbegin(), kids.rend());
    for (std::size_t k : kids) queue.push_back(k);
  }
  tree.root = 0;
  return tree;
}

bool verify_strong_property(const StrongJunctionTree& tree, const Network& net) {
  for (const auto& b : tree.cliques) {
    if (!b.parent) continue;
    const auto& a = tree.cliques.at(*b.parent);
    const auto sep = intersect(a.members, b.members);
    const bool sep_discrete = std::all_of(sep.begin(), sep.end(), [&](VariableId v) { return net.is_discrete(v); });
    const bool rest_continuous = std::all_of(b.members.begin(), b.members.end(), [&](VariableId v) {
      return a.contains(v) || net.is_continuous(v);
    });
    if (!sep_discrete && !rest_continuous) return false;
  }
  return true;
}

bool verify_structure(const StrongJunctionTree& tree, std::size_t variable_count) {
  const std::size_t m = tree.cliques.size();
  if (m == 0) return variable_count == 0;
  if (tree.separators.size() + 1 != m) return false;
  std::size_t roots = 0;
  for (const auto& c : tree.cliques) {
    if (!std::is_sorted(c.members.begin(), c.members.end())) return false;
    if (!c.parent) {
      ++roots;
      if (c.id != tree.root) return false;
      continue;
    }
    if (*c.parent >= m || !c.parent_separator) return false;
    const auto& s = tree.separators.at(*c.parent_separator);
    if (s.child_clique != c.id || s.parent_clique != *c.parent) return false;
    if (s.members != intersect(c.members, tree.cliques[*c.parent].members)) return false;
  }
  if (roots != 1) return false;
  // Connected: every clique reaches the root without revisiting.
  for (const auto& c : tree.cliques) {
    std::size_t cur = c.id;
    for (std::size_t hops = 0; tree.cliques[cur].parent; ++hops) {
      if (hops > m) return false;
      cur = *tree.cliques[cur].parent;
    }
  }
  // Running intersection: the cliques holding v form one subtree, i.e.
  // exactly one of them has a parent not holding v.
  for (VariableId v = 0; v < variable_count; ++v) {
    std::size_t tops = 0;
    for (const auto& c : tree.cliques)
      if (c.contains(v) && (!c.parent || !tree.cliques[*c.parent].contains(v))) ++tops;
    if (tops != 1) return false;
  }
  return true;
}

TreeStats tree_stats(const StrongJunctionTree& tree, const Network& net) {
  TreeStats stats;
  for (const auto& c : tree.cliques) {
    std::size_t s = 1;
    for (VariableId v : c.members)
      if (net.is_discrete(v)) s *= net.state_count(v);
    stats.clique_sizes.push_back(s);
    stats.total += s;
    stats.max = std::max(stats.max, s);
  }
  stats.count = tree.cliques.size();
  return stats;
}

}  // namespace clg
