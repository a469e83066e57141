#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "clg/model.hpp"

namespace clg {

struct Clique {
  std::size_t id = 0;
  std::vector<VariableId> members;  // sorted
  std::optional<std::size_t> parent;
  std::optional<std::size_t> parent_separator;
  std::vector<std::size_t> children;

  bool contains(VariableId v) const;
};

struct Separator {
  std::size_t id = 0;
  std::vector<VariableId> members;  // sorted; intersection of the two cliques
  std::size_t parent_clique = 0;
  std::size_t child_clique = 0;
};

// Cliques are numbered breadth-first from the root (id 0), so every parent
// id is smaller than its children's ids. Separator k joins clique k + 1 to
// its parent.
struct StrongJunctionTree {
  std::vector<Clique> cliques;
  std::vector<Separator> separators;
  std::size_t root = 0;
  std::vector<VariableId> elimination_order;

  const Separator& separator_above(std::size_t clique) const;
  // Clique ids from `clique` up to and including the root.
  std::vector<std::size_t> path_to_root(std::size_t clique) const;
  // Smallest-id clique containing every variable of `vars`, if any.
  std::optional<std::size_t> covering_clique(const std::vector<VariableId>& vars) const;
};

// Strong triangulation: continuous variables are eliminated before discrete
// ones, min-fill inside each class with ties to the smallest id.
StrongJunctionTree compile(const Network& net);

bool verify_strong_property(const StrongJunctionTree& tree, const Network& net);

// Tree shape, separator contents and running intersection.
bool verify_structure(const StrongJunctionTree& tree, std::size_t variable_count);

struct TreeStats {
  std::vector<std::size_t> clique_sizes;  // s(C) per clique id
  std::size_t total = 0;
  std::size_t count = 0;
  std::size_t max = 0;
};

TreeStats tree_stats(const StrongJunctionTree& tree, const Network& net);

}  // namespace clg
