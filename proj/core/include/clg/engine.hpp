#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "clg/algebra.hpp"
#include "clg/jtree.hpp"
#include "clg/model.hpp"

namespace clg {

enum class Phase { initialized, pre_collected, evidence_inserted, propagated };

enum class TraceKind { collect_to_boundary, push, insert_evidence, collect_to_root, distribute };

// One scheduling step. Messages and pushes go from clique `from` to clique
// `to`; evidence insertion has from == to.
struct TraceEvent {
  TraceKind kind;
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<VariableId> variable;
};

// Where a discrete marginal can be read from.
struct MarginalSource {
  bool separator = false;
  std::size_t id = 0;  // clique id, or the child clique id of the separator
  std::size_t size = 0;  // s(.) of the source
};

// Lazy propagation state over one strong junction tree. Clique potentials
// are the physical store; messages are derived from them. Up messages are
// indexed by the sending (child) clique, down messages by the receiving
// child clique. PUSH may extend clique and separator members.
class TreeState {
 public:
  // Places every CPT and density in the smallest-id clique holding its
  // family and applies the discrete part of `evidence`.
  static TreeState initialize(const StrongJunctionTree& tree, const Network& net, const Evidence& evidence);

  void collect_to_boundary();
  void insert_continuous_evidence(VariableId y, double value);
  void collect_to_root();
  void distribute();

  // Moves the density of `y` into a boundary clique and returns its id.
  // With `to_reached`, continues until a clique holding a down message.
  std::size_t push(VariableId y, bool to_reached = false);

  // Recomputes and stores the message from `clique` to its parent.
  const Potential& message_to_parent(std::size_t clique);

  std::vector<MarginalSource> discrete_sources(VariableId x) const;
  std::vector<double> marginal_from(const MarginalSource& source, VariableId x) const;
  std::vector<double> query_discrete(VariableId x) const;
  // Posterior mixture of `y`; PUSH rearrangements are rolled back.
  GaussianMixture query_continuous(VariableId y);

  Phase phase() const { return phase_; }
  const Network& network() const { return *net_; }
  const StrongJunctionTree& tree() const { return tree_; }
  const Evidence& evidence() const { return evidence_; }
  const Potential& potential(std::size_t clique) const { return potentials_.at(clique); }
  const std::optional<Potential>& up_message(std::size_t child) const { return up_.at(child); }
  const std::optional<Potential>& down_message(std::size_t child) const { return down_.at(child); }
  const std::set<std::size_t>& boundary() const { return boundary_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const Ranking& ranking() const { return rank_; }

  bool is_boundary(std::size_t clique) const;

 private:
  struct Snapshot {
    StrongJunctionTree tree;
    std::vector<Potential> potentials;
    std::vector<std::optional<Potential>> up;
    std::vector<std::optional<Potential>> down;
    std::set<std::size_t> boundary;
    std::vector<VariableId> order;
    Ranking rank;
    std::size_t trace_size;
  };

  TreeState(const StrongJunctionTree& tree, const Network& net);

  bool uninstantiated_continuous(VariableId v) const;
  bool has_uninstantiated_continuous(const std::vector<VariableId>& members) const;
  void recompute_boundary();
  void mark_changed(std::size_t clique);
  void ensure_up(std::size_t clique, TraceKind kind);
  Potential inbound(std::size_t clique, std::optional<std::size_t> except_child) const;
  std::optional<std::size_t> holder_of(VariableId v) const;
  Density take_density(std::size_t clique, VariableId v);
  Density& density_in(std::size_t clique, VariableId v);
  void extend(std::size_t clique, const Density& d);
  void ensure_in(VariableId v, std::size_t clique);
  void eliminate_from_tail(std::size_t clique, VariableId y, VariableId z);
  void move_after(VariableId z, VariableId anchor);
  void require(std::initializer_list<Phase> allowed, const char* what) const;
  Snapshot snapshot() const;
  void restore(Snapshot s);

  const Network* net_;
  StrongJunctionTree tree_;
  std::vector<Potential> potentials_;
  std::vector<std::optional<Potential>> up_;
  std::vector<std::optional<Potential>> down_;
  std::set<std::size_t> boundary_;
  Evidence evidence_;
  Phase phase_ = Phase::initialized;
  bool root_collected_ = false;
  std::vector<VariableId> order_;
  Ranking rank_;
  std::vector<TraceEvent> trace_;
};

// Initialization, to-boundary COLLECT, continuous evidence in ascending id,
// then COLLECT to the root and DISTRIBUTE.
TreeState propagate(const StrongJunctionTree& tree, const Network& net, const Evidence& evidence);

}  // namespace clg
