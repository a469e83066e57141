#include "clg/engine.hpp"

#include <algorithm>
#include <functional>

#include "clg/error.hpp"

namespace clg {
namespace {

void add_members(std::vector<VariableId>& members, const Density& d) {
  members.push_back(d.head);
  members.insert(members.end(), d.discrete_tail.vars.begin(), d.discrete_tail.vars.end());
  members.insert(members.end(), d.continuous_tail.begin(), d.continuous_tail.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

std::set<VariableId> as_set(const std::vector<VariableId>& v) { return {v.begin(), v.end()}; }

void append(Potential& into, const Potential& from) {
  into.factors.insert(into.factors.end(), from.factors.begin(), from.factors.end());
  into.densities.insert(into.densities.end(), from.densities.begin(), from.densities.end());
}

}  // namespace

TreeState::TreeState(const StrongJunctionTree& tree, const Network& net)
    : net_(&net),
      tree_(tree),
      potentials_(tree.cliques.size()),
      up_(tree.cliques.size()),
      down_(tree.cliques.size()) {}

TreeState TreeState::initialize(const StrongJunctionTree& tree, const Network& net, const Evidence& evidence) {
  TreeState s(tree, net);
  s.evidence_.discrete = evidence.discrete;
  for (const auto& cpt : net.cpts) {
    std::vector<VariableId> family = cpt.tail;
    family.push_back(cpt.head);
    const auto c = tree.covering_clique(family);
    if (!c) throw InternalError("no clique covers the family of " + net.variable(cpt.head).name);
    s.potentials_[*c].factors.push_back(instantiate_discrete(Factor::from_cpt(net, cpt), s.evidence_));
  }
  for (const auto& spec : net.densities) {
    std::vector<VariableId> family = spec.discrete_tail;
    family.insert(family.end(), spec.continuous_tail.begin(), spec.continuous_tail.end());
    family.push_back(spec.head);
    const auto c = tree.covering_clique(family);
    if (!c) throw InternalError("no clique covers the family of " + net.variable(spec.head).name);
    s.potentials_[*c].densities.push_back(instantiate_discrete(Density::from_spec(net, spec), s.evidence_));
  }
  s.order_ = net.topological_order();
  s.rank_.assign(net.size(), 0);
  for (std::size_t i = 0; i < s.order_.size(); ++i) s.rank_[s.order_[i]] = i;
  s.recompute_boundary();
  return s;
}

// ---------------------------------------------------------------------------
// Bookkeeping

void TreeState::require(std::initializer_list<Phase> allowed, const char* what) const {
  if (std::find(allowed.begin(), allowed.end(), phase_) == allowed.end())
    throw PhaseError(std::string(what) + " called in the wrong propagation phase");
}

bool TreeState::uninstantiated_continuous(VariableId v) const {
  return net_->is_continuous(v) && !evidence_.continuous.contains(v);
}

bool TreeState::has_uninstantiated_continuous(const std::vector<VariableId>& members) const {
  return std::any_of(members.begin(), members.end(), [&](VariableId v) { return uninstantiated_continuous(v); });
}

bool TreeState::is_boundary(std::size_t clique) const {
  const auto& c = tree_.cliques.at(clique);
  if (!has_uninstantiated_continuous(c.members)) return false;
  return !c.parent || !has_uninstantiated_continuous(tree_.cliques[*c.parent].members);
}

void TreeState::recompute_boundary() {
  boundary_.clear();
  for (const auto& c : tree_.cliques)
    if (is_boundary(c.id)) boundary_.insert(c.id);
}

void TreeState::mark_changed(std::size_t clique) {
  for (std::size_t c : tree_.path_to_root(clique)) up_[c].reset();
}

std::optional<std::size_t> TreeState::holder_of(VariableId v) const {
  for (std::size_t c = 0; c < potentials_.size(); ++c)
    for (const auto& d : potentials_[c].densities)
      if (d.head == v) return c;
  return std::nullopt;
}

Density& TreeState::density_in(std::size_t clique, VariableId v) {
  for (auto& d : potentials_[clique].densities)
    if (d.head == v) return d;
  throw InternalError("density not found in clique");
}

Density TreeState::take_density(std::size_t clique, VariableId v) {
  auto& ds = potentials_[clique].densities;
  auto it = std::find_if(ds.begin(), ds.end(), [&](const Density& d) { return d.head == v; });
  if (it == ds.end()) throw InternalError("density not found in clique");
  Density d = std::move(*it);
  ds.erase(it);
  return d;
}

void TreeState::extend(std::size_t clique, const Density& d) { add_members(tree_.cliques[clique].members, d); }

// Lifts the density of `v` from the clique holding it into `clique`, which
// must lie on the holder's path to the root.
void TreeState::ensure_in(VariableId v, std::size_t clique) {
  const auto holder = holder_of(v);
  if (!holder) throw InternalError("no density for " + net_->variable(v).name);
  if (*holder == clique) return;
  const auto path = tree_.path_to_root(*holder);
  const auto target = std::find(path.begin(), path.end(), clique);
  if (target == path.end()) throw InternalError("density lies outside the subtree of the target clique");
  Density d = take_density(*holder, v);
  for (auto it = path.begin(); it != target; ++it) {
    add_members(tree_.separators[*tree_.cliques[*it].parent_separator].members, d);
    extend(*tree_.cliques[*it].parent, d);
  }
  mark_changed(*holder);
  potentials_[clique].densities.push_back(std::move(d));
}

void TreeState::move_after(VariableId z, VariableId anchor) {
  order_.erase(std::find(order_.begin(), order_.end(), z));
  order_.insert(std::find(order_.begin(), order_.end(), anchor) + 1, z);
  for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = i;
}

// Removes continuous `z` from the tail of y's density in `clique`. Children
// of z ranked before y are reversed first so that z can move just after y
// in the global order without creating a cycle.
void TreeState::eliminate_from_tail(std::size_t clique, VariableId y, VariableId z) {
  ensure_in(z, clique);
  std::vector<VariableId> kids;
  for (const auto& p : potentials_)
    for (const auto& d : p.densities)
      if (d.head != y && d.has_continuous_parent(z) && rank_[d.head] < rank_[y]) kids.push_back(d.head);
  std::sort(kids.begin(), kids.end(), [&](VariableId a, VariableId b) { return rank_[a] < rank_[b]; });
  kids.push_back(y);
  for (VariableId w : kids) {
    ensure_in(w, clique);
    auto [child, parent] = exchange_continuous(density_in(clique, w), density_in(clique, z));
    density_in(clique, w) = std::move(child);
    density_in(clique, z) = std::move(parent);
    move_after(z, w);
  }
  mark_changed(clique);
}

Potential TreeState::inbound(std::size_t clique, std::optional<std::size_t> except_child) const {
  Potential p = potentials_[clique];
  for (std::size_t c : tree_.cliques[clique].children) {
    if (except_child && c == *except_child) continue;
    if (!up_[c]) throw InternalError("missing message from a child clique");
    append(p, *up_[c]);
  }
  // A downward sender also forwards what it received from above.
  if (except_child && tree_.cliques[clique].parent) {
    if (!down_[clique]) throw InternalError("missing message from the parent clique");
    append(p, *down_[clique]);
  }
  return p;
}

void TreeState::ensure_up(std::size_t clique, TraceKind kind) {
  if (up_[clique]) return;
  for (std::size_t c : tree_.cliques[clique].children) ensure_up(c, kind);
  const auto& sep = tree_.separator_above(clique);
  up_[clique] = project(inbound(clique, std::nullopt), as_set(sep.members), evidence_, &rank_);
  trace_.push_back({kind, clique, *tree_.cliques[clique].parent, std::nullopt});
}

const Potential& TreeState::message_to_parent(std::size_t clique) {
  if (!tree_.cliques.at(clique).parent) throw DataError("the root clique has no parent");
  up_[clique].reset();
  ensure_up(clique, root_collected_ ? TraceKind::collect_to_root : TraceKind::collect_to_boundary);
  return *up_[clique];
}

// ---------------------------------------------------------------------------
// Schedule

void TreeState::collect_to_boundary() {
  require({Phase::initialized}, "collect_to_boundary");
  for (std::size_t k : boundary_)
    for (std::size_t c : tree_.cliques[k].children) ensure_up(c, TraceKind::collect_to_boundary);
  phase_ = Phase::pre_collected;
}

std::size_t TreeState::push(VariableId y, bool to_reached) {
  require({Phase::pre_collected, Phase::evidence_inserted, Phase::propagated}, "push");
  if (!uninstantiated_continuous(y)) throw DataError("push needs an uninstantiated continuous variable");
  std::size_t a = 0;
  while (!tree_.cliques[a].contains(y)) ++a;  // ids are breadth-first: first hit is the top
  ensure_in(y, a);
  for (;;) {
    std::set<VariableId> allowed;
    if (tree_.cliques[a].parent)
      for (VariableId v : tree_.separator_above(a).members)
        if (uninstantiated_continuous(v)) allowed.insert(v);
    for (;;) {
      const auto& tail = density_in(a, y).continuous_tail;
      std::optional<VariableId> z;
      for (VariableId v : tail)
        if (!allowed.contains(v) && (!z || rank_[v] > rank_[*z])) z = v;
      if (!z) break;
      eliminate_from_tail(a, y, *z);
    }
    const bool stop = to_reached ? !tree_.cliques[a].parent || down_[a].has_value() : is_boundary(a);
    if (stop) {
      recompute_boundary();
      return a;
    }
    const std::size_t b = *tree_.cliques[a].parent;
    Density f = take_density(a, y);
    add_members(tree_.separators[*tree_.cliques[a].parent_separator].members, f);
    extend(b, f);
    potentials_[b].densities.push_back(std::move(f));
    mark_changed(a);
    trace_.push_back({TraceKind::push, a, b, y});
    a = b;
  }
}

void TreeState::insert_continuous_evidence(VariableId y, double value) {
  require({Phase::pre_collected, Phase::evidence_inserted}, "insert_continuous_evidence");
  if (!net_->is_continuous(y)) throw DataError("continuous evidence on a discrete variable");
  if (evidence_.continuous.contains(y)) throw DataError("evidence already inserted on " + net_->variable(y).name);
  const std::size_t k = push(y);
  const Factor likelihood = evidence_likelihood(density_in(k, y), value);
  take_density(k, y);
  potentials_[k].factors.push_back(likelihood);
  evidence_.continuous[y] = value;
  for (std::size_t c = 0; c < potentials_.size(); ++c) {
    bool changed = false;
    for (auto& d : potentials_[c].densities) {
      if (!d.has_continuous_parent(y)) continue;
      d = instantiate_tail_continuous(d, y, value);
      changed = true;
    }
    if (changed) mark_changed(c);
  }
  mark_changed(k);
  trace_.push_back({TraceKind::insert_evidence, k, k, y});
  recompute_boundary();
  phase_ = Phase::evidence_inserted;
}

void TreeState::collect_to_root() {
  require({Phase::pre_collected, Phase::evidence_inserted}, "collect_to_root");
  for (std::size_t c : tree_.cliques[tree_.root].children) ensure_up(c, TraceKind::collect_to_root);
  root_collected_ = true;
}

void TreeState::distribute() {
  if (!root_collected_) throw PhaseError("distribute called before collect_to_root");
  for (auto& d : down_) d.reset();
  std::function<void(std::size_t)> send = [&](std::size_t p) {
    for (std::size_t c : tree_.cliques[p].children) {
      const auto& sep = tree_.separator_above(c);
      if (has_uninstantiated_continuous(sep.members)) continue;
      down_[c] = project(inbound(p, c), as_set(sep.members), evidence_, &rank_);
      trace_.push_back({TraceKind::distribute, p, c, std::nullopt});
      send(c);
    }
  };
  send(tree_.root);
  phase_ = Phase::propagated;
}

TreeState propagate(const StrongJunctionTree& tree, const Network& net, const Evidence& evidence) {
  check_evidence(net, evidence);
  TreeState s = TreeState::initialize(tree, net, evidence);
  s.collect_to_boundary();
  for (const auto& [y, value] : evidence.continuous) s.insert_continuous_evidence(y, value);
  s.collect_to_root();
  s.distribute();
  return s;
}

// ---------------------------------------------------------------------------
// Queries

std::vector<MarginalSource> TreeState::discrete_sources(VariableId x) const {
  auto size_of = [&](const std::vector<VariableId>& members) {
    std::size_t s = 1;
    for (VariableId v : members)
      if (net_->is_discrete(v)) s *= net_->state_count(v);
    return s;
  };
  std::vector<MarginalSource> out;
  for (const auto& c : tree_.cliques)
    if (c.contains(x) && (!c.parent || down_[c.id])) out.push_back({false, c.id, size_of(c.members)});
  for (const auto& s : tree_.separators)
    if (std::binary_search(s.members.begin(), s.members.end(), x) && up_[s.child_clique] && down_[s.child_clique])
      out.push_back({true, s.child_clique, size_of(s.members)});
  std::stable_sort(out.begin(), out.end(), [](const MarginalSource& a, const MarginalSource& b) {
    return a.size != b.size ? a.size < b.size : (a.separator != b.separator ? !a.separator : a.id < b.id);
  });
  return out;
}

std::vector<double> TreeState::marginal_from(const MarginalSource& source, VariableId x) const {
  require({Phase::propagated}, "marginal_from");
  const std::size_t n = net_->state_count(x);
  if (auto it = evidence_.discrete.find(x); it != evidence_.discrete.end()) {
    std::vector<double> point(n, 0.0);
    point[it->second] = 1.0;
    return point;
  }
  std::vector<Factor> factors;
  auto add = [&](const Potential& p) { factors.insert(factors.end(), p.factors.begin(), p.factors.end()); };
  if (source.separator) {
    add(*up_.at(source.id));
    add(*down_.at(source.id));
  } else {
    add(potentials_.at(source.id));
    for (std::size_t c : tree_.cliques[source.id].children) add(*up_[c]);
    if (tree_.cliques[source.id].parent) add(*down_[source.id]);
  }
  Domain target;
  target.vars = {x};
  target.states = {n};
  auto table = marginal_table(factors, target);
  double total = 0.0;
  for (double v : table) total += v;
  if (!(total > 0.0)) throw DegenerateError("the evidence has probability zero");
  for (double& v : table) v /= total;
  return table;
}

std::vector<double> TreeState::query_discrete(VariableId x) const {
  require({Phase::propagated}, "query_discrete");
  if (!net_->is_discrete(x)) throw DataError("query_discrete needs a discrete variable");
  const auto sources = discrete_sources(x);
  if (sources.empty()) {
    if (evidence_.discrete.contains(x)) return marginal_from({}, x);
    throw InternalError("no propagated clique or separator holds " + net_->variable(x).name);
  }
  return marginal_from(sources.front(), x);
}

TreeState::Snapshot TreeState::snapshot() const {
  return {tree_, potentials_, up_, down_, boundary_, order_, rank_, trace_.size()};
}

void TreeState::restore(Snapshot s) {
  tree_ = std::move(s.tree);
  potentials_ = std::move(s.potentials);
  up_ = std::move(s.up);
  down_ = std::move(s.down);
  boundary_ = std::move(s.boundary);
  order_ = std::move(s.order);
  rank_ = std::move(s.rank);
  trace_.resize(s.trace_size);
}

GaussianMixture TreeState::query_continuous(VariableId y) {
  require({Phase::propagated}, "query_continuous");
  if (!net_->is_continuous(y)) throw DataError("query_continuous needs a continuous variable");
  GaussianMixture mixture;
  if (auto it = evidence_.continuous.find(y); it != evidence_.continuous.end()) {
    mixture.components.push_back({1.0, it->second, 0.0, {}});
    return mixture;
  }
  Snapshot saved = snapshot();
  try {
    const std::size_t k = push(y, true);
    for (std::size_t c : tree_.cliques[k].children) ensure_up(c, TraceKind::collect_to_root);
    Potential combined = inbound(k, std::nullopt);
    if (tree_.cliques[k].parent) {
      if (!down_[k]) throw InternalError("boundary clique was not reached by distribute");
      append(combined, *down_[k]);
    }
    std::set<VariableId> keep = discrete_domain(combined);
    keep.insert(y);
    const Potential projected = project(combined, keep, evidence_, &rank_);
    const auto f = std::find_if(projected.densities.begin(), projected.densities.end(),
                                [&](const Density& d) { return d.head == y; });
    if (f == projected.densities.end() || !f->continuous_tail.empty())
      throw InternalError("pushed density keeps a continuous tail");
    const auto weights = marginal_table(projected.factors, f->discrete_tail);
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw DegenerateError("the evidence has probability zero");
    mixture.conditioning = f->discrete_tail.vars;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      mixture.components.push_back(
          {weights[i] / total, f->alpha[i], f->sigma2[i], decode_index(f->discrete_tail, i)});
    }
  } catch (...) {
    restore(std::move(saved));
    throw;
  }
  restore(std::move(saved));
  return mixture;
}

}  // namespace clg
