#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clg/domain.hpp"
#include "clg/model.hpp"

namespace clg {

// A discrete table. The head is either a discrete variable (then the table
// is a conditional distribution over the head for every tail
// configuration), a set of evidence tokens (a likelihood such as p(y | I)),
// or empty (a plain non-negative table).
//
// Layout: row-major over [tail..., head] with the head fastest. Tails are
// kept sorted by variable id.
struct Factor {
  std::optional<VariableId> head;
  std::vector<VariableId> evidence;  // sorted; only when head is empty
  Domain tail;
  std::size_t head_states = 1;
  std::vector<double> table;

  static Factor from_cpt(const Network& net, const CptSpec& cpt);

  bool is_conditional() const { return head.has_value(); }
  Domain scope() const;  // tail followed by the head variable, if any
  bool mentions(VariableId v) const;
  std::size_t configurations() const { return table.size(); }

  bool operator==(const Factor&) const = default;
};

// A univariate CLG regression N(alpha(i) + beta(i) . Z, sigma2(i)) for each
// configuration i of the discrete tail. Both tails are sorted by id.
struct Density {
  VariableId head = 0;
  Domain discrete_tail;
  std::vector<VariableId> continuous_tail;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[i * |Z| + k]
  std::vector<double> sigma2;
  // Continuous tail variables that were substituted by evidence. Kept only
  // so potentials can be printed the way they are written by hand.
  std::vector<VariableId> instantiated;

  static Density from_spec(const Network& net, const ClgSpec& spec);

  std::size_t configurations() const { return alpha.size(); }
  std::size_t arity() const { return continuous_tail.size(); }
  double coefficient(std::size_t config, std::size_t k) const { return beta[config * arity() + k]; }
  bool has_continuous_parent(VariableId z) const;
  bool mentions(VariableId v) const;

  bool operator==(const Density&) const = default;
};

// A decomposed potential: the product of its factors and densities, never
// multiplied out.
struct Potential {
  std::vector<Factor> factors;
  std::vector<Density> densities;

  bool vacuous() const { return factors.empty() && densities.empty(); }
  bool operator==(const Potential&) const = default;
};

// A full point at which a potential can be contracted.
struct Assignment {
  std::map<VariableId, std::size_t> discrete;
  std::map<VariableId, double> continuous;
};

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::size_t> configuration;  // states of GaussianMixture::conditioning
};

// Posterior density of one continuous variable.
struct GaussianMixture {
  std::vector<VariableId> conditioning;
  std::vector<MixtureComponent> components;

  double mean() const;
  double variance() const;
  double pdf(double y) const;

  // Merges components whose mean and variance agree within
  // tolerance * max(1, |value|); result sorted by (mean, variance) and
  // stripped of configuration labels.
  GaussianMixture collapsed(double tolerance = 1e-12) const;
};

// Topological position of every variable, indexed by VariableId. When given
// to projection it fixes the order of arc reversals so that every produced
// density keeps its tail strictly before its head.
using Ranking = std::vector<std::size_t>;

double normal_pdf(double x, double mean, double variance);

Density extend_domain(const Density& d, const Domain& add_discrete,
                      std::span<const VariableId> add_continuous);

// Arc reversal Z -> Y. `fy` has Z in its continuous tail, `fz` is the
// density of Z. Returns (f(Y | tails without Z), f(Z | Y, tails)).
std::pair<Density, Density> exchange_continuous(const Density& fy, const Density& fz);

// Arc reversal X_i -> X_j on two conditional factors.
std::pair<Factor, Factor> exchange_discrete(const Factor& pj, const Factor& pi);

Factor instantiate_discrete(const Factor& f, const Evidence& evidence);
Density instantiate_discrete(const Density& d, const Evidence& evidence);
Density instantiate_tail_continuous(const Density& d, VariableId z, double value);

// Turns a density with no continuous tail into the likelihood factor
// p(y | I). Throws DegenerateError when some sigma2(i) is zero.
Factor evidence_likelihood(const Density& d, double y);

Potential remove_barren(Potential p, const std::set<VariableId>& targets, const Evidence& evidence);
Potential combine(const Potential& a, const Potential& b);
double contract(const Potential& p, const Assignment& point);

// Eliminates every variable of `p` outside `keep`, continuous variables
// first, by arc reversal and barren removal.
Potential project(const Potential& p, const std::set<VariableId>& keep, const Evidence& evidence,
                  const Ranking* ranking = nullptr);

// Removes discrete variable `x` from the factors that mention it.
std::vector<Factor> eliminate_discrete(std::vector<Factor> relevant, VariableId x,
                                       const Ranking* ranking = nullptr);

// Product of factors as a head-less table over the sorted union of their
// variables, carrying the union of their evidence tokens.
Factor multiply(std::span<const Factor> factors);
Factor sum_out(const Factor& f, VariableId x);

// Unnormalized marginal over `target` of the product of `factors`.
// Variables of `target` missing from every factor contribute a flat axis.
std::vector<double> marginal_table(std::span<const Factor> factors, const Domain& target);

// Discrete and continuous variables mentioned anywhere in the potential.
std::set<VariableId> discrete_domain(const Potential& p);
std::set<VariableId> continuous_domain(const Potential& p);

std::string describe(const Factor& f, const Network& net);
std::string describe(const Density& d, const Network& net);
// Sorted element descriptions, for set comparisons in tests and tools.
std::vector<std::string> describe(const Potential& p, const Network& net);

}  // namespace clg
