#include "clg/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "clg/error.hpp"
#include "clg/metrics.hpp"

namespace clg {
namespace {

constexpr double kVarianceClamp = 1e-12;

void note(const Factor& f) { metrics::note_table(f.table.size(), f.table.size() * sizeof(double)); }

void note(const Density& d) {
  metrics::note_table(d.alpha.size(),
                      (d.alpha.size() + d.beta.size() + d.sigma2.size()) * sizeof(double));
}

double clamp_variance(double v) {
  if (v >= 0.0) return v;
  if (v >= -kVarianceClamp) return 0.0;
  throw InternalError("negative variance " + std::to_string(v));
}

std::vector<VariableId> sorted_unique(std::vector<VariableId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<VariableId>& v, VariableId x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw InternalError("variable missing from tail");
  return static_cast<std::size_t>(it - v.begin());
}

bool contains(const std::vector<VariableId>& v, VariableId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

Domain domain_of(const Network& net, const std::vector<VariableId>& vars) {
  Domain d;
  for (VariableId v : vars) {
    d.vars.push_back(v);
    d.states.push_back(net.state_count(v));
  }
  return d;
}

// Kahn order over the given heads where an edge a -> b exists when a is in
// the tail of b; ties by smallest id.
template <typename TailOf>
std::vector<VariableId> local_order(const std::vector<VariableId>& heads, TailOf tail_of) {
  std::vector<VariableId> order;
  std::vector<VariableId> remaining = heads;
  std::sort(remaining.begin(), remaining.end());
  while (!remaining.empty()) {
    bool progressed = false;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      const auto tail = tail_of(*it);
      const bool ready = std::none_of(remaining.begin(), remaining.end(), [&](VariableId other) {
        return other != *it && contains(tail, other);
      });
      if (ready) {
        order.push_back(*it);
        remaining.erase(it);
        progressed = true;
        break;
      }
    }
    if (!progressed) throw InternalError("cyclic conditional structure in potential");
  }
  return order;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Names sorted alphabetically so printed signatures do not depend on ids.
std::string join_names(const Network& net, const std::vector<VariableId>& ids, bool lowercase) {
  std::vector<std::string> names;
  for (VariableId v : ids) names.push_back(lowercase ? lower(net.variable(v).name) : net.variable(v).name);
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Factor / Density basics

Domain Factor::scope() const {
  Domain s = tail;
  if (head) {
    s.vars.push_back(*head);
    s.states.push_back(head_states);
  }
  return s;
}

bool Factor::mentions(VariableId v) const { return (head && *head == v) || tail.contains(v); }

Factor Factor::from_cpt(const Network& net, const CptSpec& cpt) {
  Domain declared = domain_of(net, cpt.tail);
  declared.vars.push_back(cpt.head);
  declared.states.push_back(net.state_count(cpt.head));

  Factor f;
  f.head = cpt.head;
  f.head_states = net.state_count(cpt.head);
  f.tail = domain_of(net, cpt.tail).sorted();
  const auto map = embed_indices(f.scope(), declared);
  f.table.resize(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) f.table[i] = cpt.table.at(map[i]);
  note(f);
  return f;
}

bool Density::has_continuous_parent(VariableId z) const { return contains(continuous_tail, z); }

bool Density::mentions(VariableId v) const {
  return head == v || discrete_tail.contains(v) || has_continuous_parent(v);
}

Density Density::from_spec(const Network& net, const ClgSpec& spec) {
  const Domain declared = domain_of(net, spec.discrete_tail);
  Density d;
  d.head = spec.head;
  d.discrete_tail = declared.sorted();
  d.continuous_tail = sorted_unique(spec.continuous_tail);
  const auto map = embed_indices(d.discrete_tail, declared);
  const std::size_t n = map.size();
  const std::size_t m = d.continuous_tail.size();
  d.alpha.resize(n);
  d.sigma2.resize(n);
  d.beta.resize(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    d.alpha[i] = spec.alpha.at(map[i]);
    d.sigma2[i] = spec.sigma2.at(map[i]);
    for (std::size_t k = 0; k < m; ++k)
      d.beta[i * m + k] = spec.beta.at(map[i]).at(index_of(spec.continuous_tail, d.continuous_tail[k]));
  }
  note(d);
  return d;
}

double normal_pdf(double x, double mean, double variance) {
  if (variance <= 0.0) return x == mean ? std::numeric_limits<double>::infinity() : 0.0;
  const double r = x - mean;
  return std::exp(-r * r / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

// ---------------------------------------------------------------------------
// GaussianMixture

double GaussianMixture::mean() const {
  double m = 0.0;
  for (const auto& c : components) m += c.weight * c.mean;
  return m;
}

double GaussianMixture::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& c : components) v += c.weight * (c.variance + (c.mean - m) * (c.mean - m));
  return v;
}

double GaussianMixture::pdf(double y) const {
  double p = 0.0;
  for (const auto& c : components) p += c.weight * normal_pdf(y, c.mean, c.variance);
  return p;
}

GaussianMixture GaussianMixture::collapsed(double tolerance) const {
  auto close = [tolerance](double a, double b) {
    return std::abs(a - b) <= tolerance * std::max({1.0, std::abs(a), std::abs(b)});
  };
  GaussianMixture out;
  for (const auto& c : components) {
    auto it = std::find_if(out.components.begin(), out.components.end(), [&](const MixtureComponent& o) {
      return close(o.mean, c.mean) && close(o.variance, c.variance);
    });
    if (it != out.components.end()) {
      it->weight += c.weight;
    } else {
      out.components.push_back({c.weight, c.mean, c.variance, {}});
    }
  }
  std::sort(out.components.begin(), out.components.end(), [](const auto& a, const auto& b) {
    return a.mean != b.mean ? a.mean < b.mean : a.variance < b.variance;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Domain extension and EXCHANGE

Density extend_domain(const Density& d, const Domain& add_discrete,
                      std::span<const VariableId> add_continuous) {
  if (std::find(add_continuous.begin(), add_continuous.end(), d.head) != add_continuous.end() ||
      add_discrete.contains(d.head))
    throw DataError("cannot extend a density by its own head variable");

  Density out;
  out.head = d.head;
  out.instantiated = d.instantiated;
  out.discrete_tail = Domain::sorted_union(d.discrete_tail, add_discrete);
  std::vector<VariableId> cont = d.continuous_tail;
  cont.insert(cont.end(), add_continuous.begin(), add_continuous.end());
  out.continuous_tail = sorted_unique(std::move(cont));

  const auto map = embed_indices(out.discrete_tail, d.discrete_tail);
  const std::size_t n = map.size();
  const std::size_t m = out.continuous_tail.size();
  std::vector<std::optional<std::size_t>> old_pos(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto it = std::find(d.continuous_tail.begin(), d.continuous_tail.end(), out.continuous_tail[k]);
    if (it != d.continuous_tail.end()) old_pos[k] = static_cast<std::size_t>(it - d.continuous_tail.begin());
  }
  out.alpha.resize(n);
  out.sigma2.resize(n);
  out.beta.assign(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.alpha[i] = d.alpha[map[i]];
    out.sigma2[i] = d.sigma2[map[i]];
    for (std::size_t k = 0; k < m; ++k)
      if (old_pos[k]) out.beta[i * m + k] = d.coefficient(map[i], *old_pos[k]);
  }
  note(out);
  return out;
}

std::pair<Density, Density> exchange_continuous(const Density& fy, const Density& fz) {
  const VariableId y = fy.head;
  const VariableId z = fz.head;
  if (!fy.has_continuous_parent(z)) throw InternalError("exchange: Z is not a parent of Y");
  if (fz.has_continuous_parent(y)) throw InternalError("exchange: Y is already a parent of Z");

  const Domain disc = Domain::sorted_union(fy.discrete_tail, fz.discrete_tail);
  std::vector<VariableId> common;
  for (VariableId v : fy.continuous_tail)
    if (v != z) common.push_back(v);
  common.insert(common.end(), fz.continuous_tail.begin(), fz.continuous_tail.end());
  common = sorted_unique(std::move(common));

  const Density ey = extend_domain(fy, disc, common);  // tail = common + {z}
  const Density ez = extend_domain(fz, disc, common);  // tail = common
  const std::size_t n = disc.size();
  const std::size_t m = common.size();
  const std::size_t z_pos = index_of(ey.continuous_tail, z);
  std::vector<std::size_t> y_pos_of(m);  // position of common[k] inside ey's tail
  for (std::size_t k = 0; k < m; ++k) y_pos_of[k] = index_of(ey.continuous_tail, common[k]);

  Density ny;
  ny.head = y;
  ny.discrete_tail = disc;
  ny.continuous_tail = common;
  ny.instantiated = fy.instantiated;
  ny.alpha.resize(n);
  ny.sigma2.resize(n);
  ny.beta.resize(n * m);

  Density nz;
  nz.head = z;
  nz.discrete_tail = disc;
  nz.continuous_tail = common;
  nz.continuous_tail.push_back(y);
  nz.continuous_tail = sorted_unique(std::move(nz.continuous_tail));
  nz.instantiated = fz.instantiated;
  const std::size_t mz = nz.continuous_tail.size();
  const std::size_t zy_pos = index_of(nz.continuous_tail, y);
  std::vector<std::size_t> z_pos_of(m);
  for (std::size_t k = 0; k < m; ++k) z_pos_of[k] = index_of(nz.continuous_tail, common[k]);
  nz.alpha.resize(n);
  nz.sigma2.resize(n);
  nz.beta.assign(n * mz, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double alpha_y = ey.alpha[i];
    const double var_y = ey.sigma2[i];
    const double beta_z = ey.coefficient(i, z_pos);
    const double alpha_z = ez.alpha[i];
    const double var_z = ez.sigma2[i];

    if (beta_z == 0.0) {
      // Y does not depend on Z in this configuration: the pair factorizes.
      ny.alpha[i] = alpha_y;
      ny.sigma2[i] = var_y;
      for (std::size_t k = 0; k < m; ++k) ny.beta[i * m + k] = ey.coefficient(i, y_pos_of[k]);
      nz.alpha[i] = alpha_z;
      nz.sigma2[i] = var_z;
      for (std::size_t k = 0; k < m; ++k) nz.beta[i * mz + z_pos_of[k]] = ez.coefficient(i, k);
      continue;
    }

    const double v = var_y + beta_z * beta_z * var_z;
    ny.alpha[i] = alpha_y + beta_z * alpha_z;
    ny.sigma2[i] = clamp_variance(v);
    for (std::size_t k = 0; k < m; ++k)
      ny.beta[i * m + k] = ey.coefficient(i, y_pos_of[k]) + beta_z * ez.coefficient(i, k);

    if (v > 0.0) {
      nz.alpha[i] = (alpha_z * var_y - alpha_y * beta_z * var_z) / v;
      for (std::size_t k = 0; k < m; ++k) {
        const double delta = ez.coefficient(i, k);
        const double beta = ey.coefficient(i, y_pos_of[k]);
        nz.beta[i * mz + z_pos_of[k]] = (delta * var_y - beta * beta_z * var_z) / v;
      }
      nz.beta[i * mz + zy_pos] = beta_z * var_z / v;
      nz.sigma2[i] = clamp_variance(var_z * var_y / v);
    } else {
      // Both links deterministic: Z = (Y - alpha_Y - sum beta_k Z_k) / beta_Z.
      nz.alpha[i] = -alpha_y / beta_z;
      for (std::size_t k = 0; k < m; ++k)
        nz.beta[i * mz + z_pos_of[k]] = -ey.coefficient(i, y_pos_of[k]) / beta_z;
      nz.beta[i * mz + zy_pos] = 1.0 / beta_z;
      nz.sigma2[i] = 0.0;
    }
  }
  note(ny);
  note(nz);
  return {std::move(ny), std::move(nz)};
}

std::pair<Factor, Factor> exchange_discrete(const Factor& pj, const Factor& pi) {
  if (!pj.head || !pi.head) throw InternalError("exchange_discrete needs conditional factors");
  const VariableId xj = *pj.head;
  const VariableId xi = *pi.head;
  if (!pj.tail.contains(xi)) throw InternalError("exchange_discrete: X_i is not a parent of X_j");
  if (pi.tail.contains(xj)) throw InternalError("exchange_discrete: X_j is already a parent of X_i");

  const Domain common = Domain::sorted_union(pj.tail.without(xi), pi.tail);
  const std::size_t nj = pj.head_states;
  const std::size_t ni = pi.head_states;

  Domain joint = common;  // [common..., xi, xj]
  joint.vars.push_back(xi);
  joint.states.push_back(ni);
  joint.vars.push_back(xj);
  joint.states.push_back(nj);
  const auto j_idx = embed_indices(joint, pj.scope());
  const auto i_idx = embed_indices(joint, pi.scope());

  Factor new_j;
  new_j.head = xj;
  new_j.head_states = nj;
  new_j.tail = common;
  new_j.table.assign(common.size() * nj, 0.0);

  Factor new_i;
  new_i.head = xi;
  new_i.head_states = ni;
  Domain tail_i = common;
  tail_i.vars.push_back(xj);
  tail_i.states.push_back(nj);
  new_i.tail = tail_i.sorted();
  new_i.table.assign(new_i.tail.size() * ni, 0.0);

  Domain joint_for_i = common;  // [common..., xj, xi] to reach new_i's scope
  joint_for_i.vars.push_back(xj);
  joint_for_i.states.push_back(nj);
  joint_for_i.vars.push_back(xi);
  joint_for_i.states.push_back(ni);
  const auto ni_idx = embed_indices(joint_for_i, new_i.scope());

  const std::size_t rows = common.size();
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t sj = 0; sj < nj; ++sj) {
      double marginal = 0.0;
      for (std::size_t si = 0; si < ni; ++si) {
        const std::size_t flat = (t * ni + si) * nj + sj;
        marginal += pj.table[j_idx[flat]] * pi.table[i_idx[flat]];
      }
      new_j.table[t * nj + sj] = marginal;
      for (std::size_t si = 0; si < ni; ++si) {
        const std::size_t flat = (t * ni + si) * nj + sj;
        const double value = marginal > 0.0 ? pj.table[j_idx[flat]] * pi.table[i_idx[flat]] / marginal
                                            : 1.0 / static_cast<double>(ni);
        new_i.table[ni_idx[(t * nj + sj) * ni + si]] = value;
      }
    }
  }
  note(new_j);
  note(new_i);
  return {std::move(new_j), std::move(new_i)};
}

// ---------------------------------------------------------------------------
// Evidence

Factor instantiate_discrete(const Factor& f, const Evidence& evidence) {
  const Domain scope = f.scope();
  bool touched = false;
  for (VariableId v : scope.vars) touched = touched || evidence.discrete.contains(v);
  if (!touched) return f;

  Factor out;
  out.evidence = f.evidence;
  for (std::size_t k = 0; k < f.tail.arity(); ++k) {
    if (evidence.discrete.contains(f.tail.vars[k])) continue;
    out.tail.vars.push_back(f.tail.vars[k]);
    out.tail.states.push_back(f.tail.states[k]);
  }
  if (f.head && evidence.discrete.contains(*f.head)) {
    out.evidence.push_back(*f.head);
    out.evidence = sorted_unique(std::move(out.evidence));
    out.head_states = 1;
  } else {
    out.head = f.head;
    out.head_states = f.head_states;
  }
  const Domain out_scope = out.scope();
  out.table.assign(out_scope.size(), 0.0);
  std::vector<std::size_t> out_states(out_scope.arity());
  for (std::size_t flat = 0; flat < f.table.size(); ++flat) {
    const auto states = decode_index(scope, flat);
    bool consistent = true;
    std::size_t o = 0;
    for (std::size_t k = 0; k < scope.arity(); ++k) {
      auto it = evidence.discrete.find(scope.vars[k]);
      if (it != evidence.discrete.end()) {
        consistent = consistent && it->second == states[k];
      } else {
        out_states[o++] = states[k];
      }
    }
    if (consistent) out.table[encode_index(out_scope, out_states)] = f.table[flat];
  }
  note(out);
  return out;
}

Density instantiate_discrete(const Density& d, const Evidence& evidence) {
  Domain kept;
  for (std::size_t k = 0; k < d.discrete_tail.arity(); ++k) {
    if (evidence.discrete.contains(d.discrete_tail.vars[k])) continue;
    kept.vars.push_back(d.discrete_tail.vars[k]);
    kept.states.push_back(d.discrete_tail.states[k]);
  }
  if (kept.arity() == d.discrete_tail.arity()) return d;

  Density out = d;
  out.discrete_tail = kept;
  const std::size_t n = kept.size();
  const std::size_t m = d.arity();
  out.alpha.resize(n);
  out.sigma2.resize(n);
  out.beta.resize(n * m);
  std::vector<std::size_t> full(d.discrete_tail.arity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto states = decode_index(kept, i);
    std::size_t o = 0;
    for (std::size_t k = 0; k < d.discrete_tail.arity(); ++k) {
      auto it = evidence.discrete.find(d.discrete_tail.vars[k]);
      full[k] = it != evidence.discrete.end() ? it->second : states[o++];
    }
    const std::size_t src = encode_index(d.discrete_tail, full);
    out.alpha[i] = d.alpha[src];
    out.sigma2[i] = d.sigma2[src];
    for (std::size_t k = 0; k < m; ++k) out.beta[i * m + k] = d.beta[src * m + k];
  }
  note(out);
  return out;
}

Density instantiate_tail_continuous(const Density& d, VariableId z, double value) {
  const std::size_t pos = index_of(d.continuous_tail, z);
  const std::size_t m = d.arity();
  Density out = d;
  out.continuous_tail.erase(out.continuous_tail.begin() + static_cast<std::ptrdiff_t>(pos));
  out.instantiated.push_back(z);
  out.instantiated = sorted_unique(std::move(out.instantiated));
  out.beta.clear();
  for (std::size_t i = 0; i < d.configurations(); ++i) {
    out.alpha[i] = d.alpha[i] + d.coefficient(i, pos) * value;
    for (std::size_t k = 0; k < m; ++k)
      if (k != pos) out.beta.push_back(d.coefficient(i, k));
  }
  return out;
}

Factor evidence_likelihood(const Density& d, double y) {
  if (!d.continuous_tail.empty())
    throw InternalError("evidence_likelihood needs a density without continuous tail");
  Factor f;
  f.evidence = {d.head};
  f.tail = d.discrete_tail;
  f.table.resize(d.configurations());
  for (std::size_t i = 0; i < d.configurations(); ++i) {
    if (!(d.sigma2[i] > 0.0))
      throw DegenerateError("continuous evidence on a variable with zero variance is undefined");
    f.table[i] = normal_pdf(y, d.alpha[i], d.sigma2[i]);
  }
  note(f);
  return f;
}

// ---------------------------------------------------------------------------
// Potentials

std::set<VariableId> discrete_domain(const Potential& p) {
  std::set<VariableId> out;
  for (const auto& f : p.factors)
    for (VariableId v : f.scope().vars) out.insert(v);
  for (const auto& d : p.densities) out.insert(d.discrete_tail.vars.begin(), d.discrete_tail.vars.end());
  return out;
}

std::set<VariableId> continuous_domain(const Potential& p) {
  std::set<VariableId> out;
  for (const auto& d : p.densities) {
    out.insert(d.head);
    out.insert(d.continuous_tail.begin(), d.continuous_tail.end());
  }
  return out;
}

Potential combine(const Potential& a, const Potential& b) {
  Potential out = a;
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  out.densities.insert(out.densities.end(), b.densities.begin(), b.densities.end());
  return out;
}

Potential remove_barren(Potential p, const std::set<VariableId>& targets, const Evidence& evidence) {
  auto protected_var = [&](VariableId v) { return targets.contains(v) || evidence.contains(v); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < p.densities.size(); ++i) {
      const VariableId h = p.densities[i].head;
      if (protected_var(h)) continue;
      const bool in_tail = std::any_of(p.densities.begin(), p.densities.end(), [&](const Density& o) {
        return o.has_continuous_parent(h);
      });
      if (in_tail) continue;
      p.densities.erase(p.densities.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
      break;
    }
    if (changed) continue;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
      if (!p.factors[i].head) continue;
      const VariableId h = *p.factors[i].head;
      if (protected_var(h)) continue;
      bool used = false;
      for (std::size_t j = 0; j < p.factors.size() && !used; ++j)
        used = j != i && p.factors[j].mentions(h);
      for (const auto& d : p.densities) used = used || d.discrete_tail.contains(h);
      if (used) continue;
      p.factors.erase(p.factors.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
      break;
    }
  }
  return p;
}

double contract(const Potential& p, const Assignment& point) {
  auto discrete_state = [&](VariableId v) {
    auto it = point.discrete.find(v);
    if (it == point.discrete.end()) throw DataError("contraction point misses a discrete variable");
    return it->second;
  };
  double value = 1.0;
  for (const auto& f : p.factors) {
    const Domain scope = f.scope();
    std::vector<std::size_t> states;
    for (VariableId v : scope.vars) states.push_back(discrete_state(v));
    value *= f.table[encode_index(scope, states)];
  }
  for (const auto& d : p.densities) {
    std::vector<std::size_t> states;
    for (VariableId v : d.discrete_tail.vars) states.push_back(discrete_state(v));
    const std::size_t i = encode_index(d.discrete_tail, states);
    double mean = d.alpha[i];
    for (std::size_t k = 0; k < d.arity(); ++k) {
      auto it = point.continuous.find(d.continuous_tail[k]);
      if (it == point.continuous.end()) throw DataError("contraction point misses a continuous variable");
      mean += d.coefficient(i, k) * it->second;
    }
    auto y = point.continuous.find(d.head);
    if (y == point.continuous.end()) throw DataError("contraction point misses a continuous variable");
    value *= normal_pdf(y->second, mean, d.sigma2[i]);
  }
  return value;
}

Factor multiply(std::span<const Factor> factors) {
  Factor out;
  Domain all;
  for (const auto& f : factors) {
    all = Domain::sorted_union(all, f.scope());
    out.evidence.insert(out.evidence.end(), f.evidence.begin(), f.evidence.end());
  }
  out.evidence = sorted_unique(std::move(out.evidence));
  out.tail = all;
  out.table.assign(all.size(), 1.0);
  for (const auto& f : factors) {
    const auto idx = embed_indices(all, f.scope());
    for (std::size_t i = 0; i < idx.size(); ++i) out.table[i] *= f.table[idx[i]];
  }
  note(out);
  return out;
}

Factor sum_out(const Factor& f, VariableId x) {
  const Domain scope = f.scope();
  Factor out;
  out.evidence = f.evidence;
  out.tail = scope.without(x).sorted();
  out.table.assign(out.tail.size(), 0.0);
  const auto idx = embed_indices(scope, out.tail);
  for (std::size_t i = 0; i < idx.size(); ++i) out.table[idx[i]] += f.table[i];
  note(out);
  return out;
}

std::vector<double> marginal_table(std::span<const Factor> factors, const Domain& target) {
  Domain all = target.sorted();
  for (const auto& f : factors) all = Domain::sorted_union(all, f.scope());
  metrics::note_table(all.size(), all.size() * sizeof(double));
  std::vector<double> product(all.size(), 1.0);
  for (const auto& f : factors) {
    const auto idx = embed_indices(all, f.scope());
    for (std::size_t i = 0; i < idx.size(); ++i) product[i] *= f.table[idx[i]];
  }
  std::vector<double> out(target.size(), 0.0);
  const auto to_target = embed_indices(all, target);
  for (std::size_t i = 0; i < product.size(); ++i) out[to_target[i]] += product[i];
  return out;
}

std::vector<Factor> eliminate_discrete(std::vector<Factor> relevant, VariableId x, const Ranking* ranking) {
  auto own_it = std::find_if(relevant.begin(), relevant.end(),
                             [&](const Factor& f) { return f.head && *f.head == x; });
  if (own_it == relevant.end()) {
    if (relevant.empty()) return {};
    return {sum_out(multiply(relevant), x)};
  }
  Factor own = *own_it;
  relevant.erase(own_it);

  std::vector<Factor> children, rest;
  for (auto& f : relevant) {
    if (f.head && f.tail.contains(x)) children.push_back(std::move(f));
    else rest.push_back(std::move(f));
  }
  std::vector<VariableId> heads;
  for (const auto& c : children) heads.push_back(*c.head);
  if (ranking) {
    std::sort(heads.begin(), heads.end(),
              [&](VariableId a, VariableId b) { return (*ranking)[a] < (*ranking)[b]; });
  } else {
    heads = local_order(heads, [&](VariableId h) {
      for (const auto& c : children)
        if (*c.head == h) return c.tail.vars;
      return std::vector<VariableId>{};
    });
  }
  std::vector<Factor> out;
  for (VariableId h : heads) {
    auto it = std::find_if(children.begin(), children.end(), [&](const Factor& c) { return *c.head == h; });
    auto [reversed_child, reversed_own] = exchange_discrete(*it, own);
    own = std::move(reversed_own);
    out.push_back(std::move(reversed_child));
  }
  if (!rest.empty()) {
    rest.push_back(std::move(own));
    out.push_back(sum_out(multiply(rest), x));
  }
  return out;
}

namespace {

void eliminate_continuous(Potential& p, VariableId w, const Ranking* ranking) {
  auto own_it = std::find_if(p.densities.begin(), p.densities.end(),
                             [&](const Density& d) { return d.head == w; });
  std::vector<VariableId> child_heads;
  for (const auto& d : p.densities)
    if (d.has_continuous_parent(w)) child_heads.push_back(d.head);
  if (own_it == p.densities.end()) {
    if (!child_heads.empty())
      throw InternalError("cannot eliminate a continuous variable whose density is not in the potential");
    return;
  }
  Density own = *own_it;
  p.densities.erase(own_it);

  if (ranking) {
    std::sort(child_heads.begin(), child_heads.end(),
              [&](VariableId a, VariableId b) { return (*ranking)[a] < (*ranking)[b]; });
  } else {
    child_heads = local_order(child_heads, [&](VariableId h) {
      for (const auto& d : p.densities)
        if (d.head == h) return d.continuous_tail;
      return std::vector<VariableId>{};
    });
  }
  for (VariableId h : child_heads) {
    auto it = std::find_if(p.densities.begin(), p.densities.end(), [&](const Density& d) { return d.head == h; });
    auto [child, reversed] = exchange_continuous(*it, own);
    *it = std::move(child);
    own = std::move(reversed);
  }
  // `own` now heads a density appearing in no tail: barren, integrates to one.
}

std::size_t continuous_cost(const Potential& p, VariableId w) {
  std::set<VariableId> vars;
  for (const auto& d : p.densities) {
    if (d.head != w && !d.has_continuous_parent(w)) continue;
    if (d.head != w) vars.insert(d.head);
    vars.insert(d.continuous_tail.begin(), d.continuous_tail.end());
    vars.insert(d.discrete_tail.vars.begin(), d.discrete_tail.vars.end());
  }
  vars.erase(w);
  return vars.size();
}

std::size_t discrete_cost(const Potential& p, VariableId x) {
  Domain all;
  for (const auto& f : p.factors)
    if (f.mentions(x)) all = Domain::sorted_union(all, f.scope());
  return all.size() / std::max<std::size_t>(1, all.contains(x) ? all.states_of(x) : 1);
}

}  // namespace

Potential project(const Potential& input, const std::set<VariableId>& keep, const Evidence& evidence,
                  const Ranking* ranking) {
  Potential p = input;
  for (;;) {
    std::optional<VariableId> best;
    std::size_t best_cost = 0;
    bool pending = false;
    for (VariableId w : continuous_domain(p)) {
      if (keep.contains(w)) continue;
      pending = true;
      // A tail variable without its own density can only vanish once its
      // children are gone.
      const bool owned = std::any_of(p.densities.begin(), p.densities.end(),
                                     [&](const Density& d) { return d.head == w; });
      if (!owned) continue;
      const std::size_t cost = continuous_cost(p, w);
      if (!best || cost < best_cost) {
        best = w;
        best_cost = cost;
      }
    }
    if (!best) {
      if (pending) throw InternalError("projection needs a continuous density that is not in the potential");
      break;
    }
    eliminate_continuous(p, *best, ranking);
  }
  for (;;) {
    std::optional<VariableId> best;
    std::size_t best_cost = 0;
    for (VariableId x : discrete_domain(p)) {
      if (keep.contains(x)) continue;
      const std::size_t cost = discrete_cost(p, x);
      if (!best || cost < best_cost) {
        best = x;
        best_cost = cost;
      }
    }
    if (!best) break;
    const VariableId x = *best;
    for (const auto& d : p.densities)
      if (d.discrete_tail.contains(x))
        throw InternalError("discrete variable to eliminate conditions a remaining density");
    std::vector<Factor> relevant, others;
    for (auto& f : p.factors) (f.mentions(x) ? relevant : others).push_back(std::move(f));
    auto reduced = eliminate_discrete(std::move(relevant), x, ranking);
    others.insert(others.end(), std::make_move_iterator(reduced.begin()), std::make_move_iterator(reduced.end()));
    p.factors = std::move(others);
  }
  return remove_barren(std::move(p), keep, evidence);
}

// ---------------------------------------------------------------------------
// Printing

std::string describe(const Factor& f, const Network& net) {
  if (f.head) {
    std::string s = "P(" + net.variable(*f.head).name;
    if (f.tail.arity() > 0) s += "|" + join_names(net, f.tail.vars, false);
    return s + ")";
  }
  if (!f.evidence.empty()) {
    std::string s = "p(" + join_names(net, f.evidence, true);
    if (f.tail.arity() > 0) s += "|" + join_names(net, f.tail.vars, false);
    return s + ")";
  }
  return "phi(" + join_names(net, f.tail.vars, false) + ")";
}

std::string describe(const Density& d, const Network& net) {
  std::string s = "f(" + net.variable(d.head).name;
  std::vector<std::string> parts;
  if (d.discrete_tail.arity() > 0) parts.push_back(join_names(net, d.discrete_tail.vars, false));
  if (!d.continuous_tail.empty()) parts.push_back(join_names(net, d.continuous_tail, false));
  if (!d.instantiated.empty()) parts.push_back(join_names(net, d.instantiated, true));
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i == 0 ? "|" : ",") + parts[i];
  return s + ")";
}

std::vector<std::string> describe(const Potential& p, const Network& net) {
  std::vector<std::string> out;
  for (const auto& f : p.factors) out.push_back(describe(f, net));
  for (const auto& d : p.densities) out.push_back(describe(d, net));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace clg
