#include "clg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include <json.hpp>

#include "clg/engine.hpp"
#include "clg/error.hpp"
#include "clg/jtree.hpp"
#include "clg/metrics.hpp"

namespace clg {
namespace {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const char* kColumns = "network,size,fraction,evidence,propagate_ms,marginals_ms,max_config,max_components,status";

}  // namespace

BenchConfig parse_bench_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed bench config: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("bench config must be a JSON object");
  BenchConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "sizes") c.sizes = value.get<std::vector<std::size_t>>();
      else if (key == "fractions") c.fractions = value.get<std::vector<double>>();
      else if (key == "nets_per_cell") c.nets_per_cell = value.get<std::size_t>();
      else if (key == "evidence_sizes") {
        const auto r = value.get<std::vector<std::size_t>>();
        if (r.size() < 2 || r.size() > 3) throw DataError("evidence_sizes must be [min, max] or [min, max, step]");
        c.min_evidence = r[0];
        c.max_evidence = r[1];
        if (r.size() == 3) c.evidence_step = r[2];
      } else if (key == "sets_per_size") c.sets_per_size = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "max_parents") c.max_parents = value.get<std::size_t>();
      else if (key == "repetitions") c.repetitions = value.get<std::size_t>();
      else if (key == "memory_budget") c.memory_budget = value.get<std::size_t>();
      else throw DataError("unknown bench config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad bench config: ") + e.what());
  }
  for (double f : c.fractions)
    if (!(f >= 0.0 && f <= 1.0)) throw DataError("fractions must lie in [0, 1]");
  if (c.nets_per_cell < 1 || c.sets_per_size < 1 || c.evidence_step < 1 || c.repetitions < 1)
    throw DataError("bench counts must be at least 1");
  if (c.min_evidence > c.max_evidence) throw DataError("evidence_sizes min exceeds max");
  return c;
}

Network generate_network(std::size_t n, double fraction, std::uint64_t seed, std::size_t max_parents) {
  if (n < 1 || !(fraction >= 0.0 && fraction <= 1.0)) throw DataError("generate_network needs n >= 1 and 0 <= frac <= 1");
  std::mt19937_64 rng(seed);
  const auto n_cont = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

  std::vector<VariableId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);  // ids[0..n_cont) are continuous
  std::vector<bool> continuous(n, false);
  for (std::size_t i = 0; i < n_cont; ++i) continuous[ids[i]] = true;
  std::vector<VariableId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  Network net;
  net.variables.resize(n);
  net.parents.resize(n);
  for (VariableId v = 0; v < n; ++v) {
    auto& var = net.variables[v];
    var.id = v;
    var.kind = continuous[v] ? VariableKind::continuous : VariableKind::discrete;
    var.name = (continuous[v] ? "Y" : "X") + std::to_string(v);
    if (!continuous[v]) {
      const std::size_t states = 2 + uniform_index(rng, 2);
      for (std::size_t s = 0; s < states; ++s) var.states.push_back("s" + std::to_string(s));
    }
  }
  std::uniform_real_distribution<double> alpha(-2.0, 2.0), beta(-1.0, 1.0), sigma2(0.1, 2.0);
  std::exponential_distribution<double> gamma1(1.0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const VariableId v = order[pos];
    std::vector<VariableId> admissible;
    for (std::size_t q = 0; q < pos; ++q)
      if (continuous[v] || !continuous[order[q]]) admissible.push_back(order[q]);
    const std::size_t want = std::min(uniform_index(rng, max_parents + 1), admissible.size());
    std::shuffle(admissible.begin(), admissible.end(), rng);
    net.parents[v].assign(admissible.begin(), admissible.begin() + static_cast<std::ptrdiff_t>(want));
    std::sort(net.parents[v].begin(), net.parents[v].end());

    std::size_t rows = 1;
    std::vector<VariableId> disc, cont;
    for (VariableId p : net.parents[v]) {
      if (continuous[p]) {
        cont.push_back(p);
      } else {
        disc.push_back(p);
        rows *= net.state_count(p);
      }
    }
    if (!continuous[v]) {
      const std::size_t hs = net.state_count(v);
      CptSpec cpt{v, net.parents[v], {}};
      for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> col(hs);
        double sum = 0.0;
        for (double& x : col) sum += (x = gamma1(rng));
        for (double x : col) cpt.table.push_back(x / sum);
      }
      net.cpts.push_back(std::move(cpt));
    } else {
      ClgSpec d{v, disc, cont, {}, {}, {}};
      for (std::size_t r = 0; r < rows; ++r) {
        d.alpha.push_back(alpha(rng));
        std::vector<double> b(cont.size());
        for (double& x : b) x = beta(rng);
        d.beta.push_back(std::move(b));
        d.sigma2.push_back(sigma2(rng));
      }
      net.densities.push_back(std::move(d));
    }
  }
  return net;
}

Evidence generate_evidence(const Network& net, std::size_t k, std::uint64_t seed) {
  if (k > net.size()) throw DataError("more evidence items than variables");
  std::mt19937_64 rng(seed);
  std::vector<VariableId> ids(net.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(k);

  std::vector<std::size_t> state(net.size(), 0);
  std::vector<double> value(net.size(), 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto row_of = [&](const std::vector<VariableId>& tail) {
    std::size_t r = 0;
    for (VariableId p : tail) r = r * net.state_count(p) + state[p];
    return r;
  };
  for (VariableId v : net.topological_order()) {
    if (net.is_discrete(v)) {
      const auto* cpt = net.cpt_of(v);
      const std::size_t hs = net.state_count(v);
      const std::size_t base = row_of(cpt->tail) * hs;
      double u = unit(rng);
      std::size_t s = 0;
      while (s + 1 < hs && u >= cpt->table[base + s]) u -= cpt->table[base + s++];
      state[v] = s;
    } else {
      const auto* d = net.density_of(v);
      const std::size_t r = row_of(d->discrete_tail);
      double mean = d->alpha[r];
      for (std::size_t j = 0; j < d->continuous_tail.size(); ++j) mean += d->beta[r][j] * value[d->continuous_tail[j]];
      value[v] = std::normal_distribution<double>(mean, std::sqrt(d->sigma2[r]))(rng);
    }
  }
  Evidence e;
  for (VariableId v : ids) {
    if (net.is_discrete(v)) e.discrete[v] = state[v];
    else e.continuous[v] = value[v];
  }
  return e;
}

BenchRecord run_single(const Network& net, const std::string& name, const Evidence& evidence,
                       std::size_t repetitions, std::optional<std::size_t> memory_budget) {
  using clock = std::chrono::steady_clock;
  BenchRecord rec;
  rec.network = name;
  rec.size = net.size();
  rec.fraction = net.size() ? static_cast<double>(net.continuous_ids().size()) / static_cast<double>(net.size()) : 0.0;
  rec.evidence = evidence.size();
  try {
    const auto tree = compile(net);
    rec.max_clique = tree_stats(tree, net).max;
    metrics::ScopedBudget guard(memory_budget);
    std::vector<double> prop_ms, marg_ms;
    for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repetitions); ++rep) {
      metrics::reset();
      const auto t0 = clock::now();
      TreeState state = propagate(tree, net, evidence);
      const auto t1 = clock::now();
      if (rep == 0) rec.max_config = metrics::current().largest_configuration;
      for (VariableId v = 0; v < net.size(); ++v) {
        if (evidence.contains(v)) continue;
        if (net.is_discrete(v)) {
          (void)state.query_discrete(v);
        } else {
          rec.max_components = std::max(rec.max_components, state.query_continuous(v).components.size());
        }
      }
      const auto t2 = clock::now();
      prop_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      marg_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
    }
    rec.propagate_ms = median(prop_ms);
    rec.marginals_ms = median(marg_ms);
  } catch (const OutOfMemoryError&) {
    rec.status = "out-of-memory";
  } catch (const Error&) {
    rec.status = "error";
  }
  return rec;
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  std::vector<BenchRecord> records;
  for (std::size_t size : config.sizes) {
    for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
      const double frac = config.fractions[fi];
      for (std::size_t j = 0; j < config.nets_per_cell; ++j) {
        const std::uint64_t net_seed = derive_seed({config.seed, size, fi, j});
        const Network net = generate_network(size, frac, net_seed, config.max_parents);
        const std::string name = "n" + std::to_string(size) + "-f" + fmt("%g", frac) + "-" + std::to_string(j);
        for (std::size_t k = config.min_evidence; k <= std::min(config.max_evidence, size); k += config.evidence_step) {
          for (std::size_t s = 0; s < config.sets_per_size; ++s) {
            const Evidence ev = generate_evidence(net, k, derive_seed({net_seed, k, s}));
            BenchRecord rec = run_single(net, name, ev, config.repetitions, config.memory_budget);
            rec.fraction = frac;
            records.push_back(std::move(rec));
          }
        }
      }
    }
  }
  return records;
}

void write_runs_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "schema=1\n" << kColumns << "\n";
  for (const auto& r : records) {
    out << r.network << ',' << r.size << ',' << fmt("%g", r.fraction) << ',' << r.evidence << ','
        << fmt("%.6f", r.propagate_ms) << ',' << fmt("%.6f", r.marginals_ms) << ',' << r.max_config << ','
        << r.max_components << ',' << r.status << '\n';
  }
}

void write_agg_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  struct Sum {
    std::size_t runs = 0, ok = 0;
    double prop = 0, marg = 0, config = 0, comps = 0;
  };
  std::map<std::tuple<std::size_t, double, std::size_t>, Sum> cells;
  for (const auto& r : records) {
    auto& s = cells[{r.size, r.fraction, r.evidence}];
    ++s.runs;
    if (r.status != "ok") continue;
    ++s.ok;
    s.prop += r.propagate_ms;
    s.marg += r.marginals_ms;
    s.config += static_cast<double>(r.max_config);
    s.comps += static_cast<double>(r.max_components);
  }
  out << "schema=1\n" << kColumns << "\n";
  for (const auto& [key, s] : cells) {
    const auto& [size, frac, ev] = key;
    const double n = s.ok ? static_cast<double>(s.ok) : 1.0;
    out << "mean" << ',' << size << ',' << fmt("%g", frac) << ',' << ev << ',' << fmt("%.6f", s.prop / n) << ','
        << fmt("%.6f", s.marg / n) << ',' << fmt("%.4f", s.config / n) << ',' << fmt("%.4f", s.comps / n) << ','
        << (s.ok == s.runs ? std::string("ok") : "ok=" + std::to_string(s.ok) + "/" + std::to_string(s.runs))
        << '\n';
  }
}

std::optional<std::size_t> memory_budget_from_env() {
  const char* raw = std::getenv("CLG_LAZY_MEM_BUDGET");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0') throw DataError("CLG_LAZY_MEM_BUDGET must be a byte count");
  return static_cast<std::size_t>(v);
}

}  // namespace clg
