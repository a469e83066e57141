#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clg/model.hpp"

namespace clg {

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<double> fractions;
  std::size_t nets_per_cell = 1;
  std::size_t min_evidence = 0;
  std::size_t max_evidence = 0;
  std::size_t evidence_step = 1;
  std::size_t sets_per_size = 1;
  std::uint64_t seed = 1;
  std::size_t max_parents = 3;
  std::size_t repetitions = 3;
  std::optional<std::size_t> memory_budget;  // bytes per table
};

// Throws DataError on unknown keys or values out of range.
BenchConfig parse_bench_config(const std::string& json_text);

struct BenchRecord {
  std::string network;
  std::size_t size = 0;
  double fraction = 0.0;
  std::size_t evidence = 0;
  double propagate_ms = 0.0;
  double marginals_ms = 0.0;
  std::size_t max_config = 0;      // largest discrete configuration during belief update
  std::size_t max_components = 0;  // largest posterior mixture
  std::string status = "ok";       // ok | out-of-memory | error
  std::size_t max_clique = 0;      // max s(C) of the compiled tree
};

Network generate_network(std::size_t n, double fraction, std::uint64_t seed, std::size_t max_parents = 3);
Evidence generate_evidence(const Network& net, std::size_t k, std::uint64_t seed);

// Compiles once, then propagates `evidence` and queries every unobserved
// variable `repetitions` times; timings are medians.
BenchRecord run_single(const Network& net, const std::string& name, const Evidence& evidence,
                       std::size_t repetitions = 3, std::optional<std::size_t> memory_budget = std::nullopt);

std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

void write_runs_csv(std::ostream& out, const std::vector<BenchRecord>& records);
// Means over successful runs keyed by (size, fraction, evidence).
void write_agg_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// CLG_LAZY_MEM_BUDGET in bytes, if set.
std::optional<std::size_t> memory_budget_from_env();

}  // namespace clg
