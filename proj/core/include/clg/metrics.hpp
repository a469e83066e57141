#pragma once

#include <cstddef>
#include <optional>

namespace clg::metrics {

// Per-thread bookkeeping of the discrete table sizes materialized by the
// algebra. A discrete configuration is either the domain of a factor or the
// discrete conditioning set of a density.
struct Snapshot {
  std::size_t largest_configuration = 0;
  std::size_t tables = 0;
};

void reset();
Snapshot current();

// Records a table with `configurations` discrete configurations and
// `bytes` of storage. Throws OutOfMemoryError when a budget is set and the
// table exceeds it.
void note_table(std::size_t configurations, std::size_t bytes);

// Byte budget for a single table; nullopt disables the guard.
void set_budget(std::optional<std::size_t> bytes);
std::optional<std::size_t> budget();

// RAII: installs a budget and restores the previous one on scope exit.
class ScopedBudget {
 public:
  explicit ScopedBudget(std::optional<std::size_t> bytes) : previous_(budget()) { set_budget(bytes); }
  ~ScopedBudget() { set_budget(previous_); }
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  std::optional<std::size_t> previous_;
};

}  // namespace clg::metrics
