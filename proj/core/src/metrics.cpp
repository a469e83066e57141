#include "clg/metrics.hpp"

#include <algorithm>
#include <string>

#include "clg/error.hpp"

namespace clg::metrics {
namespace {
thread_local Snapshot state;
thread_local std::optional<std::size_t> byte_budget;
}  // namespace

void reset() { state = {}; }
Snapshot current() { return state; }

void note_table(std::size_t configurations, std::size_t bytes) {
  if (byte_budget && bytes > *byte_budget)
    throw OutOfMemoryError("table of " + std::to_string(bytes) + " bytes exceeds budget of " +
                           std::to_string(*byte_budget));
  state.largest_configuration = std::max(state.largest_configuration, configurations);
  ++state.tables;
}

void set_budget(std::optional<std::size_t> bytes) { byte_budget = bytes; }
std::optional<std::size_t> budget() { return byte_budget; }

}  // namespace clg::metrics
