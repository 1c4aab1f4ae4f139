#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ecc/energy.hpp"
#include "ecc/metrics.hpp"
#include "ecc/protocol.hpp"

namespace ecc {

/// Event sequence of one run as (kind, start) pairs.
using OutcomeKey = std::vector<std::pair<EventKind, Instant>>;

OutcomeKey outcome_key(const std::vector<Event>& events);

struct RunRecord {
  std::vector<Event> events;
  std::vector<NodeState> nodes;
  Instant horizon = 0;
  int delivered = 0;
  RadioTime radio;  // summed over nodes; off counted up to `horizon`
  double energy_j = 0.0;
};

struct SimOptions {
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool keep_histogram = true;
};

struct SimReport {
  /// Empirical metrics; coverage is 1 and chain_count the number of
  /// distinct outcomes observed (0 when the histogram is not kept).
  MetricsReport metrics;
  std::uint64_t runs = 0;
  double delivery_ratio_se = 0.0;
  double latency_mean_se_s = 0.0;
  double energy_se_j = 0.0;
  std::map<OutcomeKey, std::uint64_t> histogram;
};

/// Run `run_index` of the experiment seeded with `seed`; the result depends
/// on nothing else.
RunRecord simulate_run(const DerivedModel& model, std::uint64_t seed, std::uint64_t run_index);

SimReport simulate(const DerivedModel& model, const SimOptions& options);

}  // namespace ecc
