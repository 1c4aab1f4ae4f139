#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ecc/engine.hpp"
#include "ecc/params.hpp"

namespace ecc {

struct MetricsReport {
  int n_nodes = 0;
  double theta = 0.0;
  double coverage = 0.0;                 // C
  double delivery_ratio = 0.0;           // R, fraction
  std::map<Instant, double> latency_pdf; // P(t), t = success finish in symbols
  double latency_mean_s = 0.0;           // L
  double energy_j = 0.0;                 // E
  std::uint64_t chain_count = 0;
  double wall_time_s = 0.0;
  double expected_successes = 0.0;       // sum of p_c * N_s(c)
};

/// Throws EmptyChainSet when `chains` is empty.
MetricsReport compute_metrics(const DerivedModel& model, const std::vector<FinalChain>& chains,
                              double wall_time_s = 0.0);

MetricsReport compute_metrics(const DerivedModel& model, const EccResult& result);

/// Slot with the largest P(t), in symbols.
Instant latency_mode(const MetricsReport& report);

}  // namespace ecc
