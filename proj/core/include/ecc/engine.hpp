#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <vector>

#include "ecc/chain.hpp"
#include "ecc/params.hpp"

namespace ecc {

/// An outcome of the network: a chain after which no further event occurs.
struct FinalChain {
  Chain chain;
  double prob = 0.0;    // path product times P{no_txs | c}
  double energy = 0.0;  // joules, all nodes
};

struct Progress {
  std::uint64_t examined = 0;
  std::uint64_t finalized = 0;
  std::uint64_t pending = 0;
  double elapsed_s = 0.0;
};

struct RunOptions {
  /// Called from a worker thread at most once per `progress_interval`.
  std::function<void(const Progress&)> progress;
  std::chrono::milliseconds progress_interval{1000};
};

struct EccResult {
  /// Sorted by event sequence, so identical for any worker count.
  std::vector<FinalChain> chains;
  std::uint64_t examined = 0;
  bool budget_exceeded = false;
  double max_conservation_error = 0.0;
  double max_residual_error = 0.0;
  std::uint64_t leaked_chains = 0;  // chains whose CCA table lost mass
  double wall_time_s = 0.0;
};

/// Expands chains depth-first from the initial events, pruning extensions
/// whose probability falls below theta, on `model.config.workers` threads.
/// Stops early with `budget_exceeded` set once `max_chains` chains have been
/// examined.
EccResult run_ecc(const DerivedModel& model, const RunOptions& options = {});

}  // namespace ecc
