#pragma once

#include <cstdint>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecc/metrics.hpp"
#include "ecc/simulator.hpp"

namespace ecc {

using Rational = boost::multiprecision::cpp_rational;

struct ExactOutcome {
  Rational prob;
  double energy_j = 0.0;  // mean over the leaves that produced this outcome
};

struct ExactDistribution {
  std::map<OutcomeKey, ExactOutcome> outcomes;
  std::uint64_t leaves = 0;

  Rational total() const;
};

/// Walks every joint assignment of backoff draws and returns the exact
/// distribution of event sequences. Throws TreeTooLarge once more than
/// `max_leaves` leaves would be visited.
ExactDistribution enumerate_exact(const DerivedModel& model,
                                  std::uint64_t max_leaves = 10'000'000);

/// Metrics of an exact distribution (coverage 1, chain_count = outcomes).
MetricsReport exact_metrics(const DerivedModel& model, const ExactDistribution& dist);

}  // namespace ecc
