#pragma once

#include <vector>

#include "ecc/params.hpp"

namespace ecc {

/// B_ij: performing the CCA of backoff stage `stage` within transmission
/// attempt `attempt`. Both indices are 1-based.
struct StateIndex {
  int stage = 1;
  int attempt = 1;

  friend bool operator==(const StateIndex&, const StateIndex&) = default;
};

/// Strictly increasing list of instants (symbols).
using InstantSet = std::vector<Instant>;

/// Unconditional CCA schedule of a single node: where it can possibly be
/// performing a CCA in each state B_ij, ignoring what the channel does.
/// All sets are built once at construction and never modified afterwards.
class Schedule {
 public:
  explicit Schedule(const DerivedModel& model);

  int b_max() const { return b_max_; }
  int t_max() const { return t_max_; }

  /// Lambda_ij.
  const InstantSet& lambda_set(StateIndex s) const;

  /// R_ij: CCA instants reachable after a failed transmission whose CCA was
  /// performed in state B_ij. Empty when `s.attempt == t_max`.
  const InstantSet& retransmission_set(StateIndex s) const;

  /// Omega_ij^t: instants at which the preceding CCA may have happened when
  /// the node performs a CCA at `t` in state `s`.
  InstantSet omega_set(Instant t, StateIndex s) const;

  bool contains(StateIndex s, Instant t) const;

  /// Largest instant of any Lambda_ij.
  Instant horizon() const { return horizon_; }

 private:
  std::size_t index(StateIndex s) const;

  int b_max_;
  int t_max_;
  Instant d_bp_;
  Instant cca_step_;
  Instant d_rtx_;
  std::vector<int> w_;
  std::vector<InstantSet> lambda_;
  std::vector<InstantSet> retx_;
  Instant horizon_ = 0;
};

}  // namespace ecc
