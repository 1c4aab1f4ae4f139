#pragma once

#include <vector>

#include "ecc/chain.hpp"
#include "ecc/params.hpp"

namespace ecc {

enum class NodeStatus : std::uint8_t { Active, Delivered, DroppedCca, DroppedRetry };

/// Per-node state plus the symbols it spent in each radio state.
struct NodeState {
  NodeStatus status = NodeStatus::Active;
  int stage = 1;    // backoff stage of the current attempt
  int attempt = 1;  // transmission attempt
  Instant next_cca = 0;
  Instant end = 0;  // delivery finish or drop instant
  Instant rx = 0;
  Instant tx = 0;
};

/// A backoff draw the run is waiting for: node `node` picks w uniformly in
/// [0, window) and performs its next CCA at base + w * d_bp.
struct PendingDraw {
  int node = 0;
  int window = 1;
  Instant base = 0;
};

/// Unslotted CSMA/CA with acknowledgements and retransmissions for N nodes
/// that all start contending at time 0, driven by externally supplied
/// backoff values. Timing follows make_event, so the events it produces
/// are directly comparable with analytical chains.
class ProtocolRun {
 public:
  explicit ProtocolRun(const DerivedModel& model);

  /// Draws required before the run can advance; empty once finished().
  const std::vector<PendingDraw>& pending() const { return pending_; }

  /// Resolves every pending draw (values[k] belongs to pending()[k]) and
  /// advances to the next point at which new draws are needed.
  void apply(const std::vector<int>& values);

  bool finished() const { return pending_.empty(); }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  int delivered() const;

  /// Latest instant any node was still alive.
  Instant horizon() const;

 private:
  void advance();
  bool channel_busy(Instant t) const;

  const DerivedModel* model_;
  std::vector<NodeState> nodes_;
  std::vector<Event> events_;
  std::vector<PendingDraw> pending_;
};

}  // namespace ecc
