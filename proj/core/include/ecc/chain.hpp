#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ecc/params.hpp"

namespace ecc {

enum class EventKind : std::uint8_t { Success, Failure };

/// A transmission seen on the channel. `start` is the CCA instant of the
/// transmitter(s); `finish` is the first slot boundary at which another
/// event may start.
struct Event {
  EventKind kind = EventKind::Success;
  Instant start = 0;
  Instant finish = 0;

  friend auto operator<=>(const Event&, const Event&) = default;
};

Event make_event(const DerivedModel& model, EventKind kind, Instant start);

/// Residual nodes after a chain: active participants of the last event,
/// active non-participants, and nodes that have given up.
struct NodeComposition {
  int n_p = 0;
  int n_np = 0;
  int n_d = 0;

  int total() const { return n_p + n_np + n_d; }
  friend bool operator==(const NodeComposition&, const NodeComposition&) = default;
};

/// Immutable event sequence stored as a parent-linked list, so that
/// extending a chain is O(1) and siblings share their prefix.
class Chain {
 public:
  Chain() = default;

  /// Appends `e`. `transmitters` is the expected number of nodes that took
  /// part in it (1 for a success).
  Chain extend(const Event& e, double transmitters = 1.0) const;

  bool empty() const { return link_ == nullptr; }
  std::size_t size() const { return link_ ? link_->depth : 0; }
  int n_success() const { return link_ ? link_->n_success : 0; }
  const Event& last() const { return link_->event; }

  /// Events from first to last.
  std::vector<Event> events() const;

  /// Expected transmitters of each event, aligned with events().
  std::vector<double> transmitters() const;

  friend bool operator==(const Chain& a, const Chain& b) { return a.events() == b.events(); }

 private:
  struct Link {
    Event event;
    double transmitters;
    int n_success;
    std::size_t depth;
    std::shared_ptr<const Link> parent;
  };
  explicit Chain(std::shared_ptr<const Link> link) : link_(std::move(link)) {}

  std::shared_ptr<const Link> link_;
};

/// Lexicographic order on the event sequences.
bool chain_less(const Chain& a, const Chain& b);

/// `p=<prob> [S@t1 F@t2 ...]`, starts in symbols.
std::string format_chain(const Chain& chain, double prob);

struct ParsedChain {
  double prob = 0.0;
  std::vector<std::pair<EventKind, Instant>> events;
};

/// Inverse of format_chain (finish instants are not part of the text).
ParsedChain parse_chain_line(const std::string& line);

}  // namespace ecc
