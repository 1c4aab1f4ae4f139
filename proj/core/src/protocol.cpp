#include "ecc/protocol.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ecc {

ProtocolRun::ProtocolRun(const DerivedModel& model) : model_(&model) {
  nodes_.resize(static_cast<std::size_t>(model.n_nodes()));
  for (int k = 0; k < model.n_nodes(); ++k) pending_.push_back({k, model.w.front(), 0});
}

void ProtocolRun::apply(const std::vector<int>& values) {
  if (values.size() != pending_.size()) throw std::invalid_argument("draw count mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& d = pending_[k];
    if (values[k] < 0 || values[k] >= d.window) throw std::invalid_argument("draw outside window");
    nodes_[static_cast<std::size_t>(d.node)].next_cca = d.base + values[k] * model_->d_bp();
  }
  pending_.clear();
  advance();
}

bool ProtocolRun::channel_busy(Instant t) const {
  if (events_.empty()) return false;
  const auto& e = events_.back();
  return t >= e.start + model_->d_bp() && t < e.finish;
}

void ProtocolRun::advance() {
  const auto& m = *model_;
  const auto& tm = m.timing();
  std::vector<int> group;
  while (pending_.empty()) {
    Instant t = std::numeric_limits<Instant>::max();
    for (const auto& n : nodes_) {
      if (n.status == NodeStatus::Active) t = std::min(t, n.next_cca);
    }
    if (t == std::numeric_limits<Instant>::max()) return;

    group.clear();
    for (int k = 0; k < static_cast<int>(nodes_.size()); ++k) {
      const auto& n = nodes_[static_cast<std::size_t>(k)];
      if (n.status == NodeStatus::Active && n.next_cca == t) group.push_back(k);
    }

    if (channel_busy(t)) {
      for (int k : group) {
        auto& n = nodes_[static_cast<std::size_t>(k)];
        n.rx += tm.d_cca;
        if (n.stage == m.b_max) {
          n.status = NodeStatus::DroppedCca;
          n.end = t + tm.d_cca;
        } else {
          ++n.stage;
          pending_.push_back({k, m.window(n.stage), t + m.cca_step});
        }
      }
    } else if (group.size() == 1) {
      auto& n = nodes_[static_cast<std::size_t>(group.front())];
      const auto e = make_event(m, EventKind::Success, t);
      events_.push_back(e);
      n.status = NodeStatus::Delivered;
      n.end = e.finish;
      n.rx += tm.d_cca + tm.d_ack;
      n.tx += tm.d_tx;
    } else {
      events_.push_back(make_event(m, EventKind::Failure, t));
      for (int k : group) {
        auto& n = nodes_[static_cast<std::size_t>(k)];
        n.rx += tm.d_cca + m.d_to;
        n.tx += tm.d_tx;
        if (n.attempt == m.t_max) {
          n.status = NodeStatus::DroppedRetry;
          n.end = t + m.d_rtx;
        } else {
          ++n.attempt;
          n.stage = 1;
          pending_.push_back({k, m.w.front(), t + m.d_rtx});
        }
      }
    }
  }
}

int ProtocolRun::delivered() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& n) {
    return n.status == NodeStatus::Delivered;
  }));
}

Instant ProtocolRun::horizon() const {
  Instant h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.end);
  return h;
}

}  // namespace ecc
