#pragma once

#include <vector>

#include "ecc/chain.hpp"
#include "ecc/params.hpp"
#include "ecc/schedule.hpp"

namespace ecc {

/// Channel state implied by a chain, on the slot grid up to the end of the
/// window in which the next event can start.
struct ChannelHistory {
  EventKind last_kind = EventKind::Success;
  Instant t_m = 0;       // start of the last event (slots)
  Instant f_m = 0;       // finish of the last event (slots)
  Instant s_max = 0;     // last slot at which a residual node can still CCA
  std::vector<std::uint8_t> busy;        // indexed by slot, size s_max + 1
  std::vector<std::uint8_t> fail_start;  // indexed by slot, size s_max + 1

  bool busy_at(Instant slot) const { return slot <= s_max && busy[static_cast<std::size_t>(slot)]; }
  bool fail_start_at(Instant slot) const {
    return slot <= s_max && fail_start[static_cast<std::size_t>(slot)];
  }
  /// A residual node may have performed a CCA at `slot` without
  /// contradicting the chain.
  bool feasible(Instant slot) const { return slot >= f_m || busy_at(slot) || fail_start_at(slot); }
};

/// Largest number of slots after f_m at which an active node can still CCA.
Instant max_wait_slots(const DerivedModel& model, EventKind last);

ChannelHistory channel_history(const DerivedModel& model, const Chain& chain);

/// Instants (symbols) before f_m at which no surviving node can have
/// performed a CCA.
InstantSet infeasible_set(const DerivedModel& model, const Chain& chain);

/// P{CCA_ij^t | c} for one residual node, over slots [0, s_max].
///
/// Retry CCAs that follow the last event (when it is a failure) are kept
/// apart in `participant`; `main` then holds only nodes that did not take
/// part in it. Probability that reaches a CCA instant with no feasible
/// continuation is dropped and the whole table renormalised.
class CondCcaTable {
 public:
  CondCcaTable(const DerivedModel& model, const Chain& chain);

  const ChannelHistory& history() const { return hist_; }
  int b_max() const { return b_max_; }
  int t_max() const { return t_max_; }
  Instant d_bp() const { return d_bp_; }

  /// Arguments in symbols; zero off the table.
  double at(StateIndex s, Instant t) const;
  double marginal(Instant t) const;
  /// Marginal restricted to nodes that did not take part in the last event.
  double nonparticipant(Instant t) const;

  // Slot-indexed raw access.
  double main_slot(int stage, int attempt, Instant slot) const {
    return main_[offset(stage, attempt) + static_cast<std::size_t>(slot)];
  }
  double participant_slot(Instant slot) const { return participant_[static_cast<std::size_t>(slot)]; }
  double main_marginal_slot(Instant slot) const;

  /// Probability mass removed by the renormalisation, in [0, 1].
  double leaked() const { return leaked_; }

 private:
  std::size_t offset(int stage, int attempt) const {
    return static_cast<std::size_t>((attempt - 1) * b_max_ + (stage - 1)) * width_;
  }

  ChannelHistory hist_;
  int b_max_;
  int t_max_;
  Instant d_bp_;
  std::size_t width_;
  std::vector<double> main_;
  std::vector<double> participant_;
  double leaked_ = 0.0;
};

/// Fate of one residual node conditioned on the chain.
struct Residuals {
  double p_fcca = 0.0;       // gave up after B_max busy CCAs
  double p_frtx = 0.0;       // gave up after T_max failed attempts
  double p_frtx_last = 0.0;  // part of p_frtx: gave up in the last event
  double p_ap = 0.0;         // active, took part in the last event
  double p_anp = 0.0;        // active, did not take part in the last event

  double p_dropped() const { return p_fcca + p_frtx; }
  double sum() const { return p_fcca + p_frtx + p_ap + p_anp; }
};

/// Throws NormalizationViolation when the four probabilities do not add up
/// to one within 1e-6.
Residuals residual_probs(const DerivedModel& model, const Chain& chain, const CondCcaTable& table);

/// P{N_p, N_np | c} for every composition, as a (N_r+1) x (N_r+1) matrix
/// indexed [n_p][n_np]; n_d is implied.
class CompositionWeights {
 public:
  CompositionWeights(EventKind last, int n_r, const Residuals& r);

  int n_r() const { return n_r_; }
  double operator()(int n_p, int n_np) const {
    return w_[static_cast<std::size_t>(n_p) * static_cast<std::size_t>(n_r_ + 1) +
              static_cast<std::size_t>(n_np)];
  }

 private:
  int n_r_;
  std::vector<double> w_;
};

double composition_prob(const DerivedModel& model, const Chain& chain, const Residuals& r,
                        const NodeComposition& comp);

double no_txs_prob(const DerivedModel& model, const Chain& chain, const Residuals& r);

struct NextEvent {
  Event event;
  double prob = 0.0;
  double transmitters = 1.0;  // expected, given the event
};

std::vector<NextEvent> next_event_probs(const DerivedModel& model, const Chain& chain,
                                        const CondCcaTable& table, const Residuals& r);

/// First events of the network, with every node in its first backoff.
std::vector<NextEvent> initial_events(const DerivedModel& model);

/// Everything the engine needs from one chain.
struct Examination {
  double no_txs = 1.0;
  std::vector<NextEvent> next;
  Residuals residuals;
  double busy_ccas = 0.0;  // expected busy-channel CCAs per residual node
  double leaked = 0.0;
  double conservation_error = 0.0;
  double residual_error = 0.0;
};

Examination examine(const DerivedModel& model, const Chain& chain);

}  // namespace ecc
