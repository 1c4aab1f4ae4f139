#pragma once

#include "ecc/chain.hpp"
#include "ecc/params.hpp"

namespace ecc {

/// Radio time, in symbols, summed over all nodes.
struct RadioTime {
  double rx = 0.0;
  double tx = 0.0;
  double idle = 0.0;
  double off = 0.0;
};

/// Expected radio occupancy of all N nodes over a finalised chain.
///
/// Transmitters of a success listen for the CCA and the ACK and send the
/// frame; every node of a collision listens for the CCA and the ACK timeout
/// and sends the frame. Residual nodes add `busy_ccas` listening CCAs each.
/// Time a node is alive (until its delivery, or until the last event for
/// the others) and not otherwise accounted for is idle; the rest of the
/// chain's span is off.
RadioTime chain_radio_time(const DerivedModel& model, const Chain& chain, double busy_ccas);

/// Energy in joules of chain_radio_time under the model's current draws.
double chain_energy(const DerivedModel& model, const Chain& chain, double busy_ccas);

/// Same, computing the residual CCA count from the chain itself.
double chain_energy(const DerivedModel& model, const Chain& chain);

double radio_energy(const DerivedModel& model, const RadioTime& time);

}  // namespace ecc
