#include "ecc/energy.hpp"

#include <algorithm>

#include "ecc/examine.hpp"

namespace ecc {

RadioTime chain_radio_time(const DerivedModel& model, const Chain& chain, double busy_ccas) {
  RadioTime rt;
  if (chain.empty()) return rt;
  const auto& tm = model.timing();
  const auto events = chain.events();
  const auto senders = chain.transmitters();
  double alive = 0.0;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    if (e.kind == EventKind::Success) {
      rt.rx += static_cast<double>(tm.d_cca + tm.d_ack);
      rt.tx += static_cast<double>(tm.d_tx);
      alive += static_cast<double>(e.finish);
    } else {
      rt.rx += senders[k] * static_cast<double>(tm.d_cca + model.d_to);
      rt.tx += senders[k] * static_cast<double>(tm.d_tx);
    }
  }
  const double f_m = static_cast<double>(chain.last().finish);
  const double residual = model.n_nodes() - chain.n_success();
  rt.rx += residual * busy_ccas * static_cast<double>(tm.d_cca);
  alive += residual * f_m;
  rt.idle = std::max(alive - rt.rx - rt.tx, 0.0);
  rt.off = std::max(model.n_nodes() * f_m - alive, 0.0);
  return rt;
}

double radio_energy(const DerivedModel& model, const RadioTime& t) {
  const auto& en = model.energy();
  const double milliamp_symbols =
      en.rx_ma * t.rx + en.tx_ma * t.tx + en.idle_ma * t.idle + en.off_ma * t.off;
  return en.volt * model.to_seconds(milliamp_symbols) * 1e-3;
}

double chain_energy(const DerivedModel& model, const Chain& chain, double busy_ccas) {
  return radio_energy(model, chain_radio_time(model, chain, busy_ccas));
}

double chain_energy(const DerivedModel& model, const Chain& chain) {
  if (chain.empty()) return 0.0;
  return chain_energy(model, chain, examine(model, chain).busy_ccas);
}

}  // namespace ecc
