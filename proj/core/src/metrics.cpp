#include "ecc/metrics.hpp"

#include "ecc/error.hpp"
#include "kahan.hpp"

namespace ecc {

using detail::KahanSum;

MetricsReport compute_metrics(const DerivedModel& model, const std::vector<FinalChain>& chains,
                              double wall_time_s) {
  if (chains.empty()) throw Error(ErrorCode::EmptyChainSet, "no finalized chains to summarise");
  MetricsReport m;
  m.n_nodes = model.n_nodes();
  m.theta = model.theta();
  m.chain_count = chains.size();
  m.wall_time_s = wall_time_s;

  KahanSum coverage, delivered, energy;
  std::map<Instant, KahanSum> pdf;
  for (const auto& c : chains) {
    coverage += c.prob;
    delivered += c.prob * c.chain.n_success();
    energy += c.prob * c.energy;
    for (const auto& e : c.chain.events()) {
      if (e.kind == EventKind::Success) pdf[e.finish] += c.prob;
    }
  }
  m.coverage = coverage.value();
  m.expected_successes = delivered.value();
  m.delivery_ratio = m.expected_successes / m.coverage / m.n_nodes;
  m.energy_j = energy.value() / m.coverage;

  KahanSum mass, weighted;
  for (const auto& [t, p] : pdf) {
    m.latency_pdf[t] = p.value();
    mass += p.value();
    weighted += static_cast<double>(t) * p.value();
  }
  if (mass.value() > 0.0) m.latency_mean_s = model.to_seconds(weighted.value() / mass.value());
  return m;
}

MetricsReport compute_metrics(const DerivedModel& model, const EccResult& result) {
  return compute_metrics(model, result.chains, result.wall_time_s);
}

Instant latency_mode(const MetricsReport& report) {
  Instant best = 0;
  double best_p = -1.0;
  for (const auto& [t, p] : report.latency_pdf) {
    if (p > best_p) {
      best_p = p;
      best = t;
    }
  }
  return best;
}

}  // namespace ecc
