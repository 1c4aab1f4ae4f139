#include "ecc/enumerator.hpp"

#include <chrono>

#include "ecc/error.hpp"
#include "ecc/protocol.hpp"

namespace ecc {

using boost::multiprecision::cpp_int;

Rational ExactDistribution::total() const {
  Rational sum = 0;
  for (const auto& [key, o] : outcomes) sum += o.prob;
  return sum;
}

namespace {

struct Walker {
  const DerivedModel& model;
  std::uint64_t max_leaves;
  ExactDistribution dist;
  std::map<OutcomeKey, double> energy_weighted;

  void leaf(const ProtocolRun& run, const cpp_int& denom) {
    if (++dist.leaves > max_leaves) {
      throw Error(ErrorCode::TreeTooLarge,
                  "joint backoff tree exceeds " + std::to_string(max_leaves) + " leaves");
    }
    RadioTime rt;
    const Instant horizon = run.horizon();
    for (const auto& n : run.nodes()) {
      rt.rx += static_cast<double>(n.rx);
      rt.tx += static_cast<double>(n.tx);
      rt.idle += static_cast<double>(n.end - n.rx - n.tx);
      rt.off += static_cast<double>(horizon - n.end);
    }
    const auto key = outcome_key(run.events());
    const Rational p(cpp_int(1), denom);
    dist.outcomes[key].prob += p;
    energy_weighted[key] += static_cast<double>(p) * radio_energy(model, rt);
  }

  void visit(const ProtocolRun& run, const cpp_int& denom) {
    if (run.finished()) {
      leaf(run, denom);
      return;
    }
    const auto& pending = run.pending();
    std::uint64_t combos = 1;
    for (const auto& d : pending) {
      combos *= static_cast<std::uint64_t>(d.window);
      if (combos > max_leaves) {
        throw Error(ErrorCode::TreeTooLarge,
                    "joint backoff tree exceeds " + std::to_string(max_leaves) + " leaves");
      }
    }
    const cpp_int child_denom = denom * combos;
    std::vector<int> values(pending.size(), 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::uint64_t rest = c;
      for (std::size_t k = 0; k < pending.size(); ++k) {
        const auto w = static_cast<std::uint64_t>(pending[k].window);
        values[k] = static_cast<int>(rest % w);
        rest /= w;
      }
      ProtocolRun child = run;
      child.apply(values);
      visit(child, child_denom);
    }
  }
};

}  // namespace

ExactDistribution enumerate_exact(const DerivedModel& model, std::uint64_t max_leaves) {
  Walker w{model, max_leaves, {}, {}};
  w.visit(ProtocolRun(model), cpp_int(1));
  for (auto& [key, o] : w.dist.outcomes) {
    o.energy_j = w.energy_weighted[key] / static_cast<double>(o.prob);
  }
  return std::move(w.dist);
}

MetricsReport exact_metrics(const DerivedModel& model, const ExactDistribution& dist) {
  MetricsReport m;
  m.n_nodes = model.n_nodes();
  m.coverage = static_cast<double>(dist.total());
  m.chain_count = dist.outcomes.size();
  Rational delivered = 0;
  std::map<Instant, Rational> pdf;
  double energy = 0.0;
  for (const auto& [key, o] : dist.outcomes) {
    for (const auto& [kind, start] : key) {
      if (kind != EventKind::Success) continue;
      delivered += o.prob;
      pdf[start + model.success_span] += o.prob;
    }
    energy += static_cast<double>(o.prob) * o.energy_j;
  }
  m.expected_successes = static_cast<double>(delivered);
  m.delivery_ratio = m.expected_successes / m.n_nodes;
  m.energy_j = energy;
  Rational mass = 0, weighted = 0;
  for (const auto& [t, p] : pdf) {
    m.latency_pdf[t] = static_cast<double>(p);
    mass += p;
    weighted += p * t;
  }
  if (mass > 0) m.latency_mean_s = model.to_seconds(static_cast<double>(weighted / mass));
  return m;
}

}  // namespace ecc
