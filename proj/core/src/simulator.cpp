#include "ecc/simulator.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "ecc/rng.hpp"
#include "kahan.hpp"

namespace ecc {

using detail::KahanSum;

OutcomeKey outcome_key(const std::vector<Event>& events) {
  OutcomeKey key;
  key.reserve(events.size());
  for (const auto& e : events) key.emplace_back(e.kind, e.start);
  return key;
}

RunRecord simulate_run(const DerivedModel& model, std::uint64_t seed, std::uint64_t run_index) {
  Xoshiro256 rng(seed, run_index);
  ProtocolRun run(model);
  std::vector<int> values;
  while (!run.finished()) {
    values.clear();
    for (const auto& d : run.pending()) {
      values.push_back(std::uniform_int_distribution<int>(0, d.window - 1)(rng));
    }
    run.apply(values);
  }

  RunRecord rec;
  rec.events = run.events();
  rec.nodes = run.nodes();
  rec.horizon = run.horizon();
  rec.delivered = run.delivered();
  for (const auto& n : rec.nodes) {
    rec.radio.rx += static_cast<double>(n.rx);
    rec.radio.tx += static_cast<double>(n.tx);
    rec.radio.idle += static_cast<double>(n.end - n.rx - n.tx);
    rec.radio.off += static_cast<double>(rec.horizon - n.end);
  }
  rec.energy_j = radio_energy(model, rec.radio);
  return rec;
}

namespace {

constexpr std::uint64_t kBlock = 4096;

// Integer tallies are exact; only the energy sums need compensation.
struct Block {
  std::uint64_t delivered = 0;
  std::uint64_t delivered_sq = 0;
  long double finish = 0;     // sum of success finishes per run
  long double finish_sq = 0;
  long double cross = 0;
  KahanSum energy;
  KahanSum energy_sq;
  std::map<Instant, std::uint64_t> pdf;
  std::map<OutcomeKey, std::uint64_t> histogram;
};

void run_block(const DerivedModel& model, const SimOptions& opt, std::uint64_t first,
               std::uint64_t last, Block& b) {
  for (std::uint64_t r = first; r < last; ++r) {
    const auto rec = simulate_run(model, opt.seed, r);
    std::uint64_t x = 0;
    for (const auto& e : rec.events) {
      if (e.kind != EventKind::Success) continue;
      x += static_cast<std::uint64_t>(e.finish);
      ++b.pdf[e.finish];
    }
    const auto y = static_cast<std::uint64_t>(rec.delivered);
    b.delivered += y;
    b.delivered_sq += y * y;
    b.finish += x;
    b.finish_sq += static_cast<long double>(x) * x;
    b.cross += static_cast<long double>(x) * y;
    b.energy += rec.energy_j;
    b.energy_sq += rec.energy_j * rec.energy_j;
    if (opt.keep_histogram) ++b.histogram[outcome_key(rec.events)];
  }
}

}  // namespace

SimReport simulate(const DerivedModel& model, const SimOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SimReport rep;
  rep.runs = opt.runs;
  const std::uint64_t n_blocks = (opt.runs + kBlock - 1) / kBlock;
  std::vector<Block> blocks(n_blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k; (k = next.fetch_add(1)) < n_blocks;) {
      run_block(model, opt, k * kBlock, std::min(opt.runs, (k + 1) * kBlock), blocks[k]);
    }
  };
  if (opt.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < opt.workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::uint64_t y = 0, yy = 0;
  long double x = 0, xx = 0, xy = 0;
  KahanSum e, ee;
  std::map<Instant, std::uint64_t> pdf;
  for (auto& b : blocks) {
    y += b.delivered;
    yy += b.delivered_sq;
    x += b.finish;
    xx += b.finish_sq;
    xy += b.cross;
    e += b.energy.value();
    ee += b.energy_sq.value();
    for (const auto& [t, c] : b.pdf) pdf[t] += c;
    for (auto& [key, c] : b.histogram) rep.histogram[key] += c;
  }

  const double n = static_cast<double>(opt.runs);
  const double nodes = model.n_nodes();
  auto& m = rep.metrics;
  m.n_nodes = model.n_nodes();
  m.theta = 0.0;
  m.coverage = opt.runs > 0 ? 1.0 : 0.0;
  m.chain_count = rep.histogram.size();
  m.expected_successes = static_cast<double>(y) / n;
  m.delivery_ratio = m.expected_successes / nodes;
  for (const auto& [t, c] : pdf) m.latency_pdf[t] = static_cast<double>(c) / n;
  m.energy_j = e.value() / n;

  auto variance = [n](long double sum, long double sum_sq) {
    if (n < 2) return 0.0L;
    return (sum_sq - sum * sum / n) / (n - 1);
  };
  const long double var_y = variance(y, yy);
  rep.delivery_ratio_se = static_cast<double>(std::sqrt(std::max(var_y, 0.0L) / n)) / nodes;
  rep.energy_se_j = static_cast<double>(
      std::sqrt(std::max(variance(e.value(), ee.value()), 0.0L) / n));
  if (y > 0) {
    const long double mean_y = static_cast<long double>(y) / n;
    const long double ratio = x / y;
    m.latency_mean_s = model.to_seconds(static_cast<double>(ratio));
    if (n >= 2) {
      const long double var_x = variance(x, xx);
      const long double cov = (xy - x * y / n) / (n - 1);
      const long double var_ratio =
          (var_x - 2 * ratio * cov + ratio * ratio * var_y) / (mean_y * mean_y) / n;
      rep.latency_mean_se_s = model.to_seconds(static_cast<double>(std::sqrt(std::max(var_ratio, 0.0L))));
    }
  }
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace ecc
