#include <gtest/gtest.h>

#include <set>

#include "ecc/engine.hpp"
#include "ecc/error.hpp"
#include "support.hpp"

using namespace ecc;
using ecc::test::model_with;

namespace {

double total(const EccResult& r) {
  double s = 0;
  for (const auto& c : r.chains) s += c.prob;
  return s;
}

std::set<std::vector<Event>> sequences(const EccResult& r) {
  std::set<std::vector<Event>> out;
  for (const auto& c : r.chains) out.insert(c.chain.events());
  return out;
}

}  // namespace

TEST(Engine, SingleNode) {
  const auto r = run_ecc(model_with(1));
  ASSERT_EQ(r.chains.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto ev = r.chains[i].chain.events();
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].kind, EventKind::Success);
    EXPECT_EQ(ev[0].start, static_cast<Instant>(i) * 20);
    EXPECT_DOUBLE_EQ(r.chains[i].prob, 1.0 / 8.0);
  }
}

TEST(Engine, ExactModeIsNormalised) {
  for (int n = 1; n <= 3; ++n) {
    const auto r = run_ecc(model_with(n));
    EXPECT_NEAR(total(r), 1.0, 1e-9) << n;
    EXPECT_FALSE(r.budget_exceeded);
  }
}

TEST(Engine, ThresholdIsRespected) {
  const auto r = run_ecc(model_with(4, 1e-4));
  for (const auto& c : r.chains) EXPECT_GE(c.prob, 1e-4);
}

TEST(Engine, PruningIsMonotone) {
  const auto r0 = run_ecc(model_with(3, 0.0));
  const auto r1 = run_ecc(model_with(3, 1e-6));
  const auto r2 = run_ecc(model_with(3, 1e-4));
  EXPECT_GE(total(r0), total(r1));
  EXPECT_GE(total(r1), total(r2));
  const auto s0 = sequences(r0), s1 = sequences(r1), s2 = sequences(r2);
  EXPECT_TRUE(std::includes(s0.begin(), s0.end(), s1.begin(), s1.end()));
  EXPECT_TRUE(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()));
}

TEST(Engine, WorkerCountDoesNotChangeResults) {
  ModelConfig cfg;
  cfg.n_nodes = 5;
  cfg.theta = 1e-6;
  cfg.workers = 1;
  const auto ref = run_ecc(derive(cfg));
  for (int w : {2, 4}) {
    cfg.workers = w;
    const auto r = run_ecc(derive(cfg));
    ASSERT_EQ(r.chains.size(), ref.chains.size()) << w;
    for (std::size_t k = 0; k < r.chains.size(); ++k) {
      EXPECT_EQ(r.chains[k].chain, ref.chains[k].chain);
      EXPECT_EQ(r.chains[k].prob, ref.chains[k].prob);
      EXPECT_EQ(r.chains[k].energy, ref.chains[k].energy);
    }
    EXPECT_EQ(r.examined, ref.examined);
  }
}

TEST(Engine, BudgetStopsEarly) {
  ModelConfig cfg;
  cfg.n_nodes = 4;
  cfg.max_chains = 100;
  const auto r = run_ecc(derive(cfg));
  EXPECT_TRUE(r.budget_exceeded);
  EXPECT_EQ(r.examined, 100u);
  EXPECT_LT(total(r), 1.0);
}

TEST(Engine, ChainsAreSortedAndDisjointInTime) {
  const auto r = run_ecc(model_with(4, 1e-5));
  for (std::size_t k = 1; k < r.chains.size(); ++k) {
    EXPECT_TRUE(chain_less(r.chains[k - 1].chain, r.chains[k].chain));
  }
  for (const auto& c : r.chains) {
    const auto ev = c.chain.events();
    for (std::size_t k = 1; k < ev.size(); ++k) EXPECT_GE(ev[k].start, ev[k - 1].finish);
    EXPECT_LE(c.chain.n_success(), 4);
  }
}

TEST(Engine, ProgressIsReported) {
  int calls = 0;
  RunOptions opt;
  opt.progress = [&](const Progress& p) {
    ++calls;
    EXPECT_GT(p.examined, 0u);
  };
  opt.progress_interval = std::chrono::milliseconds(0);
  run_ecc(model_with(3, 1e-4), opt);
  EXPECT_GT(calls, 0);
}
