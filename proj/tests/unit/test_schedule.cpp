#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "ecc/schedule.hpp"
#include "support.hpp"

using namespace ecc;
using ecc::test::model_with;

namespace {

// Every (instant, stage, attempt) a single node can reach, found by walking
// its backoff choices directly: a busy CCA moves to the next stage, a
// collision to the next attempt.
std::set<std::tuple<Instant, int, int>> reachable(const DerivedModel& m) {
  std::set<std::tuple<Instant, int, int>> seen;
  std::vector<std::tuple<Instant, int, int>> todo;
  for (int w = 0; w < m.w[0]; ++w) todo.emplace_back(w * m.d_bp(), 1, 1);
  while (!todo.empty()) {
    auto cur = todo.back();
    todo.pop_back();
    if (!seen.insert(cur).second) continue;
    const auto [t, i, j] = cur;
    if (i < m.b_max) {
      for (int w = 0; w < m.w[static_cast<std::size_t>(i)]; ++w) {
        todo.emplace_back(t + m.timing().d_cca + m.timing().d_tat + w * m.d_bp(), i + 1, j);
      }
    }
    if (j < m.t_max) {
      for (int w = 0; w < m.w[0]; ++w) todo.emplace_back(t + m.d_rtx + w * m.d_bp(), 1, j + 1);
    }
  }
  return seen;
}

InstantSet slots(std::initializer_list<int> ks, Instant bp) {
  InstantSet s;
  for (int k : ks) s.push_back(k * bp);
  return s;
}

}  // namespace

TEST(Schedule, FirstBackoff) {
  const Schedule s(model_with(3));
  EXPECT_EQ(s.lambda_set({1, 1}), slots({0, 1, 2, 3, 4, 5, 6, 7}, 20));
}

TEST(Schedule, SecondStageCoversOneToTwentyThreeSlots) {
  const Schedule s(model_with(3));
  InstantSet expect;
  for (int k = 1; k <= 23; ++k) expect.push_back(k * 20);
  EXPECT_EQ(s.lambda_set({2, 1}), expect);
}

TEST(Schedule, SingleZeroWindow) {
  const Schedule s(model_with(1, 0.0, ecc::test::mac(0, 0, 0, 0)));
  EXPECT_EQ(s.lambda_set({1, 1}), InstantSet{0});
}

TEST(Schedule, OmegaBranches) {
  const Schedule s(model_with(3));
  EXPECT_TRUE(s.omega_set(40, {1, 1}).empty());
  EXPECT_EQ(s.omega_set(20, {2, 1}), InstantSet{0});
  EXPECT_TRUE(s.omega_set(10 * 20 + 7, {2, 1}).empty());
  EXPECT_TRUE(s.omega_set(0, {2, 1}).empty());
}

TEST(Schedule, MatchesSingleNodeWalk) {
  for (const auto& mac : {ecc::test::mac(3, 4, 2, 1), ecc::test::mac(1, 2, 1, 1),
                          ecc::test::mac(2, 3, 2, 2), ecc::test::mac(0, 1, 3, 0)}) {
    const auto m = model_with(2, 0.0, mac);
    const Schedule s(m);
    const auto all = reachable(m);
    for (int j = 1; j <= m.t_max; ++j) {
      for (int i = 1; i <= m.b_max; ++i) {
        InstantSet expect;
        for (const auto& [t, si, sj] : all) {
          if (si == i && sj == j) expect.push_back(t);
        }
        EXPECT_EQ(s.lambda_set({i, j}), expect) << "state (" << i << ", " << j << ")";
      }
    }
  }
}

TEST(Schedule, OmegaConsistentWithLambda) {
  const auto m = model_with(3);
  const Schedule s(m);
  for (int j = 1; j <= m.t_max; ++j) {
    for (int i = 1; i <= m.b_max; ++i) {
      if (i == 1 && j == 1) continue;
      for (Instant t = 0; t <= s.horizon() + 40; t += 20) {
        const auto om = s.omega_set(t, {i, j});
        EXPECT_EQ(s.contains({i, j}, t), !om.empty()) << i << ' ' << j << ' ' << t;
        for (Instant p : om) {
          if (i >= 2) {
            EXPECT_TRUE(s.contains({i - 1, j}, p));
          } else {
            bool any = false;
            for (int k = 1; k <= m.b_max; ++k) any = any || s.contains({k, j - 1}, p);
            EXPECT_TRUE(any);
          }
        }
      }
    }
  }
}

TEST(Schedule, InstantsOnSlotGrid) {
  const auto m = model_with(3);
  const Schedule s(m);
  for (int j = 1; j <= m.t_max; ++j) {
    for (int i = 1; i <= m.b_max; ++i) {
      const auto& set = s.lambda_set({i, j});
      EXPECT_TRUE(std::is_sorted(set.begin(), set.end()));
      EXPECT_EQ(std::adjacent_find(set.begin(), set.end()), set.end());
      for (Instant t : set) EXPECT_EQ(t % m.d_bp(), 0);
    }
  }
  EXPECT_TRUE(s.retransmission_set({1, m.t_max}).empty());
}
