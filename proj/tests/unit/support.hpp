#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>

#include "ecc/params.hpp"

namespace ecc::test {

inline DerivedModel model_with(int n, double theta = 0.0, MacParams mac = {}, TimingParams timing = {}) {
  ModelConfig c;
  c.n_nodes = n;
  c.theta = theta;
  c.mac = mac;
  c.timing = timing;
  return derive(c);
}

inline MacParams mac(int min_be, int max_be, int backoffs, int retries) {
  return MacParams{min_be, max_be, backoffs, retries};
}

// Plain ceil-to-grid, written out independently of DerivedModel::align_up.
inline std::int64_t ceil_to(std::int64_t x, std::int64_t grid) {
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(x) / static_cast<double>(grid))) * grid;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Small random MAC configuration for property tests.
inline MacParams random_mac(std::mt19937_64& rng, int max_min_be = 2, int max_backoffs = 2,
                            int max_retries = 1) {
  std::uniform_int_distribution<int> be(0, max_min_be);
  const int lo = be(rng);
  const int hi = std::uniform_int_distribution<int>(lo, lo + 1)(rng);
  return MacParams{lo, hi, std::uniform_int_distribution<int>(0, max_backoffs)(rng),
                   std::uniform_int_distribution<int>(0, max_retries)(rng)};
}

}  // namespace ecc::test
