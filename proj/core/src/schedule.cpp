#include "ecc/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecc {

namespace {

// { t* + offset + w * d_bp : t* in base, w in [0, window) }
InstantSet shift_spread(const InstantSet& base, Instant offset, int window, Instant d_bp) {
  InstantSet out;
  out.reserve(base.size() + static_cast<std::size_t>(window));
  for (Instant t : base) {
    for (int w = 0; w < window; ++w) out.push_back(t + offset + w * d_bp);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_set(const InstantSet& set, Instant t) {
  return std::binary_search(set.begin(), set.end(), t);
}

}  // namespace

Schedule::Schedule(const DerivedModel& model)
    : b_max_(model.b_max),
      t_max_(model.t_max),
      d_bp_(model.d_bp()),
      cca_step_(model.cca_step),
      d_rtx_(model.d_rtx),
      w_(model.w) {
  const auto n = static_cast<std::size_t>(b_max_ * t_max_);
  lambda_.resize(n);
  retx_.resize(n);

  InstantSet first;
  for (int w = 0; w < w_[0]; ++w) first.push_back(w * d_bp_);
  lambda_[index({1, 1})] = std::move(first);

  for (int j = 1; j <= t_max_; ++j) {
    if (j >= 2) {
      InstantSet merged;
      for (int i = 1; i <= b_max_; ++i) {
        const auto& r = retx_[index({i, j - 1})];
        merged.insert(merged.end(), r.begin(), r.end());
      }
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      lambda_[index({1, j})] = std::move(merged);
    }
    for (int i = 2; i <= b_max_; ++i) {
      lambda_[index({i, j})] =
          shift_spread(lambda_[index({i - 1, j})], cca_step_, w_[static_cast<std::size_t>(i - 1)], d_bp_);
    }
    if (j < t_max_) {
      for (int i = 1; i <= b_max_; ++i) {
        retx_[index({i, j})] = shift_spread(lambda_[index({i, j})], d_rtx_, w_[0], d_bp_);
      }
    }
  }
  for (const auto& set : lambda_) {
    if (!set.empty()) horizon_ = std::max(horizon_, set.back());
  }
}

std::size_t Schedule::index(StateIndex s) const {
  if (s.stage < 1 || s.stage > b_max_ || s.attempt < 1 || s.attempt > t_max_) {
    throw std::out_of_range("state index outside [1, B_max] x [1, T_max]");
  }
  return static_cast<std::size_t>((s.attempt - 1) * b_max_ + (s.stage - 1));
}

const InstantSet& Schedule::lambda_set(StateIndex s) const { return lambda_[index(s)]; }

const InstantSet& Schedule::retransmission_set(StateIndex s) const { return retx_[index(s)]; }

bool Schedule::contains(StateIndex s, Instant t) const { return in_set(lambda_set(s), t); }

InstantSet Schedule::omega_set(Instant t, StateIndex s) const {
  InstantSet out;
  index(s);
  if (s.stage == 1 && s.attempt == 1) return out;

  if (s.stage >= 2) {
    const auto& prev = lambda_set({s.stage - 1, s.attempt});
    for (int w = w_[static_cast<std::size_t>(s.stage - 1)] - 1; w >= 0; --w) {
      const Instant cand = t - cca_step_ - w * d_bp_;
      if (cand >= 0 && in_set(prev, cand)) out.push_back(cand);
    }
    return out;
  }

  for (int w = w_[0] - 1; w >= 0; --w) {
    const Instant cand = t - d_rtx_ - w * d_bp_;
    if (cand < 0) continue;
    for (int i = 1; i <= b_max_; ++i) {
      if (in_set(lambda_set({i, s.attempt - 1}), cand)) {
        out.push_back(cand);
        break;
      }
    }
  }
  return out;
}

}  // namespace ecc
