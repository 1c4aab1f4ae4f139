#include "ecc/examine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecc/error.hpp"
#include "kahan.hpp"

namespace ecc {

using detail::KahanSum;

namespace {

Instant slot_of(const DerivedModel& model, Instant t) { return t / model.d_bp(); }

// Order statistics of a group of n independent nodes that have not
// transmitted before slot i: each transmits at i with probability a and
// later with probability A. Indexed by n.
struct GroupStats {
  std::vector<double> p0;  // nobody at i
  std::vector<double> p1;  // exactly one at i
  std::vector<double> p2;  // two or more at i
  std::vector<double> k2;  // E[k ; k >= 2], k = transmitters at i

  void compute(int n_max, double a, double A) {
    const auto n = static_cast<std::size_t>(n_max) + 1;
    p0.assign(n, 0.0);
    p1.assign(n, 0.0);
    p2.assign(n, 0.0);
    k2.assign(n, 0.0);
    p0[0] = 1.0;
    const double stay = A + a;
    for (std::size_t k = 1; k < n; ++k) {
      p0[k] = p0[k - 1] * A;
      p1[k] = p1[k - 1] * A + p0[k - 1] * a;
      p2[k] = p2[k - 1] * stay + p1[k - 1] * a;
      k2[k] = k2[k - 1] * stay + p2[k - 1] * a + 2.0 * p1[k - 1] * a;
    }
  }
  double none_before(std::size_t n) const { return p0[n] + p1[n] + p2[n]; }
};

// Suffix sums s[i] = sum_{k >= i} v[k], with s[v.size()] = 0.
std::vector<double> tail_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size() + 1, 0.0);
  KahanSum acc;
  for (std::size_t i = v.size(); i-- > 0;) {
    acc += v[i];
    out[i] = acc.value();
  }
  return out;
}

std::vector<double> binomial_row(int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 0; k < n; ++k) {
    row[static_cast<std::size_t>(k) + 1] = row[static_cast<std::size_t>(k)] * (n - k) / (k + 1);
  }
  return row;
}

int residual_nodes(const DerivedModel& model, const Chain& chain) {
  return model.n_nodes() - chain.n_success();
}

void require_nonempty(const Chain& chain) {
  if (chain.empty()) throw Error(ErrorCode::InvalidComposition, "chain has no events");
}

}  // namespace

Instant max_wait_slots(const DerivedModel& model, EventKind last) {
  const Instant backoff = model.w.back() - 1;
  if (last == EventKind::Success) return backoff;
  const Instant retry = (model.d_rtx - model.failure_span) / model.d_bp() + model.w.front() - 1;
  return std::max(backoff, retry);
}

ChannelHistory channel_history(const DerivedModel& model, const Chain& chain) {
  require_nonempty(chain);
  ChannelHistory h;
  const auto& last = chain.last();
  h.last_kind = last.kind;
  h.t_m = slot_of(model, last.start);
  h.f_m = slot_of(model, last.finish);
  h.s_max = h.f_m + max_wait_slots(model, last.kind);
  const auto n = static_cast<std::size_t>(h.s_max) + 1;
  h.busy.assign(n, 0);
  h.fail_start.assign(n, 0);
  for (const auto& e : chain.events()) {
    const Instant s = slot_of(model, e.start);
    const Instant f = slot_of(model, e.finish);
    for (Instant t = s + 1; t < f; ++t) h.busy[static_cast<std::size_t>(t)] = 1;
    if (e.kind == EventKind::Failure) h.fail_start[static_cast<std::size_t>(s)] = 1;
  }
  return h;
}

InstantSet infeasible_set(const DerivedModel& model, const Chain& chain) {
  const auto h = channel_history(model, chain);
  InstantSet out;
  for (Instant t = 0; t < h.f_m; ++t) {
    if (!h.feasible(t)) out.push_back(t * model.d_bp());
  }
  return out;
}

CondCcaTable::CondCcaTable(const DerivedModel& model, const Chain& chain)
    : hist_(channel_history(model, chain)),
      b_max_(model.b_max),
      t_max_(model.t_max),
      d_bp_(model.d_bp()),
      width_(static_cast<std::size_t>(hist_.s_max) + 1) {
  main_.assign(static_cast<std::size_t>(b_max_ * t_max_) * width_, 0.0);
  participant_.assign(width_, 0.0);

  const Instant f_m = hist_.f_m;
  const Instant s_max = hist_.s_max;
  const Instant step = model.cca_step / d_bp_;
  const Instant rtx = model.d_rtx / d_bp_;
  const int w1 = model.w.front();
  const bool last_failure = hist_.last_kind == EventKind::Failure;
  double lost = 0.0;

  // Spread `v` uniformly over the feasible landings base + w, w < window.
  auto spread = [&](std::vector<double>& dst, std::size_t off, double v, Instant base, int window) {
    int feasible = 0;
    for (int w = 0; w < window; ++w) {
      if (hist_.feasible(base + w)) ++feasible;
    }
    if (feasible == 0) {
      lost += v;
      return;
    }
    const double share = v / feasible;
    for (int w = 0; w < window; ++w) {
      const Instant t = base + w;
      if (!hist_.feasible(t)) continue;
      if (t > s_max) throw Error(ErrorCode::NormalizationViolation, "CCA landing beyond table horizon");
      dst[off + static_cast<std::size_t>(t)] += share;
    }
  };

  {
    int feasible = 0;
    for (Instant t = 0; t < w1; ++t) feasible += hist_.feasible(t) ? 1 : 0;
    if (feasible == 0) {
      lost = 1.0;
    } else {
      for (Instant t = 0; t < w1; ++t) {
        if (hist_.feasible(t)) main_[offset(1, 1) + static_cast<std::size_t>(t)] = 1.0 / feasible;
      }
    }
  }

  const Instant past_end = std::min(f_m, s_max + 1);
  for (int j = 1; j <= t_max_; ++j) {
    if (j >= 2) {
      for (int i = 1; i <= b_max_; ++i) {
        const auto src = offset(i, j - 1);
        for (Instant t = 0; t < past_end; ++t) {
          const double v = main_[src + static_cast<std::size_t>(t)];
          if (v == 0.0 || !hist_.fail_start[static_cast<std::size_t>(t)]) continue;
          if (last_failure && t == hist_.t_m) {
            spread(participant_, 0, v, t + rtx, w1);
          } else {
            spread(main_, offset(1, j), v, t + rtx, w1);
          }
        }
      }
    }
    for (int i = 2; i <= b_max_; ++i) {
      const auto src = offset(i - 1, j);
      const int window = model.window(i);
      for (Instant t = 0; t < past_end; ++t) {
        const double v = main_[src + static_cast<std::size_t>(t)];
        if (v == 0.0 || !hist_.busy[static_cast<std::size_t>(t)]) continue;
        spread(main_, offset(i, j), v, t + step, window);
      }
    }
  }

  leaked_ = std::clamp(lost, 0.0, 1.0);
  if (lost <= 0.0) return;
  if (lost >= 1.0) {
    std::fill(main_.begin(), main_.end(), 0.0);
    std::fill(participant_.begin(), participant_.end(), 0.0);
    return;
  }

  // Condition on the node's path being consistent with the chain. Entries
  // at or after f_m, drops and retries of the last event end a path; an
  // earlier entry is weighted by the probability that the path through it
  // ends without hitting a dead end.
  std::vector<double> survive(main_.size(), 1.0);
  auto onward = [&](int stage, int attempt, Instant base, int window) {
    double sum = 0.0;
    int feasible = 0;
    for (int w = 0; w < window; ++w) {
      const Instant t = base + w;
      if (!hist_.feasible(t)) continue;
      ++feasible;
      sum += t >= f_m ? 1.0 : survive[offset(stage, attempt) + static_cast<std::size_t>(t)];
    }
    return feasible == 0 ? 0.0 : sum / feasible;
  };
  for (Instant t = past_end - 1; t >= 0; --t) {
    const auto ut = static_cast<std::size_t>(t);
    for (int j = 1; j <= t_max_; ++j) {
      for (int i = 1; i <= b_max_; ++i) {
        double& s = survive[offset(i, j) + ut];
        if (hist_.busy[ut]) {
          s = i == b_max_ ? 1.0 : onward(i + 1, j, t + step, model.window(i + 1));
        } else if (hist_.fail_start[ut]) {
          s = (j == t_max_ || (last_failure && t == hist_.t_m)) ? 1.0 : onward(1, j + 1, t + rtx, w1);
        }
      }
    }
  }
  const double z = 1.0 - lost;
  for (int j = 1; j <= t_max_; ++j) {
    for (int i = 1; i <= b_max_; ++i) {
      for (Instant t = 0; t < past_end; ++t) {
        main_[offset(i, j) + static_cast<std::size_t>(t)] *= survive[offset(i, j) + static_cast<std::size_t>(t)];
      }
    }
  }
  for (auto& v : main_) v /= z;
  for (auto& v : participant_) v /= z;
}

double CondCcaTable::at(StateIndex s, Instant t) const {
  if (s.stage < 1 || s.stage > b_max_ || s.attempt < 1 || s.attempt > t_max_) return 0.0;
  if (t < 0 || t % d_bp_ != 0 || t / d_bp_ > hist_.s_max) return 0.0;
  return main_slot(s.stage, s.attempt, t / d_bp_) +
         (s.stage == 1 ? participant_slot(t / d_bp_) : 0.0);
}

double CondCcaTable::main_marginal_slot(Instant slot) const {
  KahanSum acc;
  for (int j = 1; j <= t_max_; ++j) {
    for (int i = 1; i <= b_max_; ++i) acc += main_slot(i, j, slot);
  }
  return acc.value();
}

double CondCcaTable::nonparticipant(Instant t) const {
  if (t < 0 || t % d_bp_ != 0 || t / d_bp_ > hist_.s_max) return 0.0;
  return main_marginal_slot(t / d_bp_);
}

double CondCcaTable::marginal(Instant t) const {
  if (t < 0 || t % d_bp_ != 0 || t / d_bp_ > hist_.s_max) return 0.0;
  return main_marginal_slot(t / d_bp_) + participant_slot(t / d_bp_);
}

Residuals residual_probs(const DerivedModel& model, const Chain& chain, const CondCcaTable& table) {
  Residuals r;
  if (residual_nodes(model, chain) == 0) return r;
  const auto& h = table.history();
  const int b = table.b_max();
  const int tm = table.t_max();

  if (table.leaked() >= 1.0) {
    // No CCA path of a single node is consistent with the chain; such a
    // node cannot exist, so every residual is counted as having given up.
    r.p_fcca = 1.0;
    return r;
  }

  KahanSum fcca, frtx, frtx_last, ap, anp;
  for (Instant t = 0; t < h.f_m; ++t) {
    if (h.busy_at(t)) {
      for (int j = 1; j <= tm; ++j) fcca += table.main_slot(b, j, t);
    } else if (h.fail_start_at(t)) {
      for (int i = 1; i <= b; ++i) {
        const double v = table.main_slot(i, tm, t);
        frtx += v;
        if (h.last_kind == EventKind::Failure && t == h.t_m) frtx_last += v;
      }
    }
  }
  for (Instant t = h.f_m; t <= h.s_max; ++t) {
    ap += table.participant_slot(t);
    anp += table.main_marginal_slot(t);
  }
  r.p_fcca = fcca.value();
  r.p_frtx = frtx.value();
  r.p_frtx_last = frtx_last.value();
  r.p_ap = ap.value();
  r.p_anp = anp.value();

  if (std::abs(r.sum() - 1.0) > 1e-6) {
    throw Error(ErrorCode::NormalizationViolation,
                "residual probabilities sum to " + std::to_string(r.sum()));
  }
  return r;
}

CompositionWeights::CompositionWeights(EventKind last, int n_r, const Residuals& r) : n_r_(n_r) {
  const auto dim = static_cast<std::size_t>(n_r) + 1;
  w_.assign(dim * dim, 0.0);
  auto cell = [&](int a, int b) -> double& {
    return w_[static_cast<std::size_t>(a) * dim + static_cast<std::size_t>(b)];
  };
  const double p_d = r.p_dropped();
  const auto c_nr = binomial_row(n_r);

  auto unmasked = [&](bool allow_participants) {
    for (int a = 0; a <= (allow_participants ? n_r : 0); ++a) {
      const auto c_rest = binomial_row(n_r - a);
      for (int b = 0; a + b <= n_r; ++b) {
        cell(a, b) = c_nr[static_cast<std::size_t>(a)] * c_rest[static_cast<std::size_t>(b)] *
                     std::pow(r.p_ap, a) * std::pow(r.p_anp, b) * std::pow(p_d, n_r - a - b);
      }
    }
  };

  if (last == EventKind::Success) {
    unmasked(false);
    return;
  }

  // A failure needs at least two transmitters, so among the residual nodes
  // the active participants plus those that gave up in that very event must
  // number two or more.
  const double p_dt = r.p_frtx_last;
  const double p_do = std::max(p_d - p_dt, 0.0);
  // masked_tail[a][n]: sum over d_t >= 2 - a of C(n, d_t) p_dt^d_t p_do^(n - d_t).
  std::vector<double> tail0(dim, 0.0), tail1(dim, 0.0);
  for (int n = 0; n <= n_r; ++n) {
    const auto c = binomial_row(n);
    KahanSum s0, s1;
    for (int d = 1; d <= n; ++d) {
      const double term = c[static_cast<std::size_t>(d)] * std::pow(p_dt, d) * std::pow(p_do, n - d);
      s1 += term;
      if (d >= 2) s0 += term;
    }
    tail0[static_cast<std::size_t>(n)] = s0.value();
    tail1[static_cast<std::size_t>(n)] = s1.value();
  }
  KahanSum z;
  for (int a = 0; a <= n_r; ++a) {
    const auto c_rest = binomial_row(n_r - a);
    for (int b = 0; a + b <= n_r; ++b) {
      const int n = n_r - a - b;
      const double tail = a >= 2 ? std::pow(p_d, n)
                          : a == 1 ? tail1[static_cast<std::size_t>(n)]
                                   : tail0[static_cast<std::size_t>(n)];
      cell(a, b) = c_nr[static_cast<std::size_t>(a)] * c_rest[static_cast<std::size_t>(b)] *
                   std::pow(r.p_ap, a) * std::pow(r.p_anp, b) * tail;
      z += cell(a, b);
    }
  }
  if (z.value() > 0.0) {
    for (auto& v : w_) v /= z.value();
  } else {
    unmasked(true);
  }
}

double composition_prob(const DerivedModel& model, const Chain& chain, const Residuals& r,
                        const NodeComposition& comp) {
  require_nonempty(chain);
  const int n_r = residual_nodes(model, chain);
  if (comp.n_p < 0 || comp.n_np < 0 || comp.n_d < 0 || comp.total() != n_r) {
    throw Error(ErrorCode::InvalidComposition,
                "composition [" + std::to_string(comp.n_p) + ", " + std::to_string(comp.n_np) +
                    ", " + std::to_string(comp.n_d) + "] does not partition " +
                    std::to_string(n_r) + " residual nodes");
  }
  if (n_r == 0) return 1.0;
  return CompositionWeights(chain.last().kind, n_r, r)(comp.n_p, comp.n_np);
}

double no_txs_prob(const DerivedModel& model, const Chain& chain, const Residuals& r) {
  require_nonempty(chain);
  const int n_r = residual_nodes(model, chain);
  return composition_prob(model, chain, r, {0, 0, n_r});
}

std::vector<NextEvent> next_event_probs(const DerivedModel& model, const Chain& chain,
                                        const CondCcaTable& table, const Residuals& r) {
  require_nonempty(chain);
  std::vector<NextEvent> out;
  const int n_r = residual_nodes(model, chain);
  if (n_r == 0) return out;

  const auto& h = table.history();
  const auto span = static_cast<std::size_t>(h.s_max - h.f_m) + 1;
  std::vector<double> p_np(span, 0.0), p_p(span, 0.0);
  for (std::size_t i = 0; i < span; ++i) {
    const Instant t = h.f_m + static_cast<Instant>(i);
    if (r.p_anp > 0.0) p_np[i] = table.main_marginal_slot(t) / r.p_anp;
    if (r.p_ap > 0.0) p_p[i] = table.participant_slot(t) / r.p_ap;
  }
  const auto tail_np = tail_sums(p_np);
  const auto tail_p = tail_sums(p_p);

  const CompositionWeights weights(h.last_kind, n_r, r);
  const int max_p = h.last_kind == EventKind::Failure ? n_r : 0;

  GroupStats gp, gnp;
  for (std::size_t i = 0; i < span; ++i) {
    gnp.compute(n_r, p_np[i], tail_np[i + 1]);
    gp.compute(max_p, p_p[i], tail_p[i + 1]);
    KahanSum s, f, kf;
    for (int a = 0; a <= max_p; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      for (int b = 0; a + b <= n_r; ++b) {
        if (a + b == 0) continue;
        const double w = weights(a, b);
        if (w == 0.0) continue;
        const auto ub = static_cast<std::size_t>(b);
        s += w * (gnp.p1[ub] * gp.p0[ua] + gp.p1[ua] * gnp.p0[ub]);
        f += w * (gp.p2[ua] * gnp.none_before(ub) + gp.p1[ua] * (gnp.p1[ub] + gnp.p2[ub]) +
                  gp.p0[ua] * gnp.p2[ub]);
        kf += w * (gp.k2[ua] * gnp.none_before(ub) + gp.p2[ua] * (gnp.p1[ub] + gnp.k2[ub]) +
                   gp.p1[ua] * (gnp.p1[ub] + gnp.p2[ub]) + gp.p1[ua] * (gnp.p1[ub] + gnp.k2[ub]) +
                   gp.p0[ua] * gnp.k2[ub]);
      }
    }
    const Instant start = (h.f_m + static_cast<Instant>(i)) * model.d_bp();
    if (s.value() > 0.0) {
      out.push_back({make_event(model, EventKind::Success, start), s.value(), 1.0});
    }
    if (f.value() > 0.0) {
      out.push_back({make_event(model, EventKind::Failure, start), f.value(), kf.value() / f.value()});
    }
  }
  return out;
}

std::vector<NextEvent> initial_events(const DerivedModel& model) {
  std::vector<NextEvent> out;
  const int n = model.n_nodes();
  const int w1 = model.w.front();
  GroupStats g;
  for (int i = 0; i < w1; ++i) {
    g.compute(n, 1.0 / w1, static_cast<double>(w1 - i - 1) / w1);
    const auto un = static_cast<std::size_t>(n);
    const Instant start = i * model.d_bp();
    if (g.p1[un] > 0.0) out.push_back({make_event(model, EventKind::Success, start), g.p1[un], 1.0});
    if (g.p2[un] > 0.0) {
      out.push_back({make_event(model, EventKind::Failure, start), g.p2[un], g.k2[un] / g.p2[un]});
    }
  }
  return out;
}

Examination examine(const DerivedModel& model, const Chain& chain) {
  require_nonempty(chain);
  Examination ex;
  if (residual_nodes(model, chain) == 0) return ex;

  const CondCcaTable table(model, chain);
  ex.residuals = residual_probs(model, chain, table);
  ex.residual_error = std::abs(ex.residuals.sum() - 1.0);
  ex.leaked = table.leaked();
  ex.no_txs = no_txs_prob(model, chain, ex.residuals);
  ex.next = next_event_probs(model, chain, table, ex.residuals);

  const auto& h = table.history();
  KahanSum busy;
  for (Instant t = 0; t < h.f_m; ++t) {
    if (h.busy_at(t)) busy += table.main_marginal_slot(t);
  }
  ex.busy_ccas = busy.value();

  KahanSum total;
  total += ex.no_txs;
  for (const auto& e : ex.next) total += e.prob;
  ex.conservation_error = std::abs(total.value() - 1.0);
  return ex;
}

}  // namespace ecc
